"""Command-line front end.

Ring contexts are given with ``--ring``:

* ``<field>{t}`` twisted polynomials, ``<field>{{t}}`` and ``<field>((t))``
  truncated power and Laurent series;
* ``<field>[d1]`` (or ``[d2]``, ...) a single derivation, ``<field>[d1,d2]``
  the multivariate operator ring, ``<field>[d]`` a central generator.

``--field`` alone means the twisted ring over that field. The exit status is
0 on success, 1 when a computation fails and 2 for usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .carlitz import (CarlitzSpec, CommutativePoly, carlitz_eval, carlitz_preimage, centralizer_basis, mrdp_d,
                      mrdp_d_inv)
from .descend import descend_system, parse_system, solutions_equiv
from .errors import OrelabError, ParseError, RingSpecError
from .fields import field_make
from .godel import decode_fraction, decode_poly, encode_fraction, encode_poly, factored
from .ore import OreEnv, OrePoly, OreRing, left_divmod, ore_pair_search, right_divmod
from .orefrac import OreFraction, frac_canonical, frac_eq, frac_inv, supports_canonical
from .parsing import Env, evaluate, parse_expression, split_top_level
from .series import (CommutativeSeries, TwistedSeries, parse_component_tuple, parse_series, series_d, series_inv,
                     series_mul, series_mul_decomposed)
from .verifier import (LEMMAS, build_similarity_table, carlitz_ring, count_report, phi_k_spec,
                       verify_centralizer_eq, verify_difference_growth, verify_phik_intersection,
                       verify_truncation_lemma)
from .weyl import DiffOp, WeylEnv, WeylRing, kappa_generator_report, weyl_ore_pair_search

DEFAULT_SEED = 0


@dataclass
class Context:
    """A resolved ring context."""

    kind: str          # twisted | series | laurent | differential | weyl
    field: object
    ring: object = None

    def describe(self) -> str:
        if self.kind in ("series", "laurent"):
            suffix = "{{t}}" if self.kind == "series" else "((t))"
            return self.field.describe() + suffix
        return self.ring.describe()


def parse_ring(text: str) -> Context:
    """Resolve a ring description such as ``GF(4;x^2+x+1;q=2){t}`` or ``QQ(x1,x2)[d1,d2]``."""
    s = text.strip()
    for suffix, kind in (("{{t}}", "series"), ("((t))", "laurent")):
        if s.endswith(suffix):
            F = field_make(s[: -len(suffix)])
            if not F.characteristic or not F.q:
                raise RingSpecError(f"twisted series need characteristic p > 0; got {F.describe()}")
            return Context(kind, F)
    if s.endswith("{t}"):
        F = field_make(s[:-3])
        return Context("twisted", F, OreRing(F, "twisted"))
    m = re.fullmatch(r"(.*)\[([^\[\]]*)\]", s)
    if m:
        F = field_make(m.group(1))
        gens = [g.strip() for g in m.group(2).split(",") if g.strip()]
        if gens == ["d"]:
            # d/dx over a one-variable field; a central generator over constants
            if F.nvars == 0:
                return Context("differential", F, OreRing(F, "central"))
            if F.nvars == 1:
                return Context("differential", F, OreRing(F, "differential", var=1, gen="d"))
            raise RingSpecError(f"{F.describe()} has several variables; name the derivation as d1, d2, ...")
        idx = []
        for g in gens:
            mm = re.fullmatch(r"d(\d+)", g)
            if not mm:
                raise RingSpecError(f"unknown generator {g!r}")
            idx.append(int(mm.group(1)))
        if len(idx) == 1:
            return Context("differential", F, OreRing(F, "differential", var=idx[0]))
        if idx != list(range(1, len(idx) + 1)):
            raise RingSpecError("multivariate operator rings use generators d1, ..., dk in order")
        return Context("weyl", F, WeylRing(F, len(idx)))
    raise RingSpecError(f"malformed ring description {text!r}")


def context_from_args(args, default_kind: str = "twisted") -> Context:
    if getattr(args, "ring", None):
        return parse_ring(args.ring)
    if getattr(args, "field", None):
        F = field_make(args.field)
        if default_kind == "weyl":
            return Context("weyl", F, WeylRing(F))
        return Context("twisted", F, OreRing(F, "twisted"))
    raise RingSpecError("give a ring with --ring or a field with --field")


class FractionEnv(Env):
    """Element grammar extended by ``inv(x)``, ``frac(den; num)`` and division by ring elements."""

    def __init__(self, inner: Env, ring):
        self.inner = inner
        self.ring = ring

    def number(self, n, pos):
        return self.inner.number(n, pos)

    def name(self, name, pos):
        return self.inner.name(name, pos)

    def _frac(self, x):
        if isinstance(x, OreFraction):
            return x
        return OreFraction.embed(self.ring.coerce(x))

    def call(self, name, args, pos, ev):
        if name == "inv" and len(args) == 1:
            return frac_inv(self._frac(ev(args[0])))
        if name == "frac" and len(args) == 2:
            return OreFraction(self.ring.coerce(ev(args[0])), self.ring.coerce(ev(args[1])))
        raise ParseError(f"unknown function {name!r}", pos)

    def divide(self, a, b, pos):
        if isinstance(a, OreFraction) or isinstance(b, OreFraction):
            return self._frac(a) * frac_inv(self._frac(b))
        try:
            return self.inner.divide(a, b, pos)
        except ParseError:
            return self._frac(a) * frac_inv(self._frac(b))

    def power(self, a, n, pos):
        if n < 0 or isinstance(a, OreFraction):
            return self._frac(a) ** n
        return self.inner.power(a, n, pos)


def _element_env(ctx: Context) -> Env:
    if ctx.kind == "weyl":
        return WeylEnv(ctx.ring)
    return OreEnv(ctx.ring)


def parse_element(text: str, ctx: Context):
    """Parse an element of the context ring; fraction syntax yields an OreFraction."""
    if ctx.kind in ("series", "laurent"):
        return parse_series(text, ctx.field)
    env = FractionEnv(_element_env(ctx), ctx.ring)
    value = evaluate(parse_expression(text), env)
    if isinstance(value, OreFraction):
        return value
    return ctx.ring.coerce(value)


def parse_T_poly(text: str, field) -> CommutativePoly:
    """Parse a polynomial in the commuting variable T."""

    class TEnv(Env):
        def __init__(self):
            self.table = dict(field.symbols())
            self.table["T"] = CommutativePoly(field, [field.zero, field.one])

        def number(self, n, pos):
            return CommutativePoly(field, [field.from_int(n)])

        def name(self, name, pos):
            if name not in self.table:
                raise ParseError(f"unknown symbol {name!r}", pos)
            v = self.table[name]
            return v if isinstance(v, CommutativePoly) else CommutativePoly(field, [v.raw])

        def tuple(self, items, pos, ev):
            return tuple(ev(i) for i in items)

        def divide(self, a, b, pos):
            if b.degree() != 0:
                raise ParseError("division by a non-constant", pos)
            return a * CommutativePoly(field, [field.inv(b.coeffs[0])])

    value = evaluate(parse_expression(text), TEnv())
    if not isinstance(value, CommutativePoly):
        raise ParseError("expected a polynomial in T")
    return value


def parse_T_tuple(text: str, field) -> list[CommutativePoly]:
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    return [parse_T_poly(p, field) for p in split_top_level(s, ";")]


def _show(x) -> str:
    return str(x)


class Output:
    def __init__(self, args):
        self.json = getattr(args, "json", False)
        self.command = getattr(args, "command", None)

    def emit(self, result, text: str | None = None, **extra):
        if self.json:
            obj = {"command": self.command, "result": result}
            obj.update(extra)
            print(json.dumps(obj, sort_keys=True))
        else:
            print(text if text is not None else result)

    def report(self, rep):
        if self.json:
            print(json.dumps(rep.to_json(), sort_keys=True))
        else:
            line = f"{rep.lemma}: {rep.verdict}"
            if rep.counts is not None:
                line += f" counts={json.dumps(rep.counts, sort_keys=True)}"
            if rep.witness is not None:
                line += f" witness={json.dumps(rep.witness, sort_keys=True)}"
            print(line)


def cmd_mul(args, out):
    ctx = context_from_args(args)
    a, b = parse_element(args.a, ctx), parse_element(args.b, ctx)
    if ctx.kind in ("series", "laurent"):
        r = series_mul(_prec(a, args), _prec(b, args))
    else:
        r = a * b
    out.emit(_show(r))


def cmd_add(args, out):
    ctx = context_from_args(args)
    a, b = parse_element(args.a, ctx), parse_element(args.b, ctx)
    out.emit(_show(a + b))


def cmd_divmod(args, out):
    ctx = context_from_args(args)
    a, b = parse_element(args.a, ctx), parse_element(args.b, ctx)
    if not isinstance(a, OrePoly) or not isinstance(b, OrePoly):
        raise RingSpecError("divmod needs univariate Ore polynomials")
    q, r = right_divmod(a, b) if args.side == "right" else left_divmod(a, b)
    form = "q*b + r" if args.side == "right" else "b*q + r"
    out.emit({"q": str(q), "r": str(r), "identity": form}, f"q = {q}\nr = {r}")


def cmd_ore_pair(args, out):
    ctx = context_from_args(args)
    a, b = parse_element(args.a, ctx), parse_element(args.b, ctx)
    pair = weyl_ore_pair_search(a, b) if ctx.kind == "weyl" else ore_pair_search(a, b)
    res = {"c": str(pair.c), "d": str(pair.d), "bounds_tried": pair.bounds_tried,
           "unknowns": pair.unknowns, "equations": pair.equations}
    out.emit(res, f"c = {pair.c}\nd = {pair.d}\nbounds tried: {pair.bounds_tried}")


def cmd_frac(args, out):
    ctx = context_from_args(args)
    vals = [parse_element(t, ctx) for t in args.exprs]
    vals = [v if isinstance(v, OreFraction) else OreFraction.embed(v) for v in vals]
    if args.action == "eq":
        if len(vals) != 2:
            raise ParseError("frac eq needs two fractions")
        r = frac_eq(vals[0], vals[1])
        out.emit(r, "true" if r else "false")
        return
    if len(vals) != 1:
        raise ParseError("frac eval takes one expression")
    u = vals[0]
    if supports_canonical(u.ring):
        u = frac_canonical(u)
    out.emit(str(u))


def _carlitz_spec(args) -> CarlitzSpec:
    ctx = context_from_args(args)
    if ctx.kind != "twisted":
        raise RingSpecError("Carlitz modules need a twisted ring")
    if getattr(args, "phi", None):
        return CarlitzSpec(ctx.ring, phi_T=ctx.ring.parse(args.phi))
    g = getattr(args, "gamma", None) or "0"
    return CarlitzSpec(ctx.ring, gamma=ctx.field.parse(g))


def cmd_carlitz(args, out):
    spec = _carlitz_spec(args)
    if args.action == "eval":
        f = parse_T_poly(args.value, spec.field)
        out.emit(str(carlitz_eval(spec, f)))
    else:
        g = spec.ring.parse(args.value)
        out.emit(str(carlitz_preimage(spec, g)))


def cmd_centralizer(args, out):
    ctx = context_from_args(args)
    u = parse_element(args.value, ctx)
    basis = centralizer_basis(u, ctx.ring, args.deg, args.cap)
    out.emit([str(b) for b in basis], "\n".join(str(b) for b in basis) or "(empty)")


def cmd_mrdp_d(args, out):
    spec = _carlitz_spec(args)
    fs = parse_T_tuple(args.value, spec.field)
    out.emit(str(mrdp_d(fs, spec)))


def cmd_mrdp_dinv(args, out):
    spec = _carlitz_spec(args)
    g = spec.ring.parse(args.value)
    parts = mrdp_d_inv(g, spec)
    text = "(" + "; ".join(str(p) for p in parts) + ")"
    out.emit([str(p) for p in parts], text)


def _prec(s, args):
    p = getattr(args, "prec", None)
    return s.truncate(p) if p is not None else s


def cmd_series(args, out):
    ctx = context_from_args(args)
    if ctx.kind not in ("series", "laurent"):
        ctx = Context("laurent", ctx.field)
    F = ctx.field
    if args.action == "mul":
        a, b = (_prec(parse_series(t, F), args) for t in args.values[:2])
        out.emit(str(series_mul(a, b)))
    elif args.action == "inv":
        a = _prec(parse_series(args.values[0], F), args)
        out.emit(str(series_inv(a, getattr(args, "prec", None))))
    elif args.action == "d":
        a = _prec(parse_series(args.values[0], F), args)
        comps = series_d(a)
        out.emit([str(c) for c in comps], "(" + "; ".join(str(c) for c in comps) + ")")
    elif args.action == "dmul":
        fs = tuple(_prec(c, args) for c in parse_component_tuple(args.values[0], F))
        gs = tuple(_prec(c, args) for c in parse_component_tuple(args.values[1], F))
        comps = series_mul_decomposed(fs, gs)
        out.emit([str(c) for c in comps], "(" + "; ".join(str(c) for c in comps) + ")")


def cmd_encode(args, out):
    ctx = context_from_args(args)
    f = parse_element(args.value, ctx)
    if isinstance(f, OreFraction):
        raise ParseError("use encode-frac for fractions")
    c = encode_poly(f)
    out.emit(c, f"{c} = {factored(c)}", factored=factored(c))


def cmd_decode(args, out):
    ctx = context_from_args(args)
    f = decode_poly(int(args.value), ctx.ring)
    out.emit(str(f))


def cmd_encode_frac(args, out):
    ctx = context_from_args(args)
    u = parse_element(args.value, ctx)
    if not isinstance(u, OreFraction):
        u = OreFraction.embed(u)
    den, num = encode_fraction(u)
    out.emit([den, num], f"({den}, {num}) = ({factored(den)}, {factored(num)})",
             factored=[factored(den), factored(num)])


def cmd_descend(args, out):
    text = Path(args.file).read_text() if args.file != "-" else sys.stdin.read()
    s = parse_system(text)
    t = descend_system(s)
    if args.check:
        ok = solutions_equiv(s, t, seed=args.seed)
        out.emit({"system": t.to_text(), "equivalent": ok}, t.to_text() + f"# solutions_equiv: {str(ok).lower()}")
    else:
        out.emit(t.to_text(), t.to_text().rstrip("\n"))


def cmd_weyl(args, out):
    if not getattr(args, "ring", None) and not getattr(args, "field", None):
        raise RingSpecError("give the coefficient field with --field")
    ctx = context_from_args(args, "weyl")
    if ctx.kind != "weyl":
        F = ctx.field
        ctx = Context("weyl", F, WeylRing(F))
    W = ctx.ring
    if args.action == "kappa":
        if args.A is None or args.B is None or args.l is None or args.deg is None:
            raise ParseError("weyl kappa needs --A, --B, --l and --deg")
        rep = kappa_generator_report(W.parse(args.A), W.parse(args.B), args.l, args.deg, args.cap, seed=args.seed)
        res = {"kappa": None if rep.kappa is None else str(rep.kappa), "verdict": rep.verdict,
               "members": len(rep.basis), "witness": rep.witness}
        out.emit(res, f"kappa = {rep.kappa if rep.kappa is not None else 'none'} ({rep.verdict})")
        return
    if len(args.values) != 2:
        raise ParseError(f"weyl {args.action} needs two operators")
    a, b = (parse_element(v, ctx) for v in args.values)
    if args.action == "mul":
        out.emit(str(a * b))
    elif args.action == "ore-pair":
        pair = weyl_ore_pair_search(a, b)
        res = {"c": str(pair.c), "d": str(pair.d), "bounds_tried": pair.bounds_tried,
               "unknowns": pair.unknowns, "equations": pair.equations}
        out.emit(res, f"c = {pair.c}\nd = {pair.d}\nbounds tried: {pair.bounds_tried}")


def cmd_verify(args, out):
    lemma = args.lemma
    if lemma == "centralizer-eq":
        spec = carlitz_ring(args.q, args.n, args.gamma)
        rep = verify_centralizer_eq(spec, args.deg, args.cap)
    elif lemma == "count-by-degree":
        rep = count_report(args.set, args.q, args.deg, args.gamma)
    elif lemma == "phik-intersection":
        rep = verify_phik_intersection(args.q, args.k, args.l, args.deg)
    elif lemma == "similarity-table":
        _, rep = build_similarity_table(phi_k_spec(args.q, args.k), phi_k_spec(args.q, args.l), args.deg)
    elif lemma == "truncation":
        rep = verify_truncation_lemma(args.q, args.deg, args.trials, args.seed)
    elif lemma == "difference-growth":
        rep = verify_difference_growth(phi_k_spec(args.q, args.k), phi_k_spec(args.q, args.l), range(1, args.deg + 1))
    else:  # pragma: no cover - argparse restricts choices
        raise ParseError(f"unknown lemma {lemma!r}")
    out.report(rep)
    return 0 if rep.verdict != "counterexample" else 1


def _global_options(parser, suppress: bool):
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--ring", help="ring context such as 'GF(4;x^2+x+1;q=2){t}'", **(kw or {"default": None}))
    parser.add_argument("--field", help="coefficient field such as 'QQ(x1,x2)'", **(kw or {"default": None}))
    parser.add_argument("--json", action="store_true", help="emit one JSON object per result", **kw)
    parser.add_argument("--seed", type=int, help="seed for randomized commands", **(kw or {"default": DEFAULT_SEED}))
    parser.add_argument("--prec", type=int, help="series precision", **(kw or {"default": None}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orelab", description="Exact arithmetic in Ore polynomial rings.")
    parser.add_argument("--version", action="version", version=f"orelab {__version__}")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_options(p, suppress=True)
        p.set_defaults(func=func)
        return p

    for name, func, h in (("mul", cmd_mul, "product a*b"), ("add", cmd_add, "sum a+b")):
        p = add(name, func, h)
        p.add_argument("a")
        p.add_argument("b")
    p = add("divmod", cmd_divmod, "Euclidean division")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--side", choices=("right", "left"), default="right",
                   help="right: a = q*b + r; left: a = b*q + r")
    p = add("ore-pair", cmd_ore_pair, "nonzero c, d with c*a = d*b")
    p.add_argument("a")
    p.add_argument("b")
    p = add("frac", cmd_frac, "fraction arithmetic")
    p.add_argument("action", choices=("eval", "eq"))
    p.add_argument("exprs", nargs="+")
    p = add("carlitz", cmd_carlitz, "Carlitz evaluation and preimages")
    p.add_argument("action", choices=("eval", "preimage"))
    p.add_argument("value")
    p.add_argument("--gamma", default="0")
    p.add_argument("--phi", help="explicit phi_T overriding gamma + t")
    p = add("centralizer", cmd_centralizer, "bounded-degree centralizer basis")
    p.add_argument("value")
    p.add_argument("--deg", type=int, default=2)
    p.add_argument("--cap", type=int, default=4)
    for name, func in (("mrdp-d", cmd_mrdp_d), ("mrdp-dinv", cmd_mrdp_dinv)):
        p = add(name, func, "basis map sum alpha^k phi(f_k)" if name == "mrdp-d" else "inverse basis map")
        p.add_argument("value")
        p.add_argument("--gamma", default="0")
        p.add_argument("--phi")
    p = add("series", cmd_series, "truncated twisted series")
    p.add_argument("action", choices=("mul", "inv", "d", "dmul"))
    p.add_argument("values", nargs="+")
    p = add("encode", cmd_encode, "prime-power code of a polynomial")
    p.add_argument("value")
    p = add("decode", cmd_decode, "polynomial of a code")
    p.add_argument("value")
    p = add("encode-frac", cmd_encode_frac, "code pair of a canonical fraction")
    p.add_argument("value")
    p = add("descend", cmd_descend, "descend a system file from R[alpha] to R")
    p.add_argument("file")
    p.add_argument("--check", action="store_true", help="also compare solution sets by brute force")
    p = add("weyl", cmd_weyl, "multivariate differential operators")
    p.add_argument("action", choices=("mul", "ore-pair", "kappa"))
    p.add_argument("values", nargs="*")
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--l", type=int)
    p.add_argument("--deg", type=int)
    p.add_argument("--cap", type=int, default=2)
    p = add("verify", cmd_verify, "bounded certification reports")
    p.add_argument("lemma", choices=LEMMAS)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--gamma", default="0")
    p.add_argument("--deg", type=int, default=3)
    p.add_argument("--cap", type=int, default=4)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--set", default="phi(A)", help="Fq[T], Fq{t} or phi(A)")
    return parser


def _error(out: Output, exc: Exception, status: int) -> int:
    obj = {"type": type(exc).__name__, "message": str(exc)}
    pos = getattr(exc, "position", None)
    if pos is not None:
        obj["position"] = pos
    if out.json:
        print(json.dumps({"command": out.command, "error": obj}, sort_keys=True))
    else:
        where = f" at position {pos}" if pos is not None else ""
        print(f"orelab: {obj['type']}{where}: {obj['message']}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    out = Output(args)
    try:
        status = args.func(args, out)
    except (ParseError, RingSpecError) as exc:
        return _error(out, exc, 2)
    except OrelabError as exc:
        return _error(out, exc, 1)
    return status or 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
