"""Descent of polynomial systems from R[alpha] to R.

A system over R[alpha] has unknowns ranging over R[alpha] (``Ralpha``) or
constrained to R (``R``), polynomial equations, and atoms S(t_1, ..., t_m) of
uninterpreted relations on R. Descent substitutes y = y_0 + y_1 alpha + ...
+ y_n alpha^n, reduces powers of alpha by the monic minimal polynomial and
separates components, which are independent over R.

System files are line oriented::

    base: GF(2)
    minpoly: X^2 + X + 1
    alpha: a
    var x : Ralpha
    var u : R
    eq: x^2 + a*u = 1
    rel: S(x, u)

``base`` defaults to QQ and ``alpha`` to ``a``. Blank lines and lines starting
with ``#`` are ignored.
"""
from __future__ import annotations

import itertools
import random as _random
from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .errors import CapError, DomainError, ParseError, RingSpecError
from .fields import Field, PrimeField, field_make
from .parsing import Env, evaluate, parse_expression, split_top_level

SEARCH_CAP = 10 ** 6


class SparsePoly:
    """Commutative polynomial ``{monomial: raw coefficient}``; a monomial is a sorted tuple of (name, exponent)."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: dict):
        z = field.is_zero
        self.field = field
        self.terms = {m: c for m, c in terms.items() if not z(c)}

    @classmethod
    def const(cls, field, c) -> "SparsePoly":
        return cls(field, {(): field.coerce(c)})

    @classmethod
    def var(cls, field, name) -> "SparsePoly":
        return cls(field, {((name, 1),): field.one})

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        return max((e for m in self.terms for v, e in m if v == name), default=0)

    def _lift(self, other):
        if isinstance(other, SparsePoly):
            return other
        return SparsePoly.const(self.field, other)

    def __add__(self, other):
        g = self._lift(other)
        add = self.field.add
        out = dict(self.terms)
        for m, c in g.terms.items():
            out[m] = add(out[m], c) if m in out else c
        return SparsePoly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg
        return SparsePoly(self.field, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        g = self._lift(other)
        F = self.field
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in g.terms.items():
                m = _mono_mul(m1, m2)
                c = F.mul(c1, c2)
                out[m] = F.add(out[m], c) if m in out else c
        return SparsePoly(F, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers of unknowns")
        r = SparsePoly.const(self.field, 1)
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, other):
        g = self._lift(other)
        return self.terms == g.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, values: dict, ring):
        """Value under ``values`` (name -> ring element) in a ring offering add/mul/from_base."""
        total = ring.zero
        for m, c in self.terms.items():
            t = ring.from_base(c)
            for v, e in m:
                t = ring.mul(t, ring.pow(values[v], e))
            total = ring.add(total, t)
        return total

    def substitute(self, images: dict) -> "SparsePoly":
        out = SparsePoly(self.field, {})
        for m, c in self.terms.items():
            t = SparsePoly.const(self.field, 1)
            t.terms = {(): c}
            for v, e in m:
                t = t * (images[v] ** e if v in images else SparsePoly(self.field, {((v, e),): self.field.one}))
            out = out + t
        return out

    def __str__(self):
        return format_sparse(self)

    def __repr__(self):
        return f"SparsePoly({format_sparse(self)!r})"


def _mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def format_sparse(p: SparsePoly) -> str:
    F = p.field
    if not p.terms:
        return "0"
    order = sorted(p.terms, key=lambda m: (-sum(e for _, e in m), m))
    pieces = []
    for m in order:
        c = p.terms[m]
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
        s = F.to_str(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        if not mono:
            body = s
        elif s == "1":
            body = mono
        else:
            body = f"{s}*{mono}"
        pieces.append(("-" if neg else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class _PolyEnv(Env):
    def __init__(self, field: Field, names: Iterable[str]):
        self.field = field
        self.names = set(names)

    def number(self, n, pos):
        return SparsePoly.const(self.field, n)

    def name(self, name, pos):
        if name not in self.names:
            raise ParseError(f"undeclared name {name!r}", pos)
        return SparsePoly.var(self.field, name)

    def call(self, name, args, pos, ev):
        raise ParseError(f"unexpected call {name!r}", pos)

    def divide(self, a, b, pos):
        if set(b.terms) - {()}:
            raise ParseError("division by a non-constant", pos)
        c = b.terms.get(())
        if c is None:
            raise ParseError("division by zero", pos)
        return a * SparsePoly.const(self.field, self.field.inv(c))

    def power(self, a, n, pos):
        if n < 0:
            raise ParseError("negative exponents are not allowed", pos)
        return a ** n


def parse_sparse(text: str, field: Field, names: Iterable[str]) -> SparsePoly:
    return evaluate(parse_expression(text), _PolyEnv(field, names))


@dataclass
class Relation:
    name: str
    args: list


@dataclass
class DioSystem:
    """Equations (each = 0), relation atoms and unknown declarations over R or R[alpha]."""

    base: Field
    variables: dict                 # name -> "Ralpha" | "R"
    equations: list = dc_field(default_factory=list)
    relations: list = dc_field(default_factory=list)
    minpoly: list | None = None     # raw coefficients low degree first, monic
    alpha: str = "a"
    origin: dict = dc_field(default_factory=dict)  # new name -> (old name, component)

    @property
    def n(self) -> int:
        """Highest basis power: the minimal polynomial has degree n + 1."""
        return len(self.minpoly) - 2 if self.minpoly else 0

    def unknowns(self) -> list[str]:
        return list(self.variables)

    def to_text(self) -> str:
        F = self.base
        lines = [f"base: {F.describe()}"]
        if self.minpoly:
            X = SparsePoly(F, {((("X", i),) if i else ()): c for i, c in enumerate(self.minpoly)})
            lines.append(f"minpoly: {X}")
            lines.append(f"alpha: {self.alpha}")
        for v, kind in self.variables.items():
            lines.append(f"var {v} : {kind}")
        for e in self.equations:
            lines.append(f"eq: {e} = 0")
        for r in self.relations:
            lines.append(f"rel: {r.name}({', '.join(str(a) for a in r.args)})")
        return "\n".join(lines) + "\n"

    def symbols(self) -> set[str]:
        s = set(self.variables)
        if self.minpoly:
            s.add(self.alpha)
        return s


def parse_system(text: str) -> DioSystem:
    """Read the line-oriented system format."""
    base = None
    minpoly_text = None
    alpha = "a"
    variables = {}
    eq_texts, rel_texts = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("var "):
                name, kind = (s.strip() for s in line[4:].split(":", 1))
                if kind not in ("Ralpha", "R"):
                    raise ParseError(f"unknown kind {kind!r} (use Ralpha or R)", 0, raw)
                if name in variables:
                    raise ParseError(f"{name!r} declared twice", 0, raw)
                variables[name] = kind
                continue
            key, _, rest = line.partition(":")
            key, rest = key.strip(), rest.strip()
            if key == "base":
                base = field_make(rest)
            elif key == "minpoly":
                minpoly_text = rest
            elif key == "alpha":
                alpha = rest
            elif key == "eq":
                eq_texts.append(rest)
            elif key == "rel":
                rel_texts.append(rest)
            else:
                raise ParseError(f"unknown line kind {key!r}", 0, raw)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}", 0, raw) from exc
    base = base or field_make("QQ")
    if alpha in variables:
        raise ParseError(f"alpha symbol {alpha!r} clashes with an unknown")
    minpoly = None
    if minpoly_text is not None:
        mp = parse_sparse(minpoly_text, base, {"X"})
        deg = mp.degree_in("X")
        minpoly = [mp.terms.get((("X", i),) if i else (), base.zero) for i in range(deg + 1)]
    names = set(variables) | ({alpha} if minpoly else set())
    eqs = []
    for t in eq_texts:
        lhs, sep, rhs = t.partition("=")
        e = parse_sparse(lhs, base, names)
        if sep:
            e = e - parse_sparse(rhs, base, names)
        eqs.append(e)
    rels = []
    for t in rel_texts:
        head, sep, tail = t.partition("(")
        if not sep or not tail.endswith(")"):
            raise ParseError(f"bad relation atom {t!r}")
        args = [parse_sparse(a, base, names) for a in split_top_level(tail[:-1].replace(",", ";"), ";")]
        rels.append(Relation(head.strip(), args))
    s = DioSystem(base, variables, eqs, rels, minpoly, alpha)
    if minpoly is not None:
        _check_minpoly(s)
    return s


def _check_minpoly(s: DioSystem):
    mp = s.minpoly
    F = s.base
    if mp is None or len(mp) < 3:
        raise RingSpecError("the minimal polynomial must have degree at least 2")
    if not F.eq(mp[-1], F.one):
        raise RingSpecError("the minimal polynomial must be monic")


def _reduce_alpha(p: SparsePoly, s: DioSystem) -> list[SparsePoly]:
    """Components of p along 1, alpha, ..., alpha^n after reducing by the minimal polynomial."""
    F = s.base
    a = s.alpha
    deg = len(s.minpoly) - 1
    comps = {}
    for m, c in p.terms.items():
        e = dict(m).get(a, 0)
        rest = tuple((v, k) for v, k in m if v != a)
        comps[e] = comps.get(e, SparsePoly(F, {})) + SparsePoly(F, {rest: c})
    while comps and max(comps) >= deg:
        e = max(comps)
        c = comps.pop(e)
        # alpha^e = -alpha^(e-deg) * sum_{i<deg} m_i alpha^i
        for i in range(deg):
            if not F.is_zero(s.minpoly[i]):
                k = e - deg + i
                comps[k] = comps.get(k, SparsePoly(F, {})) + c * SparsePoly.const(F, F.neg(s.minpoly[i]))
    return [comps.get(i, SparsePoly(F, {})) for i in range(deg)]


def component_name(name: str, j: int) -> str:
    return f"{name}_{j}"


def descend_system(s: DioSystem) -> DioSystem:
    """The equivalent system over R with one unknown per basis component."""
    if s.minpoly is None:
        raise RingSpecError("descent needs a minimal polynomial")
    _check_minpoly(s)
    F = s.base
    n = s.n
    variables, origin, images = {}, {}, {}
    taken = set(s.variables)
    for v, kind in s.variables.items():
        if kind == "R":
            variables[v] = "R"
            origin[v] = (v, None)
            continue
        parts = []
        for j in range(n + 1):
            name = component_name(v, j)
            if name in taken or name in variables:
                raise DomainError(f"fresh name {name!r} collides with a declared unknown")
            variables[name] = "R"
            origin[name] = (v, j)
            parts.append(SparsePoly.var(F, name) * (SparsePoly.var(F, s.alpha) ** j))
        images[v] = sum(parts[1:], parts[0])
    eqs = []
    for e in s.equations:
        for comp in _reduce_alpha(e.substitute(images), s):
            if not comp.is_zero():
                eqs.append(comp)
    rels = []
    for r in s.relations:
        zero_comps = []
        for t in r.args:
            comps = _reduce_alpha(t.substitute(images), s)
            zero_comps.append(comps[0])
            eqs.extend(c for c in comps[1:] if not c.is_zero())
        rels.append(Relation(r.name, zero_comps))
    return DioSystem(F, variables, eqs, rels, None, s.alpha, origin)


class QuotientRing:
    """R[X]/(minpoly) with elements as coefficient tuples, for brute-force evaluation."""

    def __init__(self, base: Field, minpoly: list | None):
        self.base = base
        self.mp = minpoly
        self.dim = len(minpoly) - 1 if minpoly else 1
        self.zero = (base.zero,) * self.dim
        self.one = (base.one,) + (base.zero,) * (self.dim - 1)

    def from_base(self, c):
        return (c,) + (self.base.zero,) * (self.dim - 1)

    def add(self, a, b):
        add = self.base.add
        return tuple(add(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        F = self.base
        prod = [F.zero] * (2 * self.dim - 1)
        for i, x in enumerate(a):
            if F.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not F.is_zero(y):
                    prod[i + j] = F.add(prod[i + j], F.mul(x, y))
        d = self.dim
        for e in range(len(prod) - 1, d - 1, -1):
            c = prod[e]
            if F.is_zero(c):
                continue
            prod[e] = F.zero
            for i in range(d):
                prod[e - d + i] = F.sub(prod[e - d + i], F.mul(c, self.mp[i]))
        return tuple(prod[:d])

    def pow(self, a, n):
        r = self.one
        for _ in range(n):
            r = self.mul(r, a)
        return r

    def alpha(self):
        return (self.base.zero, self.base.one) + (self.base.zero,) * (self.dim - 2)

    def in_base(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a[1:])


def random_interpretation(systems: Iterable[DioSystem], base: Field, seed: int = 0) -> dict:
    """Random subsets of R^m for every relation name, keyed by name."""
    rng = _random.Random(seed)
    els = list(base.elements())
    arity = {}
    for s in systems:
        for r in s.relations:
            arity.setdefault(r.name, len(r.args))
    out = {}
    for name in sorted(arity):
        out[name] = {t for t in itertools.product(els, repeat=arity[name]) if rng.random() < 0.5}
    return out


def _solutions(s: DioSystem, ring: QuotientRing, interp: dict) -> set:
    F = s.base
    els = list(F.elements())
    per_var = []
    ext = list(itertools.product(els, repeat=ring.dim))
    for v, kind in s.variables.items():
        per_var.append([ring.from_base(c) for c in els] if kind == "R" else ext)
    size = 1
    for vals in per_var:
        size *= len(vals)
    if size > SEARCH_CAP:
        raise CapError(f"search space {size} exceeds the cap {SEARCH_CAP}")
    names = list(s.variables)
    env_add = {}
    if s.minpoly:
        env_add[s.alpha] = ring.alpha()
    out = set()
    for combo in itertools.product(*per_var):
        values = dict(zip(names, combo))
        values.update(env_add)
        ok = all(e.evaluate(values, ring) == ring.zero for e in s.equations)
        if ok:
            for r in s.relations:
                args = [t.evaluate(values, ring) for t in r.args]
                if not all(ring.in_base(a) for a in args) or tuple(a[0] for a in args) not in interp.get(r.name, set()):
                    ok = False
                    break
        if ok:
            out.add(combo)
    return out


def solutions_equiv(s: DioSystem, t: DioSystem, interpretation: dict | None = None, seed: int = 0) -> bool:
    """Brute force: the basis expansion maps the solutions of s onto those of t.

    Relations are interpreted by ``interpretation`` (name -> set of R-tuples)
    or by a seeded random interpretation. ``t`` must carry the ``origin`` map
    produced by :func:`descend_system`.
    """
    F = s.base
    if not getattr(F, "is_finite", False):
        raise RingSpecError("brute-force comparison needs a finite base ring")
    interp = interpretation if interpretation is not None else random_interpretation([s, t], F, seed)
    rs = QuotientRing(F, s.minpoly)
    rt = QuotientRing(F, None)
    sol_s = _solutions(s, rs, interp)
    sol_t = _solutions(t, rt, interp)
    s_names = list(s.variables)
    image = set()
    for combo in sol_s:
        vals = dict(zip(s_names, combo))
        row = []
        for v in t.variables:
            old, j = t.origin.get(v, (v, None))
            if old not in vals:
                raise DomainError(f"{v!r} has no origin in the source system")
            row.append(rt.from_base(vals[old][0 if j is None else j]))
        image.add(tuple(row))
    return image == sol_t


def random_system(base: Field, minpoly: list, rng, max_unknowns: int = 3, degree: int = 2,
                  equations: int = 2, relation_prob: float = 0.5, alpha: str = "a") -> DioSystem:
    """Random system over R[alpha] with Ralpha/R unknowns, small equations and an optional relation atom."""
    nvars = rng.randint(1, max_unknowns)
    names = [f"v{i}" for i in range(nvars)]
    variables = {v: rng.choice(["Ralpha", "Ralpha", "R"]) for v in names}
    els = list(base.elements())
    s = DioSystem(base, variables, [], [], list(minpoly), alpha)
    monos = [()]
    syms = names + [alpha]
    for d in range(1, degree + 1):
        for combo in itertools.combinations_with_replacement(syms, d):
            m = {}
            for v in combo:
                m[v] = m.get(v, 0) + 1
            monos.append(tuple(sorted(m.items())))
    for _ in range(rng.randint(1, equations)):
        terms = {}
        for m in rng.sample(monos, min(len(monos), rng.randint(1, 4))):
            terms[m] = rng.choice(els[1:])
        s.equations.append(SparsePoly(base, terms))
    if rng.random() < relation_prob:
        arity = rng.randint(1, 2)
        args = []
        for _ in range(arity):
            m = rng.choice(monos)
            args.append(SparsePoly(base, {m: rng.choice(els[1:])}))
        s.relations.append(Relation("S", args))
    return s
