"""Truncated twisted power series K{{t}} and Laurent series K((t)).

A series is a finite window of coefficients: exponents ``val .. prec-1`` are
known, everything below ``val`` is zero and everything from ``prec`` on is
unknown. ``prec`` may be ``math.inf`` for exact (polynomial) series.

The component map d writes a series over F_{q^n} as
f_0(t) + alpha f_1(t) + ... + alpha^{n-1} f_{n-1}(t) with F_q-coefficient
series f_k, and :func:`series_mul_decomposed` multiplies such component tuples
using only commutative products and the identity
alpha^(q^(n i + j)) = alpha^(q^j).
"""
from __future__ import annotations

import math
import re
from typing import Sequence

from .errors import DomainError, ParseError, PrecisionError, RingSpecError, SpecMismatchError
from .fields import ExtensionField, Field, FieldElement, PrimeField
from .ore import format_coefficient_term, join_terms
from .parsing import Env, evaluate, parse_expression, split_top_level

INF = math.inf


class _Series:
    """Shared window bookkeeping for twisted and commutative series."""

    __slots__ = ("field", "val", "prec", "coeffs")
    twisted = True
    var = "t"

    def __init__(self, field: Field, val: int, coeffs: Sequence, prec=INF):
        is_zero = field.is_zero
        c = list(coeffs)
        if prec != INF:
            if val + len(c) > prec:
                del c[max(0, prec - val):]
        lead = 0
        while lead < len(c) and is_zero(c[lead]):
            lead += 1
        if lead == len(c):
            c = []
            val = prec if prec != INF else 0
        else:
            val += lead
            c = c[lead:]
            while is_zero(c[-1]):
                c.pop()
        self.field = field
        self.val = val
        self.prec = prec
        self.coeffs = tuple(c)

    @classmethod
    def from_dict(cls, field: Field, terms: dict, prec=INF):
        terms = {e: c for e, c in terms.items() if e < prec and not field.is_zero(c)}
        if not terms:
            return cls(field, 0, [], prec)
        lo, hi = min(terms), max(terms)
        return cls(field, lo, [terms.get(e, field.zero) for e in range(lo, hi + 1)], prec)

    def _new(self, val, coeffs, prec):
        return type(self)(self.field, val, coeffs, prec)

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.prec == INF

    def coeff(self, e: int):
        """Raw coefficient of t^e; raises when e lies beyond the precision."""
        if e >= self.prec:
            raise PrecisionError(f"coefficient of exponent {e} is unknown (precision {self.prec})")
        i = e - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def terms(self) -> dict:
        return {self.val + i: c for i, c in enumerate(self.coeffs) if not self.field.is_zero(c)}

    def truncate(self, prec) -> "_Series":
        return self._new(self.val, self.coeffs, min(prec, self.prec))

    def _check(self, other):
        if not isinstance(other, _Series) or type(other) is not type(self):
            if isinstance(other, (int, FieldElement)) or isinstance(other, str):
                return self._new(0, [self.field.coerce(other)], INF)
            return None
        if other.field != self.field:
            raise SpecMismatchError(f"series over {other.field} and {self.field}")
        return other

    def __add__(self, other):
        g = self._check(other)
        if g is None:
            return NotImplemented
        return series_add(self, g)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg
        return self._new(self.val, [neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other):
        g = self._check(other)
        if g is None:
            return NotImplemented
        return series_add(self, -g)

    def __rsub__(self, other):
        g = self._check(other)
        if g is None:
            return NotImplemented
        return series_add(g, -self)

    def __mul__(self, other):
        g = self._check(other)
        if g is None:
            return NotImplemented
        return series_mul(self, g)

    def __rmul__(self, other):
        g = self._check(other)
        if g is None:
            return NotImplemented
        return series_mul(g, self)

    def __eq__(self, other):
        g = self._check(other)
        if g is None:
            return NotImplemented
        return self.prec == g.prec and self.val == g.val and self.coeffs == g.coeffs

    def agrees(self, other, prec=None) -> bool:
        """Coefficientwise equality up to the common (or given) precision."""
        p = min(self.prec, other.prec) if prec is None else prec
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        hi = min(hi, p) if p != INF else hi
        eq = self.field.eq
        return all(eq(self.coeff(e), other.coeff(e)) for e in range(lo, int(hi)))

    def __hash__(self):
        return hash((self.val, self.prec, self.coeffs))

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"{type(self).__name__}({format_series(self)!r})"


class TwistedSeries(_Series):
    """Series with t*a = a^q * t (and t^-1 * a = a^(1/q) * t^-1)."""

    __slots__ = ()

    def __pow__(self, n: int):
        if n < 0:
            return series_inv(self) ** (-n)
        r = self._new(0, [self.field.one], INF)
        for _ in range(n):
            r = series_mul(r, self)
        return r

    def inverse(self, prec=None) -> "TwistedSeries":
        return series_inv(self, prec)


class CommutativeSeries(_Series):
    """Series in a commuting variable T over the subfield F_q."""

    __slots__ = ()
    twisted = False
    var = "T"


def format_series(f: _Series) -> str:
    F = f.field
    terms = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if F.is_zero(c):
            continue
        e = f.val + i
        mono = "" if e == 0 else (f.var if e == 1 else f"{f.var}^{e}")
        terms.append(format_coefficient_term(F, c, mono))
    terms.reverse()
    body = join_terms(terms) if terms else ""
    if f.prec == INF:
        return body or "0"
    o = f"O({f.var}^{f.prec})"
    return f"{body} + {o}" if body else o


def series_add(f: _Series, g: _Series) -> _Series:
    F = f.field
    prec = min(f.prec, g.prec)
    lo = min(f.val, g.val)
    hi = max(f.val + len(f.coeffs), g.val + len(g.coeffs))
    if prec != INF:
        hi = min(hi, prec)
    add = F.add
    out = []
    for e in range(lo, hi):
        out.append(add(f.coeff(e) if e < f.prec else F.zero, g.coeff(e) if e < g.prec else F.zero))
    return f._new(lo, out, prec)


def _eff_val(f: _Series):
    """Valuation with exact zero counted as infinite."""
    return f.val if f.coeffs else f.prec


def _product_precision(f: _Series, g: _Series):
    return min(f.prec + _eff_val(g), g.prec + _eff_val(f))


def series_mul(f: _Series, g: _Series) -> _Series:
    """Truncated product (fg)_k = sum a_i sigma^i(b_{k-i}).

    The result is known up to min(N_f + v_g, N_g + v_f). Negative exponents
    apply inverse Frobenius powers, which needs a perfect field.
    """
    if f.field != g.field:
        raise SpecMismatchError("series over different fields")
    if type(f) is not type(g):
        raise SpecMismatchError("cannot mix twisted and commutative series")
    F = f.field
    prec = _product_precision(f, g)
    if prec == INF and (not f.coeffs or not g.coeffs):
        return f._new(0, [], INF)
    if prec == -INF:
        raise PrecisionError("no coefficient of the product is determined")
    val = f.val + g.val
    if not f.coeffs or not g.coeffs:
        return f._new(val, [], prec)
    n = len(f.coeffs) + len(g.coeffs) - 1
    if prec != INF:
        n = min(n, int(prec) - val)
    if n <= 0:
        return f._new(val, [], prec)
    out = [F.zero] * n
    add, mul, is_zero = F.add, F.mul, F.is_zero
    bs = g.coeffs
    nb = len(bs)
    twisted = f.twisted
    if twisted and f.val < 0 and not F.is_perfect:
        raise RingSpecError(f"negative exponents need a perfect field; {F} is not")
    for i, a in enumerate(f.coeffs):
        if i >= n:
            break
        if is_zero(a):
            continue
        if twisted:
            e = f.val + i
            if isinstance(F, ExtensionField):
                tab = F.frob_table(e)
                tw = [tab[b] for b in bs[: n - i]]
            else:
                tw = [F.frob_pow(b, e) for b in bs[: n - i]]
        else:
            tw = bs[: n - i]
        for j, b in enumerate(tw):
            if not is_zero(b):
                out[i + j] = add(out[i + j], mul(a, b))
    return f._new(val, out, prec)


def series_inv(f: TwistedSeries, prec=None) -> TwistedSeries:
    """Two-sided inverse g with f*g = 1, solved coefficient by coefficient.

    ``prec`` bounds the relative precision of an inverse of an exact series
    (default 8); inexact inputs keep the relative precision N - v.
    """
    F = f.field
    if not f.coeffs:
        raise PrecisionError("the leading coefficient is unknown or zero")
    v = f.val
    if f.prec == INF:
        rel = 8 if prec is None else prec
    else:
        rel = f.prec - v
        if prec is not None:
            rel = min(rel, prec)
    if v != 0 and not F.is_perfect:
        raise RingSpecError(f"inverting a series of valuation {v} needs a perfect field")
    # (f g)_k with g starting at -v: a_v sigma^v(b_{k-v}) = -sum_{i>v} a_i sigma^i(b_{k-i})
    inv_lead = F.inv(f.coeffs[0])
    bs = []
    for m in range(rel):
        if m == 0:
            rhs = F.one
        else:
            rhs = F.zero
            for i in range(1, min(m, len(f.coeffs) - 1) + 1):
                a = f.coeffs[i]
                if F.is_zero(a):
                    continue
                rhs = F.add(rhs, F.mul(a, F.frob_pow(bs[m - i], v + i)))
            rhs = F.neg(rhs)
        bs.append(F.frob_pow(F.mul(inv_lead, rhs), -v))
    return TwistedSeries(F, -v, bs, -v + rel)


def inverse_t_conjugate(field: Field, b):
    """The coefficient c with c * t^-1 = t^-1 * b, namely b^(q^-1)."""
    return field.frob_pow(field.coerce(b), -1)


def _alpha_data(field: Field) -> int:
    if isinstance(field, ExtensionField):
        return field.n
    if isinstance(field, PrimeField):
        return 1
    raise RingSpecError(f"{field} has no designated alpha over a finite subfield")


def series_d(f: TwistedSeries) -> tuple:
    """Components (f_0, ..., f_{n-1}) with f = sum alpha^k f_k and F_q-coefficient f_k."""
    F = f.field
    n = _alpha_data(F)
    if n == 1:
        return (CommutativeSeries(F, f.val, f.coeffs, f.prec),)
    comps = [[] for _ in range(n)]
    expand = F.alpha_expand
    for c in f.coeffs:
        for k, ck in enumerate(expand(c)):
            comps[k].append(ck)
    return tuple(CommutativeSeries(F, f.val, comps[k], f.prec) for k in range(n))


def series_d_inverse(comps: Sequence[CommutativeSeries]) -> TwistedSeries:
    """The twisted series sum alpha^k f_k."""
    if not comps:
        raise DomainError("empty component tuple")
    F = comps[0].field
    total = TwistedSeries(F, 0, [], min(c.prec for c in comps))
    for k, c in enumerate(comps):
        ak = F.alpha_power(k) if isinstance(F, ExtensionField) else F.one
        total = series_add(total, TwistedSeries(F, c.val, [F.mul(ak, x) for x in c.coeffs], c.prec))
    return total


def residue_split(f: _Series, n: int) -> tuple:
    """(f_0, ..., f_{n-1}) with f_j carrying the exponents congruent to j mod n."""
    if n < 1:
        raise DomainError("n must be positive")
    parts = [dict() for _ in range(n)]
    for i, c in enumerate(f.coeffs):
        e = f.val + i
        parts[e % n][e] = c
    return tuple(type(f).from_dict(f.field, p, f.prec) for p in parts)


class DecompositionConstants:
    """alpha-expansions of alpha^k * (alpha^(q^j))^l, the constants of the P_i/Q_i."""

    def __init__(self, field: Field):
        n = _alpha_data(field)
        self.field = field
        self.n = n
        if n == 1:
            self.table = [[[(field.one,)]]]
            return
        F = field
        table = []
        for k in range(n):
            row = []
            for j in range(n):
                aj = F.frob_pow(F.alpha, j)
                row.append([F.alpha_expand(F.mul(F.alpha_power(k), F.pow(aj, l))) for l in range(n)])
            table.append(row)
        self.table = table

    def symbolic(self) -> list[str]:
        """The P_i as text over symbols f{k}{j} and g{l}; feasible for n <= 3."""
        if self.n > 3:
            raise DomainError("symbolic decomposition is limited to n <= 3")
        F = self.field
        out = []
        for m in range(self.n):
            terms = []
            for k in range(self.n):
                for j in range(self.n):
                    for l in range(self.n):
                        c = self.table[k][j][l][m]
                        if not F.is_zero(c):
                            terms.append(format_coefficient_term(F, c, f"f{k}{j}*g{l}"))
            out.append(join_terms(terms))
        return out


_CONSTANTS: dict = {}


def decomposition_constants(field: Field) -> DecompositionConstants:
    key = field
    hit = _CONSTANTS.get(key)
    if hit is None:
        hit = _CONSTANTS[key] = DecompositionConstants(field)
    return hit


def series_mul_decomposed(fs: Sequence[CommutativeSeries], gs: Sequence[CommutativeSeries]) -> tuple:
    """d(f g) computed from d(f) and d(g) with commutative products only.

    f g = sum_{k,j,l} alpha^k (alpha^(q^j))^l f_{kj} g_l, where f_{kj} collects
    the exponents of f_k congruent to j mod n; each constant is expanded in
    the alpha-basis and the products are collected by component.
    """
    if len(fs) != len(gs):
        raise SpecMismatchError("component tuples of different lengths")
    n = len(fs)
    F = fs[0].field
    consts = decomposition_constants(F)
    if consts.n != n:
        raise SpecMismatchError(f"expected {consts.n} components, got {n}")
    prec = min(min(_product_precision(f, g) for f in fs for g in gs), INF)
    lo = min((f.val for f in fs), default=0) + min((g.val for g in gs), default=0)
    hi = max(f.val + len(f.coeffs) for f in fs) + max(g.val + len(g.coeffs) for g in gs)
    if prec != INF:
        hi = min(hi, int(prec))
    width = max(0, hi - lo)
    acc = [[F.zero] * width for _ in range(n)]
    add, mul, is_zero = F.add, F.mul, F.is_zero
    table = consts.table
    for k, f in enumerate(fs):
        for i, a in enumerate(f.coeffs):
            if is_zero(a):
                continue
            e = f.val + i
            row = table[k][e % n]
            for l, g in enumerate(gs):
                cvec = row[l]
                for jj, b in enumerate(g.coeffs):
                    if is_zero(b):
                        continue
                    pos = e + g.val + jj - lo
                    if pos >= width:
                        break
                    ab = mul(a, b)
                    for m in range(n):
                        c = cvec[m]
                        if c:
                            acc[m][pos] = add(acc[m][pos], mul(c, ab))
    return tuple(CommutativeSeries(F, lo, acc[m], prec) for m in range(n))


def alpha_frobenius_periodic(field: ExtensionField, i_range=range(-3, 4)) -> bool:
    """Check alpha^(q^(n i + j)) = alpha^(q^j) for all i in ``i_range`` and 0 <= j < n."""
    n = field.n
    for j in range(n):
        target = field.frob_pow(field.alpha, j)
        for i in i_range:
            if field.frob_pow(field.alpha, n * i + j) != target:
                return False
    return True


def tau_centralizer_windows(field: Field, prec: int) -> list[TwistedSeries]:
    """All windows [0, prec) commuting with t up to precision, found exhaustively."""
    import itertools

    t = TwistedSeries(field, 1, [field.one])
    out = []
    for coeffs in itertools.product(list(field.elements()), repeat=prec):
        f = TwistedSeries(field, 0, coeffs, prec)
        if series_mul(f, t).agrees(series_mul(t, f)):
            out.append(f)
    return out


# parsing series literals

class SeriesEnv(Env):
    """Evaluates explicit literals such as ``b*t^-1 + 1 + t^3 + O(t^5)``."""

    def __init__(self, field: Field, extra: dict | None = None, cls=TwistedSeries):
        self.field = field
        self.cls = cls
        self.table = dict(field.symbols())
        self.table[cls.var] = cls(field, 1, [field.one])
        if extra:
            self.table.update(extra)

    def number(self, n, pos):
        return self.field(n)

    def name(self, name, pos):
        if name in self.table:
            return self.table[name]
        raise ParseError(f"unknown symbol {name!r} in a series over {self.field.describe()}", pos)

    def call(self, name, args, pos, ev):
        if name == "O":
            if len(args) != 1:
                raise ParseError("O takes one argument", pos)
            m = ev(args[0])
            if not isinstance(m, _Series) or len(m.coeffs) != 1 or m.coeffs[0] != self.field.one or not m.is_exact():
                raise ParseError(f"O() expects a monomial {self.cls.var}^N", pos)
            return self.cls(self.field, m.val, [], m.val)
        raise ParseError(f"unknown function {name!r}", pos)

    def power(self, a, n, pos):
        if isinstance(a, _Series) and len(a.coeffs) == 1 and a.coeffs[0] == self.field.one and a.is_exact():
            return self.cls(self.field, a.val * n, [self.field.one])
        if isinstance(a, _Series) and n < 0:
            if not isinstance(a, TwistedSeries):
                raise ParseError("negative powers of commutative series are unsupported", pos)
            return a ** n
        return a ** n


def _to_series(value, field, cls):
    if isinstance(value, _Series):
        return value
    if isinstance(value, FieldElement):
        return cls(field, 0, [value.raw])
    return cls(field, 0, [field.coerce(value)])


def parse_series(text: str, field: Field, prec=None, commutative: bool = False) -> _Series:
    """Parse an explicit literal or ``sum(expr; i=v..N-1)``; ``prec`` truncates exact results."""
    cls = CommutativeSeries if commutative else TwistedSeries
    s = text.strip()
    if s.startswith("sum(") and s.endswith(")"):
        inner = s[4:-1]
        parts = split_top_level(inner, ";")
        if len(parts) != 2 or "=" not in parts[1] or ".." not in parts[1]:
            raise ParseError("expected sum(expr; i=v..N-1)", 0, text)
        var, rng = parts[1].split("=", 1)
        lo, hi = rng.split("..", 1)
        try:
            lo, hi = int(lo.strip()), int(hi.strip())
        except ValueError as exc:
            raise ParseError("summation bounds must be integers", 0, text) from exc
        name = var.strip()
        if not re.fullmatch(r"[A-Za-z_]\w*", name) or name == cls.var:
            raise ParseError(f"bad summation index {name!r}", 0, text)
        total = cls(field, lo, [], hi + 1)
        for i in range(lo, hi + 1):
            body = re.sub(rf"\b{name}\b", f"({i})", parts[0])
            term = _to_series(evaluate(parse_expression(body), SeriesEnv(field, cls=cls)), field, cls)
            total = series_add(total, term.truncate(hi + 1))
        result = total
    else:
        result = _to_series(evaluate(parse_expression(s), SeriesEnv(field, cls=cls)), field, cls)
    if prec is not None:
        result = result.truncate(prec)
    return result


def parse_component_tuple(text: str, field: Field, prec=None) -> tuple:
    """Parse ``(f_0; f_1; ...)`` into commutative series in T."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    parts = split_top_level(s, ";")
    return tuple(parse_series(p, field, prec, commutative=True) for p in parts)
