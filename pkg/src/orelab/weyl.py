"""Differential operators K[d1, ..., dk] over rational function fields.

A :class:`DiffOp` is a finite sum of a_I * d^I with all coefficients on the
left. Multiplication follows the multi-index Leibniz rule

    (a d^A)(b d^B) = sum_{G <= A} binom(A, G) a * d^(A-G)(b) * d^(G+B).

Beyond arithmetic the module computes common left multiples through the
dimension-count bound, the rings R_l (operator-fraction coefficients with
one distinguished generator) together with division in them, the
kappa-generator search for M = {x : A x d_{l+1} = B d_{l+1} x}, and the
commutation test characterizing constants.
"""
from __future__ import annotations

import itertools
import random as _random
from fractions import Fraction
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterable, Sequence

from .ansatz import bounded_kernel, field_basis
from .errors import CapError, DomainError, ParseError, RingSpecError, SpecMismatchError
from .fields import Field, FieldElement, RationalFunctionField
from .linalg import first_dependency
from .ore import OrePair, OrePoly, OreRing, format_coefficient_term, join_terms, left_divmod, ore_mul
from .orefrac import FractionField, OreFraction, frac_eq
from .parsing import Env, evaluate, parse_expression


class WeylRing:
    """K[d1..dk] where d_i differentiates with respect to the i-th field variable."""

    def __init__(self, field: Field, k: int | None = None):
        if not isinstance(field, RationalFunctionField):
            raise RingSpecError("differential operator rings need a rational function field")
        k = field.nvars if k is None else k
        if not 1 <= k <= field.nvars:
            raise RingSpecError(f"{field} supports at most {field.nvars} derivations")
        self.field = field
        self.domain = field
        self.k = k
        self.gens = tuple(f"d{i + 1}" for i in range(k))

    def _key(self):
        return ("weyl", self.field, self.k)

    def __eq__(self, other):
        return isinstance(other, WeylRing) and other._key() == self._key()

    def __hash__(self):
        return hash(self._key())

    def describe(self):
        return f"{self.field.describe()}[{','.join(self.gens)}]"

    def __repr__(self):
        return f"WeylRing({self.describe()!r})"

    def zero(self) -> "DiffOp":
        return DiffOp(self, {})

    def one(self) -> "DiffOp":
        return DiffOp(self, {(0,) * self.k: self.field.one})

    def d(self, i: int) -> "DiffOp":
        """The generator d_i (numbered from 1)."""
        e = [0] * self.k
        e[i - 1] = 1
        return DiffOp(self, {tuple(e): self.field.one})

    def x(self, i: int) -> "DiffOp":
        """The field variable x_i as an operator of order zero."""
        return DiffOp(self, {(0,) * self.k: self.field.gen(i - 1)})

    def monomial(self, c, exps) -> "DiffOp":
        return DiffOp(self, {tuple(exps): c})

    def coerce(self, value) -> "DiffOp":
        if isinstance(value, DiffOp):
            if value.ring != self:
                raise SpecMismatchError(f"{value.ring.describe()} vs {self.describe()}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return DiffOp(self, {(0,) * self.k: self.field.coerce(value)})

    __call__ = coerce

    def parse(self, text: str) -> "DiffOp":
        value = evaluate(parse_expression(text), WeylEnv(self))
        return self.coerce(value)

    def random(self, rng, degree: int = 2, terms: int = 3, coeff_degree: int = 1, den_degree: int = 0) -> "DiffOp":
        out = {}
        for _ in range(terms):
            e = [0] * self.k
            for _ in range(rng.randint(0, degree)):
                e[rng.randrange(self.k)] += 1
            out[tuple(e)] = self.field.random(rng, degree=coeff_degree, den_degree=den_degree)
        op = DiffOp(self, out)
        return op if not op.is_zero() else self.one()

    def common_left_multiple(self, a, b):
        return weyl_common_left_multiple(a, b)


class WeylEnv(Env):
    def __init__(self, ring: WeylRing):
        self.ring = ring
        self.table = dict(ring.field.symbols())
        for i in range(1, ring.k + 1):
            self.table[f"d{i}"] = ring.d(i)

    def number(self, n, pos):
        return self.ring.field(n)

    def name(self, name, pos):
        if name in self.table:
            return self.table[name]
        raise ParseError(f"unknown symbol {name!r} in {self.ring.describe()}", pos)

    def divide(self, a, b, pos):
        if isinstance(b, DiffOp):
            if set(b.terms) != {(0,) * self.ring.k}:
                raise ParseError("division by a non-constant operator; use inv() or frac()", pos)
            b = FieldElement(self.ring.field, b.terms[(0,) * self.ring.k])
        if isinstance(a, DiffOp):
            return a * b.inverse()
        return a / b

    def power(self, a, n, pos):
        if n < 0 and isinstance(a, DiffOp):
            raise ParseError("negative powers of operators need fractions", pos)
        return a ** n


class DiffOp:
    """Immutable operator sum a_I d^I stored as ``{I: raw coefficient}``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: WeylRing, terms: dict):
        is_zero = ring.field.is_zero
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if not is_zero(c)}
        self._hash = None

    def is_zero(self) -> bool:
        return not self.terms

    def degree_in(self, j: int):
        """Degree in d_j (numbered from 1)."""
        if not self.terms:
            return float("-inf")
        return max(e[j - 1] for e in self.terms)

    def max_degree(self) -> int:
        return max((max(e) for e in self.terms), default=0)

    def total_degree(self):
        if not self.terms:
            return float("-inf")
        return max(sum(e) for e in self.terms)

    def coeff(self, exps):
        return self.terms.get(tuple(exps), self.ring.field.zero)

    def _other(self, other):
        if isinstance(other, DiffOp):
            if other.ring != self.ring:
                raise SpecMismatchError("operators over different rings")
            return other
        try:
            return self.ring.coerce(other)
        except (SpecMismatchError, ParseError):
            return None

    def __add__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        add = self.ring.field.add
        out = dict(self.terms)
        for e, c in g.terms.items():
            out[e] = add(out[e], c) if e in out else c
        return DiffOp(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return DiffOp(self.ring, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return self + (-g)

    def __rsub__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return g + (-self)

    def __mul__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return weyl_mul(self, g)

    def __rmul__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return weyl_mul(g, self)

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative power of an operator")
        r = self.ring.one()
        for _ in range(n):
            r = weyl_mul(r, self)
        return r

    def __eq__(self, other):
        g = other if isinstance(other, DiffOp) else self._other(other)
        if g is None:
            return NotImplemented
        return g.ring == self.ring and g.terms == self.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def scale_left(self, c) -> "DiffOp":
        mul = self.ring.field.mul
        return DiffOp(self.ring, {e: mul(c, a) for e, a in self.terms.items()})

    def __str__(self):
        return format_diffop(self)

    def __repr__(self):
        return f"DiffOp({format_diffop(self)!r})"


def format_diffop(f: DiffOp) -> str:
    ring = f.ring
    terms = []
    for e in sorted(f.terms, key=lambda e: (sum(e), e), reverse=True):
        mono = "*".join(g if n == 1 else f"{g}^{n}" for g, n in zip(ring.gens, e) if n)
        terms.append(format_coefficient_term(ring.field, f.terms[e], mono))
    return join_terms(terms)


def _multi_partial(field, b, exps, cache):
    """d^exps applied to the coefficient b, memoized in ``cache``."""
    key = tuple(exps)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not any(exps):
        cache[key] = b
        return b
    j = next(i for i, n in enumerate(exps) if n)
    lower = list(exps)
    lower[j] -= 1
    val = field.partial(_multi_partial(field, b, lower, cache), j)
    cache[key] = val
    return val


def weyl_mul(f: DiffOp, g: DiffOp) -> DiffOp:
    """Normal-form product by the multi-index Leibniz rule."""
    if f.ring != g.ring:
        raise SpecMismatchError("operators over different rings")
    ring = f.ring
    F = ring.field
    add, mul, is_zero = F.add, F.mul, F.is_zero
    out = {}
    caches = {e: {} for e in g.terms}
    for ea, a in f.terms.items():
        ranges = [range(n + 1) for n in ea]
        for gam in itertools.product(*ranges):
            diff = tuple(n - m for n, m in zip(ea, gam))
            binom = 1
            for n, m in zip(ea, gam):
                binom *= comb(n, m)
            cb = F.from_int(binom)
            if is_zero(cb):
                continue
            for eb, b in g.terms.items():
                db = _multi_partial(F, b, diff, caches[eb])
                if is_zero(db):
                    continue
                term = mul(a, db)
                if binom != 1:
                    term = mul(cb, term)
                key = tuple(m + n for m, n in zip(gam, eb))
                out[key] = add(out[key], term) if key in out else term
    return DiffOp(ring, out)


def ore_bound_N(n: int, k: int) -> int:
    """Smallest N with 2(N+1)^k > (N+n+1)^k, and N = n when k = 1."""
    if n < 0 or k < 1:
        raise DomainError("need n >= 0 and k >= 1")
    if k == 1:
        return n
    N = 0
    while not 2 * (N + 1) ** k > (N + n + 1) ** k:
        N += 1
    return N


def _box(N: int, k: int) -> list[tuple]:
    pts = list(itertools.product(range(N + 1), repeat=k))
    pts.sort(key=lambda e: (sum(e), e))
    return pts


def weyl_ore_pair_search(a: DiffOp, b: DiffOp, max_extra: int = 4) -> OrePair:
    """Nonzero (c, d) with c*a = d*b, unknown exponents in the box [0, N]^k.

    N starts at ``ore_bound_N(n, k)`` with n the largest single-generator
    degree in a or b, where the system has more unknowns than equations.
    """
    if a.ring != b.ring:
        raise SpecMismatchError("operators over different rings")
    if a.is_zero() or b.is_zero():
        raise DomainError("common left multiples need nonzero operands")
    ring = a.ring
    F = ring.field
    k = ring.k
    n = max(a.max_degree(), b.max_degree())
    N0 = ore_bound_N(n, k)
    tried = []
    nb = -b
    for N in range(N0, N0 + max_extra + 1):
        tried.append(N)
        box = _box(N, k)
        cols, labels = [], []
        for e in box:
            mono = ring.monomial(F.one, e)
            for side, op in (("c", a), ("d", nb)):
                prod = weyl_mul(mono, op)
                cols.append(dict(prod.terms))
                labels.append((side, e))
        rows = {key for col in cols for key in col}
        vec = first_dependency(F, cols)
        if vec is None:
            continue
        cc, dd = {}, {}
        for j, v in vec.items():
            side, e = labels[j]
            (cc if side == "c" else dd)[e] = v
        c, d = DiffOp(ring, cc), DiffOp(ring, dd)
        if c.is_zero() or d.is_zero() or weyl_mul(c, a) != weyl_mul(d, b):
            raise AssertionError("Ore pair verification failed")  # pragma: no cover
        return OrePair(c, d, tried, len(cols), len(rows))
    raise DomainError("no common left multiple found within the search bound")  # pragma: no cover


def weyl_common_left_multiple(a: DiffOp, b: DiffOp) -> tuple[DiffOp, DiffOp]:
    pair = weyl_ore_pair_search(a, b)
    return pair.c, pair.d


def phi_t_to_d(ring: WeylRing, poly: dict) -> DiffOp:
    """Image of a polynomial ``{exponents: coefficient}`` in commuting t_i under t_i -> d_i."""
    F = ring.field
    return DiffOp(ring, {tuple(e): F.coerce(c) for e, c in poly.items()})


def constants_centralizer_check(f: OreFraction) -> bool:
    """True iff f commutes with every generator d_j in the fraction field."""
    ring = f.ring
    for j in range(1, ring.k + 1):
        dj = OreFraction.embed(ring.d(j))
        if not frac_eq(f * dj, dj * f):
            return False
    return True


# rings with one distinguished generator over operator-fraction coefficients

class FractionCoefficients(FractionField):
    """Fractions of an inner operator ring used as coefficients of an outer generator.

    Extends the field derivations to fractions by the quotient rule
    d(b^-1 a) = b^-1 d(a) - b^-1 d(b) b^-1 a.
    """

    def __init__(self, ring: OreRing):
        super().__init__(ring)
        self.nvars = ring.domain.nvars

    def _dpoly(self, p: OrePoly, i: int) -> OrePoly:
        F = self.ring.domain
        return OrePoly(self.ring, [F.partial(c, i) for c in p.coeffs])

    def partial(self, a, i):
        da = self._dpoly(a.num, i)
        db = self._dpoly(a.den, i)
        first = OreFraction(a.den, da)
        if db.is_zero():
            return self._norm(first)
        second = self.mul(OreFraction(a.den, db), OreFraction(a.den, a.num))
        return self.sub(first, second)


class RlRing:
    """Operators with generator d_main over coefficients K_c(other generators).

    K_c is the field of elements constant in x_1..x_c; the main generator is
    central exactly when main <= c. Only k <= 2 is supported.
    """

    def __init__(self, weyl: WeylRing, const_upto: int, main: int):
        if weyl.k > 2:
            raise CapError("operator-fraction rings are shipped for k <= 2 only")
        if not 1 <= main <= weyl.k:
            raise RingSpecError(f"no generator d{main}")
        if not 0 <= const_upto <= weyl.k:
            raise RingSpecError("constant level out of range")
        self.weyl = weyl
        self.const_upto = const_upto
        self.main = main
        field = weyl.field
        self.others = [j for j in range(1, weyl.k + 1) if j != main]
        if self.others:
            o = self.others[0]
            rule = "differential" if o > const_upto else "central"
            self.inner = OreRing(field, rule, var=o if rule == "differential" else None, gen=f"d{o}")
            self.coeffs = FractionCoefficients(self.inner)
        else:
            self.inner = None
            self.coeffs = field
        rule = "differential" if main > const_upto else "central"
        self.ring = OreRing(self.coeffs, rule, var=main if rule == "differential" else None, gen=f"d{main}")

    def describe(self) -> str:
        return self.ring.describe()

    def _check_constant(self, c):
        F = self.weyl.field
        for i in range(self.const_upto):
            if not F.is_zero(F.partial(c, i)):
                raise RingSpecError(f"coefficient {F.to_str(c)} is not constant in x{i + 1}")

    def from_diffop(self, op: DiffOp) -> OrePoly:
        """Embed a polynomial operator, grouping by the power of the main generator."""
        if op.ring != self.weyl:
            raise SpecMismatchError("operator from another ring")
        m = self.main - 1
        groups = {}
        for e, c in op.terms.items():
            self._check_constant(c)
            groups.setdefault(e[m], {})[e] = c
        if not groups:
            return self.ring.zero()
        coeffs = []
        F = self.weyl.field
        for i in range(max(groups) + 1):
            g = groups.get(i, {})
            if self.inner is None:
                coeffs.append(g.get(tuple(i if j == m else 0 for j in range(self.weyl.k)), F.zero))
            else:
                o = self.others[0] - 1
                inner = [F.zero] * (max((e[o] for e in g), default=-1) + 1)
                for e, c in g.items():
                    inner[e[o]] = F.add(inner[e[o]], c)
                coeffs.append(OreFraction.embed(OrePoly(self.inner, inner)))
        return OrePoly(self.ring, coeffs)

    def generator(self) -> OrePoly:
        return self.ring.x()

    def coefficient(self, op: DiffOp) -> object:
        """Embed an operator free of the main generator as a coefficient."""
        p = self.from_diffop(op)
        if p.degree() > 0:
            raise DomainError("operator involves the main generator")
        return p.coeff(0) if p.coeffs else self.coeffs.zero


def rl_ring(weyl: WeylRing, l: int) -> RlRing:
    """R_l = K_l(other generators)[d_l] with K_l the constants in x_1..x_l."""
    if not 1 <= l <= weyl.k:
        raise RingSpecError(f"l must lie in 1..{weyl.k}")
    return RlRing(weyl, l, l)


def rl_divmod(x: OrePoly, kappa: OrePoly) -> tuple[OrePoly, OrePoly]:
    """x = kappa*y + r with deg r < deg kappa in the main generator."""
    if kappa.is_zero():
        raise DomainError("division by zero")
    y, r = left_divmod(x, kappa)
    if ore_mul(kappa, y) + r != x:
        raise AssertionError("division identity failed")  # pragma: no cover
    return y, r


@dataclass
class KappaReport:
    """Outcome of the kappa-generator search for M = {x : A x d_{l+1} = B d_{l+1} x}."""

    kappa: DiffOp | None
    degree_bound: int
    basis: list = dc_field(default_factory=list)
    verified: bool = True
    witness: object = None
    coefficient_cap: int = 2

    @property
    def verdict(self) -> str:
        if self.kappa is None:
            return "none-at-bound"
        return "certified" if self.verified else "counterexample"


def _kappa_unknowns(weyl: WeylRing, l: int, d: int, cap: int) -> list[DiffOp]:
    F = weyl.field
    in_kl = []
    for c in field_basis(F, cap):
        exps = next(iter(c.num.to_dict()))
        if all(exps[i] == 0 for i in range(l)):
            in_kl.append(c)
    out = []
    for e in itertools.product(range(d + 1), repeat=weyl.k):
        for c in in_kl:
            out.append(weyl.monomial(c, e))
    return out


def _bounded_vectors(weyl: WeylRing, condition, l: int, d: int, cap: int):
    unknowns = _kappa_unknowns(weyl, l, d, cap)
    return unknowns, bounded_kernel(weyl.field, unknowns, condition, lambda op: dict(op.terms))


def _combine(weyl: WeylRing, unknowns, vec) -> DiffOp:
    F = weyl.field
    out = {}
    for c, u in zip(vec, unknowns):
        if c:
            (e, a), = u.terms.items()
            a = F.mul(F.coerce(c), a)
            out[e] = F.add(out[e], a) if e in out else a
    return DiffOp(weyl, out)


def bounded_operator_space(weyl: WeylRing, condition, l: int, d: int, cap: int) -> list[DiffOp]:
    """QQ-basis of {x : exponents <= d, coefficients in K_l of degree <= cap, condition(x) = 0}."""
    unknowns, vecs = _bounded_vectors(weyl, condition, l, d, cap)
    return [_combine(weyl, unknowns, v) for v in vecs]


def _lowest_main_degree(weyl: WeylRing, unknowns, vecs, main: int) -> DiffOp | None:
    """A QQ-combination of the kernel vectors with least degree in d_main.

    Row reduction with columns ordered by decreasing d_main-degree gives
    pivots whose degrees are exactly the degrees attained in the span.
    """
    if not vecs:
        return None
    order = sorted(range(len(unknowns)), key=lambda j: -next(iter(unknowns[j].terms))[main - 1])
    rows = [[Fraction(c) for c in v] for v in vecs]
    pivots = []
    for j in order:
        idx = next((i for i, r in enumerate(rows) if r[j]), None)
        if idx is None:
            continue
        piv = rows.pop(idx)
        inv = 1 / piv[j]
        piv = [c * inv for c in piv]
        for r in rows:
            if r[j]:
                f = r[j]
                for t in range(len(r)):
                    r[t] -= f * piv[t]
        pivots.append((next(iter(unknowns[j].terms))[main - 1], piv))
        if not rows:
            break
    best = min(pivots, key=lambda p: p[0])[1]
    return _combine(weyl, unknowns, best)


def kappa_generator_report(A: DiffOp, B: DiffOp, l: int, d: int, cap: int = 2, samples: int = 4, seed: int = 0) -> KappaReport:
    """Search M = {x : A x d_{l+1} = B d_{l+1} x} within a bounded space and test M = kappa*S.

    The search space is spanned over QQ by monomial operators with every
    exponent at most ``d`` and coefficients that are monomials of degree at
    most ``cap`` in the variables x_{l+1}, ... (the field K_l). kappa is a
    member of least degree in d_{l+1}. Each basis member and some random
    combinations are divided by kappa in K_l(other generators)[d_{l+1}];
    the remainder must vanish and the quotient must commute with d_{l+1}.
    """
    weyl = A.ring
    if weyl.k > 2:
        raise CapError("kappa generators are shipped for k <= 2 only")
    if A.is_zero() or B.is_zero():
        raise DomainError("A and B must be nonzero")
    if not 0 <= l < weyl.k:
        raise RingSpecError(f"l must lie in 0..{weyl.k - 1}")
    j = l + 1
    dj = weyl.d(j)
    Bd = weyl_mul(B, dj)
    cond = lambda x: weyl_mul(weyl_mul(A, x), dj) - weyl_mul(Bd, x)
    unknowns, vecs = _bounded_vectors(weyl, cond, l, d, cap)
    basis = [_combine(weyl, unknowns, v) for v in vecs]
    kappa = _lowest_main_degree(weyl, unknowns, vecs, j)
    if kappa is None:
        return KappaReport(None, d, [], coefficient_cap=cap)
    R = RlRing(weyl, l, j)
    gen = R.generator()
    K = R.from_diffop(kappa)
    rng = _random.Random(seed)
    members = list(basis)
    F = weyl.field
    for _ in range(samples):
        combo = weyl.zero()
        for b in basis:
            combo = combo + b.scale_left(F.from_int(rng.randint(-3, 3)))
        if not combo.is_zero():
            members.append(combo)
    for m in members:
        if not cond(m).is_zero():
            return KappaReport(kappa, d, basis, False, {"member": str(m), "reason": "not in M"}, cap)
        s, r = left_divmod(R.from_diffop(m), K)
        if not r.is_zero() or ore_mul(s, gen) != ore_mul(gen, s):
            return KappaReport(kappa, d, basis, False, {"member": str(m), "quotient": str(s), "remainder": str(r)}, cap)
    commuting = bounded_operator_space(weyl, lambda x: weyl_mul(x, dj) - weyl_mul(dj, x), l, max(0, d - 1), min(cap, 1))
    for s in commuting[:6]:
        ks = weyl_mul(kappa, s)
        if not cond(ks).is_zero():
            return KappaReport(kappa, d, basis, False, {"commuting": str(s), "product": str(ks)}, cap)
    return KappaReport(kappa, d, basis, True, None, cap)


def kappa_generator(A: DiffOp, B: DiffOp, l: int, d: int, cap: int = 2) -> DiffOp | None:
    """Least d_{l+1}-degree member of M within the bounded search space, or None."""
    return kappa_generator_report(A, B, l, d, cap).kappa
