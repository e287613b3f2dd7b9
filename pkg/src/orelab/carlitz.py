"""Carlitz-style modules phi: F_q[T] -> K{t}, centralizers and the basis map d.

``phi`` is determined by the image phi_T, by default gamma + t. Evaluation is
Horner's rule in the twisted ring. Centralizers and commuting sets are solved
as bounded-degree linear systems over the prime field, and over finite K the
principal generator search is exhaustive.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .ansatz import base_field, bounded_kernel, field_basis
from .errors import CapError, DomainError, NotPerfectError, RingSpecError, SpecMismatchError
from .fields import ExtensionField, FieldElement, PrimeField
from .linalg import rank
from .ore import OrePoly, OreRing, format_coefficient_term, join_terms, left_divmod, ore_mul
from .orefrac import OreFraction, frac_eq


class CommutativePoly:
    """Polynomial in one commuting variable with raw coefficients from a field."""

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field, coeffs: Iterable, var: str = "T"):
        c = list(coeffs)
        while c and field.is_zero(c[-1]):
            c.pop()
        self.field = field
        self.coeffs = tuple(c)
        self.var = var

    @classmethod
    def from_elements(cls, field, coeffs, var="T"):
        return cls(field, [field.coerce(c) for c in coeffs], var)

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self):
        return not self.coeffs

    def _lift(self, other):
        if isinstance(other, CommutativePoly):
            return other
        return CommutativePoly(self.field, [self.field.coerce(other)], self.var)

    def __add__(self, other):
        o = self._lift(other)
        add, z = self.field.add, self.field.zero
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = o.coeffs + (z,) * (n - len(o.coeffs))
        return CommutativePoly(self.field, [add(x, y) for x, y in zip(a, b)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return CommutativePoly(self.field, [self.field.neg(c) for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        o = self._lift(other)
        f = self.field
        if not self.coeffs or not o.coeffs:
            return CommutativePoly(f, [], self.var)
        out = [f.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return CommutativePoly(f, out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n):
        r = CommutativePoly(self.field, [self.field.one], self.var)
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, other):
        if not isinstance(other, CommutativePoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __str__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if self.field.is_zero(c):
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            terms.append(format_coefficient_term(self.field, c, mono))
        return join_terms(terms)

    def __repr__(self):
        return f"CommutativePoly({self!s})"


class CarlitzSpec:
    """The F_q-algebra map T -> phi_T into a twisted ring K{t}."""

    def __init__(self, ring: OreRing, gamma=None, phi_T: OrePoly | None = None):
        if ring.rule != "twisted":
            raise RingSpecError("Carlitz modules live in twisted rings")
        self.ring = ring
        self.field = ring.domain
        if phi_T is not None:
            phi_T = ring.coerce(phi_T)
            if phi_T.degree() < 1:
                raise RingSpecError("phi_T must have positive degree")
            self.gamma = phi_T.coeff(0)
        else:
            self.gamma = ring.domain.zero if gamma is None else ring.domain.coerce(gamma)
            phi_T = ring.from_raw([self.gamma, ring.domain.one])
        self.phi_T = phi_T
        self._powers = [ring.one()]

    @property
    def alpha(self):
        a = getattr(self.field, "alpha", None)
        if a is None:
            raise RingSpecError(f"{self.field} has no designated alpha")
        return a

    @property
    def n(self) -> int:
        return getattr(self.field, "n", 1)

    def phi_power(self, k: int) -> OrePoly:
        """phi(T^k), cached."""
        while len(self._powers) <= k:
            self._powers.append(ore_mul(self._powers[-1], self.phi_T))
        return self._powers[k]

    def A(self, coeffs: Iterable, var: str = "T") -> CommutativePoly:
        """An element of F_q[T] from coefficients (low degree first)."""
        p = CommutativePoly.from_elements(self.field, coeffs, var)
        self._check_constants(p)
        return p

    def _check_constants(self, f: CommutativePoly):
        for c in f.coeffs:
            if self.field.frob(c) != c:
                raise SpecMismatchError(f"coefficient {self.field.to_str(c)} is not in F_q")

    def constants(self) -> list:
        """Raw elements of F_q inside K, when K is finite."""
        return self.field.subfield_elements()

    def __repr__(self):
        return f"CarlitzSpec(phi_T={self.phi_T})"


def carlitz_eval(spec: CarlitzSpec, f: CommutativePoly) -> OrePoly:
    """phi(f) by Horner's rule: (...(c_n phi_T + c_{n-1}) phi_T + ...) + c_0."""
    if f.field != spec.field:
        raise SpecMismatchError(f"polynomial over {f.field} evaluated in {spec.ring.describe()}")
    spec._check_constants(f)
    ring = spec.ring
    result = ring.zero()
    for c in reversed(f.coeffs):
        result = ore_mul(result, spec.phi_T) + ring.from_raw([c])
    return result


def carlitz_preimage(spec: CarlitzSpec, g: OrePoly) -> CommutativePoly:
    """The f in F_q[T] with phi(f) = g, by triangular back-substitution.

    Requires phi_T monic of degree 1 so that phi(T^k) has leading coefficient 1
    in degree k.
    """
    if spec.phi_T.degree() != 1 or spec.phi_T.lc() != spec.field.one:
        raise RingSpecError("back-substitution needs phi_T = gamma + t")
    F = spec.field
    coeffs = {}
    r = g
    while not r.is_zero():
        m = r.degree()
        c = r.lc()
        if F.frob(c) != c:
            raise DomainError(f"{g} is not in the image of phi")
        coeffs[m] = c
        r = r - spec.phi_power(m).scale_left(c)
    top = max(coeffs) if coeffs else -1
    return CommutativePoly(F, [coeffs.get(i, F.zero) for i in range(top + 1)])


def mrdp_d(fs: Sequence[CommutativePoly], spec: CarlitzSpec) -> OrePoly:
    """sum_k alpha^k phi(f_k) for a tuple (f_0, ..., f_{n-1}) of F_q[T] elements."""
    n = spec.n
    if len(fs) != n:
        raise DomainError(f"expected {n} components, got {len(fs)}")
    F = spec.field
    total = spec.ring.zero()
    for k, f in enumerate(fs):
        if not f.is_zero():
            total = total + carlitz_eval(spec, f).scale_left(F.alpha_power(k))
    return total


def mrdp_d_inv(g: OrePoly, spec: CarlitzSpec) -> list[CommutativePoly]:
    """Inverse of :func:`mrdp_d` when gamma lies in F_q."""
    F = spec.field
    if not isinstance(F, ExtensionField):
        raise RingSpecError("the basis map needs a finite field F_{q^n} with designated alpha")
    if any(F.frob(c) != c for c in spec.phi_T.coeffs):
        raise RingSpecError("inverse needs phi_T with coefficients in F_q (gamma in F_q)")
    n = spec.n
    parts = [[F.zero] * len(g.coeffs) for _ in range(n)]
    for i, c in enumerate(g.coeffs):
        for k, ck in enumerate(F.alpha_expand(c)):
            parts[k][i] = ck
    return [carlitz_preimage(spec, spec.ring.from_raw(p)) for p in parts]


def _items(x: OrePoly) -> dict:
    return {i: c for i, c in enumerate(x.coeffs) if not x.ring.domain.is_zero(c)}


def ansatz_unknowns(ring: OreRing, d: int, cap: int = 4) -> list[OrePoly]:
    """Spanning set over the base field of the polynomials of degree <= d."""
    basis = field_basis(ring.domain, cap)
    return [ring.monomial(c, i) for i in range(d + 1) for c in basis]


def commuting_space(ring: OreRing, condition, d: int, cap: int = 4) -> list[OrePoly]:
    """Base-field basis of {x : deg x <= d, condition(x) = 0}."""
    unknowns = ansatz_unknowns(ring, d, cap)
    vecs = bounded_kernel(ring.domain, unknowns, condition, _items)
    F = ring.domain
    out = []
    for vec in vecs:
        x = ring.zero()
        for c, u in zip(vec, unknowns):
            if c:
                x = x + u.scale_left(F.coerce(c))
        out.append(x)
    return out


def _fq_reduce(ring: OreRing, vectors: list[OrePoly], d: int, cap: int) -> list[OrePoly]:
    """Thin an F_p-basis of an F_q-space down to an F_q-basis."""
    F = ring.domain
    if not isinstance(F, ExtensionField) or F.e == 1:
        return vectors
    unknowns = ansatz_unknowns(ring, d, cap)
    base = base_field(F)
    span: list[dict] = []
    chosen = []

    def coords(x):
        vec = {}
        for i, c in enumerate(x.coeffs):
            for j, dg in enumerate(F.digits(c)):
                if dg:
                    vec[i * F.degree + j] = dg
        return vec

    ncols = F.degree * (d + 1)
    current = 0
    for v in vectors:
        trial = span + [coords(v)]
        if rank(base, trial, ncols) > current:
            chosen.append(v)
            for j in range(F.e):
                span.append(coords(v.scale_left(F.pow(F.beta, j))))
            current = rank(base, span, ncols)
    return chosen


def centralizer_basis(u: OrePoly, ring: OreRing | None = None, d: int = 2, cap: int = 4) -> list[OrePoly]:
    """Basis of {x : deg x <= d, x*u = u*x}.

    Over a finite field this is an F_q-basis (twisted) found by exact linear
    algebra on F_p coordinates. Over a rational function field the
    coefficients of x range over polynomials of total degree <= ``cap``; the
    result is a basis over the prime field (or QQ) of that bounded space.
    """
    ring = ring or u.ring
    u = ring.coerce(u)
    sols = commuting_space(ring, lambda x: ore_mul(x, u) - ore_mul(u, x), d, cap)
    if ring.rule == "twisted":
        sols = _fq_reduce(ring, sols, d, cap)
    return sols


def enumerate_polys(ring: OreRing, d: int) -> Iterable[OrePoly]:
    """All polynomials of degree <= d over a finite field, degree-lex ordered."""
    F = ring.domain
    if not F.is_finite:
        raise RingSpecError("exhaustive enumeration needs a finite field")
    if F.size ** (d + 1) > 10 ** 6:
        raise CapError("enumeration exceeds 10^6 elements")
    yield ring.zero()
    elems = list(F.elements())
    nonzero = elems[1:]
    for deg in range(d + 1):
        for lead in nonzero:
            for tail in itertools.product(elems, repeat=deg):
                yield ring.from_raw(list(reversed(tail)) + [lead])


@dataclass
class GeneratorReport:
    """Outcome of a principal-generator search."""

    generator: OrePoly | None
    degree_bound: int
    members: list = dc_field(default_factory=list)
    verified: bool = True
    witness: object = None

    @property
    def verdict(self) -> str:
        if self.generator is None:
            return "none-at-bound"
        return "certified" if self.verified else "counterexample"


def commuting_set(a: OrePoly, d: int) -> list[OrePoly]:
    """S_a up to degree d: the exhaustively enumerated s with s*a = a*s."""
    return [s for s in enumerate_polys(a.ring, d) if ore_mul(s, a) == ore_mul(a, s)]


def principal_generator_report(B: OrePoly, C: OrePoly, a: OrePoly, d: int) -> GeneratorReport:
    """Search I = {x : B*a*x = C*x*a} up to degree ``d`` and test I = k*S_a.

    The generator k is a nonzero member of least degree, preferring leading
    coefficient 1. Every member x is then left-divided by k and the quotient
    must commute with ``a``.
    """
    ring = a.ring
    if B.is_zero() or C.is_zero() or a.is_zero():
        raise DomainError("B, C and a must be nonzero")
    if not ring.domain.is_finite:
        raise NotPerfectError("principal generators are computed over finite (perfect) fields only")
    Ba = ore_mul(B, a)
    members = [x for x in enumerate_polys(ring, d)
               if not x.is_zero() and ore_mul(Ba, x) == ore_mul(ore_mul(C, x), a)]
    if not members:
        return GeneratorReport(None, d, [])
    low = min(x.degree() for x in members)
    cands = [x for x in members if x.degree() == low]
    monic = [x for x in cands if x.lc() == ring.domain.one]
    k = (monic or cands)[0]
    for x in members:
        s, r = left_divmod(x, k)
        if not r.is_zero() or ore_mul(s, a) != ore_mul(a, s):
            return GeneratorReport(k, d, members, False, {"member": str(x), "quotient": str(s), "remainder": str(r)})
    for s in commuting_set(a, max(0, d - k.degree())):
        ks = ore_mul(k, s)
        if ore_mul(Ba, ks) != ore_mul(ore_mul(C, ks), a):
            return GeneratorReport(k, d, members, False, {"commuting": str(s), "product": str(ks)})
    return GeneratorReport(k, d, members)


def principal_generator(B: OrePoly, C: OrePoly, a: OrePoly, d: int) -> OrePoly | None:
    """Least-degree generator k of I = {x : B*a*x = C*x*a} with deg k <= d, or None."""
    return principal_generator_report(B, C, a, d).generator


def frac_commutes_with_phiT(u: OreFraction, spec: CarlitzSpec) -> bool:
    """True iff u*phi_T = phi_T*u in the fraction field."""
    phi = OreFraction.embed(spec.phi_T)
    return frac_eq(u * phi, phi * u)
