"""Left fractions b^-1 a over an Ore domain.

Any ring object exposing ``common_left_multiple(a, b)``, ``zero()`` and
``one()`` can be localized; this covers univariate :class:`~orelab.ore.OreRing`
instances and the multivariate :class:`~orelab.weyl.WeylRing`. Equality is
always decided by cross-multiplication. Canonical forms (greatest common left
divisor removed, monic denominator) are available for univariate rings where
left division exists.
"""
from __future__ import annotations

from .errors import DomainError, RingSpecError, SpecMismatchError
from .ore import OrePoly, OreRing, left_divmod, left_gcd


class OreFraction:
    """The element den^-1 * num."""

    __slots__ = ("den", "num", "ring")

    def __init__(self, den, num):
        if den.is_zero():
            raise DomainError("fraction with zero denominator")
        if den.ring != num.ring:
            raise SpecMismatchError("numerator and denominator live in different rings")
        self.den = den
        self.num = num
        self.ring = den.ring

    @classmethod
    def embed(cls, r) -> "OreFraction":
        """r -> 1^-1 r."""
        return cls(r.ring.one(), r)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _other(self, other):
        if isinstance(other, OreFraction):
            if other.ring != self.ring:
                raise SpecMismatchError("fractions over different rings")
            return other
        try:
            r = self.ring.coerce(other)
        except Exception:
            return None
        return OreFraction.embed(r)

    def __add__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else frac_add(self, v)

    def __radd__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else frac_add(v, self)

    def __neg__(self):
        return OreFraction(self.den, -self.num)

    def __sub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else frac_add(self, -v)

    def __rsub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else frac_add(v, -self)

    def __mul__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else frac_mul(self, v)

    def __rmul__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else frac_mul(v, self)

    def __truediv__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else frac_mul(self, frac_inv(v))

    def __rtruediv__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else frac_mul(v, frac_inv(self))

    def __pow__(self, n: int):
        base = self if n >= 0 else frac_inv(self)
        result = OreFraction.embed(self.ring.one())
        for _ in range(abs(n)):
            result = frac_mul(result, base)
        return result

    def inverse(self) -> "OreFraction":
        return frac_inv(self)

    def __eq__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return frac_eq(self, v)

    def __hash__(self):
        if supports_canonical(self.ring):
            u = frac_canonical(self)
            return hash((u.den, u.num))
        return hash(self.ring)

    def __str__(self):
        return format_fraction(self)

    def __repr__(self):
        return f"OreFraction({format_fraction(self)!r})"


def frac_eq(u: OreFraction, v: OreFraction) -> bool:
    """u == v in the division ring: with c*b_u = d*b_v compare c*a_u and d*a_v."""
    if u.ring != v.ring:
        raise SpecMismatchError("fractions over different rings")
    if u.num.is_zero() or v.num.is_zero():
        return u.num.is_zero() and v.num.is_zero()
    if u.den == v.den:
        return u.num == v.num
    c, d = u.ring.common_left_multiple(u.den, v.den)
    return c * u.num == d * v.num


def frac_add(u: OreFraction, v: OreFraction) -> OreFraction:
    """(c*b_u)^-1 (c*a_u + d*a_v) for a common left multiple c*b_u = d*b_v."""
    if u.ring != v.ring:
        raise SpecMismatchError("fractions over different rings")
    if u.den == v.den:
        return OreFraction(u.den, u.num + v.num)
    c, d = u.ring.common_left_multiple(u.den, v.den)
    return OreFraction(c * u.den, c * u.num + d * v.num)


def frac_mul(u: OreFraction, v: OreFraction) -> OreFraction:
    """(b1^-1 a1)(b2^-1 a2) = (e*b1)^-1 (f*a2) where e*a1 = f*b2."""
    if u.ring != v.ring:
        raise SpecMismatchError("fractions over different rings")
    if u.num.is_zero() or v.num.is_zero():
        return OreFraction(u.ring.one(), u.ring.zero())
    if v.den == v.ring.one():
        return OreFraction(u.den, u.num * v.num)
    e, f = u.ring.common_left_multiple(u.num, v.den)
    return OreFraction(e * u.den, f * v.num)


def frac_inv(u: OreFraction) -> OreFraction:
    """(b^-1 a)^-1 = a^-1 b."""
    if u.num.is_zero():
        raise DomainError("inverse of the zero fraction")
    return OreFraction(u.num, u.den)


def supports_canonical(ring) -> bool:
    """True for univariate rings with a left-division Euclidean chain."""
    if not isinstance(ring, OreRing):
        return False
    if ring.rule == "twisted":
        return ring.domain.is_perfect and ring.commutative_coefficients
    return True


def frac_canonical(u: OreFraction) -> OreFraction:
    """Remove the greatest common left divisor of den and num, then make den monic."""
    ring = u.ring
    if not supports_canonical(ring):
        raise RingSpecError(f"canonical fractions are unavailable over {getattr(ring, 'describe', lambda: ring)()}")
    if u.num.is_zero():
        return OreFraction(ring.one(), ring.zero())
    g = left_gcd(u.den, u.num)
    b = left_divmod(u.den, g)[0] if g.degree() > 0 else u.den
    a = left_divmod(u.num, g)[0] if g.degree() > 0 else u.num
    s = ring.domain.inv(b.lc())
    return OreFraction(b.scale_left(s), a.scale_left(s))


def format_fraction(u: OreFraction) -> str:
    if supports_canonical(u.ring):
        u = frac_canonical(u)
    if u.den == u.ring.one():
        return f"frac(1; {u.num})"
    return f"frac({u.den}; {u.num})"


class FractionField:
    """Left fractions of an Ore ring presented as a coefficient division ring.

    Values are :class:`OreFraction` objects. When the underlying ring admits
    canonical forms, every result is canonicalized so sizes stay small.
    """

    kind = "ore-fractions"
    is_finite = False
    is_perfect = True
    canonical = False
    nvars = 0
    q = None

    def __init__(self, ring):
        self.ring = ring
        self.characteristic = ring.domain.characteristic
        self.reduce = supports_canonical(ring)
        self.commutative = isinstance(ring, OreRing) and ring.rule == "central" and getattr(ring.domain, "commutative", True)
        self.zero = OreFraction(ring.one(), ring.zero())
        self.one = OreFraction(ring.one(), ring.one())

    def _key(self):
        return ("frac", self.ring)

    def __eq__(self, other):
        return isinstance(other, FractionField) and other.ring == self.ring

    def __hash__(self):
        return hash(self._key())

    def describe(self):
        return f"Frac({self.ring.describe()})"

    def __str__(self):
        return self.describe()

    def _norm(self, u):
        return frac_canonical(u) if self.reduce else u

    def __call__(self, value):
        return self.coerce(value)

    def coerce(self, value):
        if isinstance(value, OreFraction):
            return value
        if isinstance(value, OrePoly) or hasattr(value, "ring") and getattr(value, "ring", None) == self.ring:
            return OreFraction.embed(value)
        return OreFraction.embed(self.ring.coerce(value))

    def from_int(self, n):
        return self.coerce(n)

    def add(self, a, b):
        return self._norm(frac_add(a, b))

    def neg(self, a):
        return OreFraction(a.den, -a.num)

    def sub(self, a, b):
        return self._norm(frac_add(a, self.neg(b)))

    def mul(self, a, b):
        return self._norm(frac_mul(a, b))

    def inv(self, a):
        return self._norm(frac_inv(a))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a.num.is_zero()

    def eq(self, a, b):
        return frac_eq(a, b)

    def frob_pow(self, a, i):
        if i:
            raise RingSpecError("fraction coefficients carry no Frobenius")
        return a

    def partial(self, a, i):
        raise RingSpecError("fraction coefficients carry no derivation")

    def to_str(self, a):
        u = self._norm(a)
        if u.den == u.ring.one():
            return str(u.num)
        return format_fraction(u)

    def needs_parens(self, a):
        s = self.to_str(a)
        return not s.startswith("frac(") and (" " in s or "*" in s)

    def symbols(self):
        return {}
