"""Univariate Ore polynomial rings K[x; sigma, delta] with x*a = sigma(a)*x + delta(a).

Two rule tags are exposed: ``twisted`` (sigma = a -> a^q, delta = 0) and
``differential`` (sigma = id, delta = d/dx_i). A third tag ``central``
(sigma = id, delta = 0) serves as the commutative polynomial ring needed
for operator rings whose generator commutes with the coefficients.

Coefficient domains only need the raw-value interface of
:class:`orelab.fields.Field`; they may be noncommutative division rings
(see :class:`orelab.orefrac.FractionField`), in which case every product
keeps its operand order.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import DomainError, NotPerfectError, ParseError, RingSpecError, SpecMismatchError
from .fields import Field, FieldElement
from .linalg import first_dependency
from .parsing import Env, evaluate, parse_expression

NEG_INF = float("-inf")
"""Degree of the zero polynomial."""

RULES = ("twisted", "differential", "central")


class OreRing:
    """Ring of Ore polynomials over ``domain`` with one generator."""

    def __init__(self, domain: Field, rule: str = "twisted", var: int | None = None, gen: str | None = None):
        if rule not in RULES:
            raise RingSpecError(f"unknown rule {rule!r}")
        if rule == "twisted":
            if not domain.characteristic or not domain.q:
                raise RingSpecError(f"twisted rings need characteristic p > 0 and q set; got {domain}")
            gen = gen or "t"
        elif rule == "differential":
            if var is None:
                var = 1
            if not 1 <= var <= domain.nvars:
                raise RingSpecError(f"{domain} has no derivation number {var}")
            gen = gen or f"d{var}"
        else:
            gen = gen or "d"
        self.domain = domain
        self.rule = rule
        self.var = var
        self.gen = gen
        self.commutative_coefficients = getattr(domain, "commutative", True)

    def _key(self):
        return (self.domain, self.rule, self.var, self.gen)

    def __eq__(self, other):
        return isinstance(other, OreRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"OreRing({self.describe()!r})"

    def describe(self) -> str:
        if self.rule == "twisted":
            return f"{self.domain.describe()}{{{self.gen}}}"
        return f"{self.domain.describe()}[{self.gen}]"

    # rule pieces
    def sigma_pow(self, a, i: int):
        if self.rule != "twisted" or i == 0:
            return a
        return self.domain.frob_pow(a, i)

    def delta(self, a):
        if self.rule != "differential":
            return self.domain.zero
        return self.domain.partial(a, self.var - 1)

    # constructors
    def __call__(self, value) -> "OrePoly":
        return self.coerce(value)

    def poly(self, coeffs: Iterable) -> "OrePoly":
        co = self.domain.coerce
        return OrePoly(self, [co(c) for c in coeffs])

    def from_raw(self, coeffs: Sequence) -> "OrePoly":
        return OrePoly(self, list(coeffs))

    def zero(self) -> "OrePoly":
        return OrePoly(self, [])

    def one(self) -> "OrePoly":
        return OrePoly(self, [self.domain.one])

    def x(self) -> "OrePoly":
        """The generator as a polynomial."""
        return OrePoly(self, [self.domain.zero, self.domain.one])

    def monomial(self, c, i: int) -> "OrePoly":
        return OrePoly(self, [self.domain.zero] * i + [c])

    def coerce(self, value) -> "OrePoly":
        if isinstance(value, OrePoly):
            if value.ring != self:
                raise SpecMismatchError(f"{value.ring.describe()} vs {self.describe()}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return OrePoly(self, [self.domain.coerce(value)])

    def parse(self, text: str) -> "OrePoly":
        value = evaluate(parse_expression(text), OreEnv(self))
        return self.coerce(value)

    def random(self, rng, degree: int, coeff_degree: int | None = None, **kw) -> "OrePoly":
        """Random polynomial of degree at most ``degree``; extra keywords go to the field sampler."""
        d = self.domain
        if coeff_degree is not None:
            kw["degree"] = coeff_degree
        coeffs = [d.random(rng, **kw) for _ in range(degree + 1)]
        return OrePoly(self, coeffs)

    def common_left_multiple(self, a, b):
        return common_left_multiple(a, b)


class OreEnv(Env):
    """Expression environment for elements of an :class:`OreRing`."""

    def __init__(self, ring: OreRing):
        self.ring = ring
        self.table = dict(ring.domain.symbols())
        self.table[ring.gen] = ring.x()

    def number(self, n, pos):
        return self.ring.domain(n)

    def name(self, name, pos):
        if name in self.table:
            return self.table[name]
        raise ParseError(f"unknown symbol {name!r} in {self.ring.describe()}", pos)

    def divide(self, a, b, pos):
        if isinstance(b, OrePoly):
            if b.degree() != 0:
                raise ParseError("division by a non-constant Ore polynomial; use inv() or frac()", pos)
            b = FieldElement(self.ring.domain, b.coeffs[0])
        if isinstance(a, OrePoly):
            return a * b.inverse()
        return a / b

    def power(self, a, n, pos):
        if n < 0 and isinstance(a, OrePoly):
            raise ParseError("negative powers need a series or fraction ring", pos)
        return a ** n


class OrePoly:
    """Immutable Ore polynomial sum a_i x^i with trailing zero coefficients trimmed."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: OreRing, coeffs):
        is_zero = ring.domain.is_zero
        c = list(coeffs)
        while c and is_zero(c[-1]):
            c.pop()
        self.ring = ring
        self.coeffs = tuple(c)
        self._hash = None

    # structure
    def degree(self):
        """Index of the leading coefficient; ``NEG_INF`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        """Raw leading coefficient."""
        if not self.coeffs:
            raise DomainError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int):
        """Raw coefficient of x^k."""
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.domain.zero

    def coefficient(self, k: int) -> FieldElement:
        return FieldElement(self.ring.domain, self.coeff(k))

    def _other(self, other):
        if isinstance(other, OrePoly):
            if other.ring != self.ring:
                raise SpecMismatchError(f"{other.ring.describe()} vs {self.ring.describe()}")
            return other
        try:
            return self.ring.coerce(other)
        except (SpecMismatchError, ParseError):
            return None

    # arithmetic
    def __add__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return ore_add(self, g)

    def __radd__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return ore_add(g, self)

    def __neg__(self):
        neg = self.ring.domain.neg
        return OrePoly(self.ring, [neg(c) for c in self.coeffs])

    def __sub__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return ore_add(self, -g)

    def __rsub__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return ore_add(g, -self)

    def __mul__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return ore_mul(self, g)

    def __rmul__(self, other):
        g = self._other(other)
        if g is None:
            return NotImplemented
        return ore_mul(g, self)

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative power of an Ore polynomial")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = ore_mul(result, base)
            base = ore_mul(base, base)
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, OrePoly):
            g = self._other(other)
            if g is None:
                return NotImplemented
            other = g
        if other.ring != self.ring or len(other.coeffs) != len(self.coeffs):
            return False
        eq = self.ring.domain.eq
        return all(eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        return format_ore(self)

    def __repr__(self):
        return f"OrePoly({format_ore(self)!r} in {self.ring.describe()})"

    def scale_left(self, c) -> "OrePoly":
        mul = self.ring.domain.mul
        return OrePoly(self.ring, [mul(c, a) for a in self.coeffs])

    def monic(self) -> "OrePoly":
        """Left multiple by the inverse leading coefficient; leading coefficient becomes 1."""
        if not self.coeffs:
            return self
        return self.scale_left(self.ring.domain.inv(self.lc()))


def _check_same(f: OrePoly, g: OrePoly):
    if f.ring != g.ring:
        raise SpecMismatchError(f"{f.ring.describe()} vs {g.ring.describe()}")


def ore_add(f: OrePoly, g: OrePoly) -> OrePoly:
    """Coefficientwise sum."""
    _check_same(f, g)
    add = f.ring.domain.add
    a, b = f.coeffs, g.coeffs
    if len(a) < len(b):
        out = [add(x, y) for x, y in zip(a, b)] + list(b[len(a):])
    else:
        out = [add(x, y) for x, y in zip(a, b)] + list(a[len(b):])
    return OrePoly(f.ring, out)


def ore_mul(f: OrePoly, g: OrePoly) -> OrePoly:
    """Product in the Ore ring.

    Twisted rings use the closed formula (fg)_k = sum_i a_i sigma^i(b_{k-i});
    differential rings push the generator through ``g`` one step at a time.
    """
    _check_same(f, g)
    ring = f.ring
    if not f.coeffs or not g.coeffs:
        return ring.zero()
    if ring.rule == "twisted":
        return _twisted_mul(f, g)
    if ring.rule == "central":
        return _central_mul(f, g)
    return _differential_mul(f, g)


def _twisted_mul(f, g):
    ring = f.ring
    d = ring.domain
    add, mul, zero = d.add, d.mul, d.zero
    b = g.coeffs
    out = [zero] * (len(f.coeffs) + len(b) - 1)
    table_for = getattr(d, "frob_table", None)
    for i, ai in enumerate(f.coeffs):
        if d.is_zero(ai):
            continue
        if table_for is not None:
            tab = table_for(i)
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = add(out[i + j], mul(ai, tab[bj]))
        else:
            for j, bj in enumerate(b):
                if not d.is_zero(bj):
                    out[i + j] = add(out[i + j], mul(ai, d.frob_pow(bj, i)))
    return OrePoly(ring, out)


def _central_mul(f, g):
    d = f.ring.domain
    add, mul, zero, is_zero = d.add, d.mul, d.zero, d.is_zero
    b = g.coeffs
    out = [zero] * (len(f.coeffs) + len(b) - 1)
    for i, ai in enumerate(f.coeffs):
        if is_zero(ai):
            continue
        for j, bj in enumerate(b):
            if not is_zero(bj):
                out[i + j] = add(out[i + j], mul(ai, bj))
    return OrePoly(f.ring, out)


def _push_generator(ring: OreRing, h: list) -> list:
    """Coefficients of x*h for the differential rule: x*b*x^j = b*x^(j+1) + b'*x^j."""
    d = ring.domain
    out = [d.zero] + list(h)
    for j, bj in enumerate(h):
        if not d.is_zero(bj):
            out[j] = d.add(out[j], ring.delta(bj))
    return out


def _differential_mul(f, g):
    ring = f.ring
    d = ring.domain
    add, mul, zero, is_zero = d.add, d.mul, d.zero, d.is_zero
    out = [zero] * (len(f.coeffs) + len(g.coeffs) - 1)
    h = list(g.coeffs)
    for i, ai in enumerate(f.coeffs):
        if i:
            h = _push_generator(ring, h)
        if is_zero(ai):
            continue
        for j, hj in enumerate(h):
            if not is_zero(hj):
                out[j] = add(out[j], mul(ai, hj))
    return OrePoly(ring, out)


def right_divmod(a: OrePoly, b: OrePoly) -> tuple[OrePoly, OrePoly]:
    """Return (q, r) with a = q*b + r and deg r < deg b."""
    _check_same(a, b)
    if b.is_zero():
        raise DomainError("division by the zero polynomial")
    ring = a.ring
    d = ring.domain
    m = b.degree()
    lead_b = b.lc()
    qc = {}
    r = a
    while not r.is_zero() and r.degree() >= m:
        k = r.degree() - m
        c = d.mul(r.lc(), d.inv(ring.sigma_pow(lead_b, k)))
        qc[k] = c
        r = r - ore_mul(ring.monomial(c, k), b)
    q = OrePoly(ring, [qc.get(i, d.zero) for i in range(max(qc) + 1)] if qc else [])
    return q, r


def left_divmod(a: OrePoly, b: OrePoly) -> tuple[OrePoly, OrePoly]:
    """Return (q, r) with a = b*q + r and deg r < deg b.

    In twisted rings this needs q-th roots of coefficients, so the field must
    be perfect.
    """
    _check_same(a, b)
    if b.is_zero():
        raise DomainError("division by the zero polynomial")
    ring = a.ring
    d = ring.domain
    if ring.rule == "twisted" and not d.is_perfect:
        raise NotPerfectError(f"left division in {ring.describe()} needs a perfect field")
    m = b.degree()
    inv_lead = d.inv(b.lc())
    qc = {}
    r = a
    while not r.is_zero() and r.degree() >= m:
        k = r.degree() - m
        c = ring.sigma_pow(d.mul(inv_lead, r.lc()), -m)
        qc[k] = c
        r = r - ore_mul(b, ring.monomial(c, k))
    q = OrePoly(ring, [qc.get(i, d.zero) for i in range(max(qc) + 1)] if qc else [])
    return q, r


def right_gcd(a: OrePoly, b: OrePoly) -> OrePoly:
    """Monic greatest common right divisor by the right-division Euclidean chain."""
    _check_same(a, b)
    if a.is_zero() and b.is_zero():
        raise DomainError("gcd of two zero polynomials")
    while not b.is_zero():
        a, b = b, right_divmod(a, b)[1]
    return a.monic()


def left_gcd(a: OrePoly, b: OrePoly) -> OrePoly:
    """Greatest common left divisor g (a = g*a', b = g*b'), normalized to leading coefficient 1."""
    _check_same(a, b)
    if a.is_zero() and b.is_zero():
        raise DomainError("gcd of two zero polynomials")
    while not b.is_zero():
        a, b = b, left_divmod(a, b)[1]
    return right_monic(a)


def right_monic(g: OrePoly) -> OrePoly:
    """Right multiple g*c with leading coefficient 1 (needs sigma^-deg in twisted rings)."""
    ring = g.ring
    d = ring.domain
    c = ring.sigma_pow(d.inv(g.lc()), -g.degree())
    return ore_mul(g, ring.monomial(c, 0))


@dataclass
class OrePair:
    """Result of a common-left-multiple search: c*a = d*b."""

    c: object
    d: object
    bounds_tried: list = dc_field(default_factory=list)
    unknowns: int = 0
    equations: int = 0


def ore_pair_search(a: OrePoly, b: OrePoly, max_extra: int = 8) -> OrePair:
    """Search for nonzero (c, d) with c*a = d*b by solving linear systems.

    The unknown coefficients of c and d are bounded by a degree bound that
    starts at deg a + deg b on the product (twisted and central rules) or at
    N = n = max(deg a, deg b) on c and d (differential rule), and grows by 1
    until the system has a nonzero solution.
    """
    _check_same(a, b)
    if a.is_zero() or b.is_zero():
        raise DomainError("common left multiples need nonzero operands")
    ring = a.ring
    if not ring.commutative_coefficients:
        raise RingSpecError("linear-system Ore pairs need a commutative coefficient field")
    d = ring.domain
    da, db = a.degree(), b.degree()
    tried = []
    for extra in range(max_extra + 1):
        if ring.rule == "differential":
            n_c = n_d = max(da, db) + extra
            bound = n_c
        else:
            bound = da + db + extra
            n_c, n_d = bound - da, bound - db
        tried.append(bound)
        cols, labels = [], []
        xa, xb = a, -b
        gen = ring.x()
        c_cols, d_cols = [], []
        for i in range(n_c + 1):
            c_cols.append(xa)
            xa = ore_mul(gen, xa)
        for j in range(n_d + 1):
            d_cols.append(xb)
            xb = ore_mul(gen, xb)
        for i in range(max(n_c, n_d) + 1):
            if i <= n_c:
                cols.append({k: v for k, v in enumerate(c_cols[i].coeffs) if not d.is_zero(v)})
                labels.append(("c", i))
            if i <= n_d:
                cols.append({k: v for k, v in enumerate(d_cols[i].coeffs) if not d.is_zero(v)})
                labels.append(("d", i))
        equations = max(n_c + da, n_d + db) + 1
        vec = first_dependency(d, cols)
        if vec is None:
            continue
        cc = [d.zero] * (n_c + 1)
        dd = [d.zero] * (n_d + 1)
        for j, v in vec.items():
            side, i = labels[j]
            (cc if side == "c" else dd)[i] = v
        c = OrePoly(ring, cc)
        dpoly = OrePoly(ring, dd)
        if c.is_zero() or dpoly.is_zero() or ore_mul(c, a) != ore_mul(dpoly, b):
            raise AssertionError("Ore pair verification failed")  # pragma: no cover
        return OrePair(c, dpoly, tried, len(cols), equations)
    raise DomainError("no common left multiple found within the search bound")  # pragma: no cover


def common_left_multiple(a: OrePoly, b: OrePoly) -> tuple[OrePoly, OrePoly]:
    """Nonzero (c, d) with c*a = d*b, verified by multiplication."""
    pair = ore_pair_search(a, b)
    return pair.c, pair.d


def format_coefficient_term(domain, c, mono: str) -> str:
    """Print ``c*mono`` with the parenthesization rules used for all rings."""
    s = domain.to_str(c)
    if not mono:
        return s
    neg = False
    if s.startswith("-") and not domain.needs_parens(c):
        neg, s = True, s[1:]
    if s == "1":
        body = mono
    elif domain.needs_parens(c) or "/" in s:
        body = f"({s})*{mono}"
    else:
        body = f"{s}*{mono}"
    return ("-" if neg else "") + body


def join_terms(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def format_ore(f: OrePoly) -> str:
    """Descending-degree text such as ``(b+1)*t^2 + b*t + 1``."""
    ring = f.ring
    d = ring.domain
    terms = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if d.is_zero(c):
            continue
        mono = "" if i == 0 else (ring.gen if i == 1 else f"{ring.gen}^{i}")
        terms.append(format_coefficient_term(d, c, mono))
    return join_terms(terms)
