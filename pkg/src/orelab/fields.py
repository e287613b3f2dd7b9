"""Exact coefficient fields: F_p, F_{p^k}, the rationals and rational function fields.

Every field object works on *raw* values (ints for finite fields, ``Fraction``
for the rationals, :class:`RatFunc` for rational functions) through methods such
as :meth:`Field.add` and :meth:`Field.mul`. Raw values keep the inner loops of
the Ore and series code cheap. :class:`FieldElement` wraps a raw value together
with its field and gives the usual operators for interactive use.

Finite fields of order ``p^k`` store an element as the integer whose base-``p``
digits are the coefficients of its residue polynomial, so the generator ``b``
(the class of ``x`` modulo the user's modulus) is the integer ``p``.
"""
from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import flint

from .errors import CapError, DomainError, NotPerfectError, ParseError, RingSpecError, SpecMismatchError
from .parsing import Env, evaluate, parse_expression, split_top_level

MAX_FIELD_SIZE = 1 << 16
MAX_RATFUNC_DEGREE = 64


class Field:
    """Common interface of all coefficient fields."""

    kind = "abstract"
    characteristic = 0
    q: int | None = None
    is_finite = False
    is_perfect = False
    canonical = True
    nvars = 0
    zero = None
    one = None

    def __call__(self, value=0) -> "FieldElement":
        return FieldElement(self, self.coerce(value))

    def elem(self, raw) -> "FieldElement":
        return FieldElement(self, raw)

    def coerce(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise SpecMismatchError(f"element of {value.field} used in {self}")
            return value.raw
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, str):
            return self.parse(value)
        return self._coerce_other(value)

    def _coerce_other(self, value):
        raise SpecMismatchError(f"cannot interpret {value!r} in {self}")

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def eq(self, a, b) -> bool:
        return a == b

    def pow(self, a, n: int):
        if n < 0:
            a = self.inv(a)
            n = -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def frob(self, a):
        raise RingSpecError(f"{self} has no Frobenius power q")

    def frob_pow(self, a, i: int):
        if i < 0:
            for _ in range(-i):
                a = self.inv_frob(a)
            return a
        for _ in range(i):
            a = self.frob(a)
        return a

    def inv_frob(self, a):
        raise NotPerfectError(f"{self} is not perfect: q-th roots are unavailable")

    def partial(self, a, i: int):
        raise RingSpecError(f"{self} carries no derivations")

    def from_int(self, n: int):
        raise NotImplementedError

    def to_str(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        node = parse_expression(text)
        value = evaluate(node, _FieldEnv(self))
        return self.coerce(value)

    def symbols(self) -> dict:
        return {}

    def needs_parens(self, a) -> bool:
        """True if the printed form of ``a`` is compound (contains a top-level + or -)."""
        s = self.to_str(a)
        depth = 0
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch in "+-" and depth == 0 and i > 0:
                return True
        return False

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Field({self.describe()!r})"

    def __str__(self):
        return self.describe()

    def describe(self) -> str:
        raise NotImplementedError


class _FieldEnv(Env):
    def __init__(self, field: Field):
        self.field = field
        self.table = field.symbols()

    def number(self, n, pos):
        return self.field(n)

    def name(self, name, pos):
        if name in self.table:
            return self.table[name]
        raise ParseError(f"unknown symbol {name!r} in {self.field}", pos)


class FieldElement:
    """A value of a coefficient field with the usual arithmetic operators."""

    __slots__ = ("field", "raw")

    def __init__(self, field: Field, raw):
        self.field = field
        self.raw = raw

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise SpecMismatchError(f"{other.field} vs {self.field}")
            return other.raw
        try:
            return self.field.coerce(other)
        except SpecMismatchError:
            return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.raw, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(o, self.raw))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.raw, n))

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.field.eq(self.raw, o)

    def __hash__(self):
        return hash((self.field, self.raw))

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.raw))

    def frobenius(self) -> "FieldElement":
        return frobenius(self)

    def inv_frobenius(self) -> "FieldElement":
        return inv_frobenius(self)

    def derive(self, var_index: int) -> "FieldElement":
        return derive(self, var_index)

    def __str__(self):
        return self.field.to_str(self.raw)

    def __repr__(self):
        return f"FieldElement({self.field.to_str(self.raw)!r} in {self.field.describe()})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_power(n: int, p: int) -> int | None:
    """Return e with p^e = n, or None."""
    if n < 1:
        return None
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e if n == 1 and e >= 1 else None


class PrimeField(Field):
    """The prime field F_p; raw values are ints in ``range(p)``."""

    kind = "prime"
    is_finite = True
    is_perfect = True

    def __init__(self, p: int, q: int | None = None):
        if not _is_prime(p):
            raise RingSpecError(f"{p} is not prime")
        if q is None:
            q = p
        if _prime_power(q, p) is None:
            raise RingSpecError(f"q={q} is not a power of p={p}")
        self.p = self.characteristic = p
        self.q = q
        self.size = p
        self.degree = 1
        self.zero, self.one = 0, 1

    def _key(self):
        return ("prime", self.p, self.q)

    def describe(self):
        return f"GF({self.p})" if self.q == self.p else f"GF({self.p}; q={self.q})"

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise DomainError("division by zero")
        return pow(a, -1, self.p)

    def frob(self, a):
        return a

    def frob_pow(self, a, i):
        return a

    def inv_frob(self, a):
        return a

    def to_str(self, a):
        return str(a)

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def index(self, a) -> int:
        return a

    def from_index(self, j: int):
        return j

    def subfield_elements(self) -> list[int]:
        return list(range(self.p))

    def in_subfield(self, a) -> bool:
        return True

    def digits(self, a) -> list[int]:
        return [a]

    def from_digits(self, ds) -> int:
        return ds[0] % self.p

    def random(self, rng):
        return rng.randrange(self.p)


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _poly_trim(a[:dm] if len(a) > dm else a)


def is_irreducible(m: Sequence[int], p: int) -> bool:
    """Trial factorization of ``m`` (coefficients low to high) over F_p."""
    m = _poly_trim([c % p for c in m])
    k = len(m) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            cand = list(tail) + [1]
            if not _poly_mod(m, cand, p):
                return False
    return True


def find_irreducible(p: int, k: int) -> list[int]:
    """Lexicographically first monic irreducible polynomial of degree ``k`` over F_p."""
    for tail in itertools.product(range(p), repeat=k):
        cand = list(reversed(tail)) + [1]
        if cand[0] and is_irreducible(cand, p):
            return cand
    raise RingSpecError(f"no irreducible polynomial of degree {k} over F_{p}")


def _poly_to_str(c: Sequence[int], var: str) -> str:
    terms = []
    for i in range(len(c) - 1, -1, -1):
        a = c[i]
        if not a:
            continue
        if i == 0:
            terms.append(str(a))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if a == 1 else f"{a}*{mono}")
    return "+".join(terms) if terms else "0"


class ExtensionField(Field):
    """F_{p^k} given by an irreducible modulus, with Frobenius a -> a^q.

    Multiplication, inversion and Frobenius use log/antilog tables; addition
    is XOR in characteristic 2 and a Zech-logarithm lookup otherwise.
    """

    kind = "finite-ext"
    is_finite = True
    is_perfect = True

    def __init__(self, p: int, modulus: Sequence[int], q: int | None = None, alpha=None):
        if not _is_prime(p):
            raise RingSpecError(f"{p} is not prime")
        m = _poly_trim([c % p for c in modulus])
        k = len(m) - 1
        if k < 2:
            raise RingSpecError("modulus must have degree at least 2 (use GF(p) for prime fields)")
        if p ** k > MAX_FIELD_SIZE:
            raise CapError(f"field size {p}^{k} exceeds the cap {MAX_FIELD_SIZE}")
        if not is_irreducible(m, p):
            raise RingSpecError(f"modulus {_poly_to_str(m, 'x')} is reducible over F_{p}")
        inv_lead = pow(m[-1], -1, p)
        m = [c * inv_lead % p for c in m]
        if q is None:
            q = p
        e = _prime_power(q, p)
        if e is None:
            raise RingSpecError(f"q={q} is not a power of p={p}")
        if k % e:
            raise RingSpecError(f"F_{q} is not a subfield of F_{p}^{k}")
        self.p = self.characteristic = p
        self.modulus = m
        self.degree = k
        self.q = q
        self.e = e
        self.n = k // e
        self.size = Q = p ** k
        self.zero, self.one = 0, 1
        self.gen = p
        self._build_tables()
        self.alpha = self.gen if alpha is None else self.coerce(alpha)
        self._build_subfield()

    def digits(self, a: int) -> list[int]:
        """Coefficients over F_p of the residue polynomial, low degree first."""
        return self._digits(a)

    def from_digits(self, ds) -> int:
        return self._undigits([c % self.p for c in ds])

    # construction helpers
    def _digits(self, a: int) -> list[int]:
        d = []
        for _ in range(self.degree):
            d.append(a % self.p)
            a //= self.p
        return d

    def _undigits(self, d: Sequence[int]) -> int:
        a = 0
        for c in reversed(d):
            a = a * self.p + c
        return a

    def _slow_mul(self, a: int, b: int) -> int:
        p = self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        r = _poly_mod(prod, self.modulus, p)
        return self._undigits(r + [0] * (self.degree - len(r)))

    def _build_tables(self):
        Q = self.size
        order = Q - 1
        for g in range(2, Q):
            exp = [1]
            x = 1
            for _ in range(order - 1):
                x = self._slow_mul(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == order:
                break
        else:  # pragma: no cover - a finite field always has a primitive element
            raise RingSpecError("no primitive element found")
        self.primitive = g
        log = [0] * Q
        for i, x in enumerate(exp):
            log[x] = i
        self._exp = exp + exp
        self._log = log
        p = self.p
        if p != 2:
            zech = [0] * order
            for i in range(order):
                x = exp[i]
                y = x - (p - 1) if x % p == p - 1 else x + 1
                zech[i] = -1 if y == 0 else log[y]
            self._zech = zech
            self._half = order // 2
        self._frob_tables = []
        t = list(range(Q))
        for _ in range(self.n):
            self._frob_tables.append(t)
            t = self._apply_frob(t)
        self._frob = self._frob_tables[1] if self.n > 1 else self._frob_tables[0]
        self._inv_frob = self._frob_tables[-1] if self.n > 1 else self._frob_tables[0]

    def _apply_frob(self, table):
        exp, log, order, q = self._exp, self._log, self.size - 1, self.q
        return [0 if a == 0 else exp[(log[a] * q) % order] for a in table]

    def _build_subfield(self):
        self._subfield = [a for a in range(self.size) if self._frob[a] == a]
        # generator of F_q over F_p: an element with exactly e conjugates under x -> x^p
        beta = None
        for a in self._subfield:
            conj = {a}
            x = a
            for _ in range(self.e):
                x = self.pow(x, self.p)
                conj.add(x)
            if len(conj) == self.e:
                beta = a
                break
        self.beta = beta
        # alpha must generate F_{q^n} over F_q: its conjugates under sigma number n
        x, conj = self.alpha, set()
        for _ in range(self.n):
            conj.add(x)
            x = self._frob[x]
        if len(conj) != self.n:
            raise RingSpecError("designated alpha does not generate the field over F_q")
        self._alpha_pows = [self.pow(self.alpha, i) for i in range(self.n + 1)]
        self._expansion = {}
        for coeffs in itertools.product(self._subfield, repeat=self.n):
            v = 0
            for c, ap in zip(coeffs, self._alpha_pows):
                v = self.add(v, self.mul(c, ap))
            self._expansion[v] = coeffs
        if len(self._expansion) != self.size:
            raise RingSpecError("alpha powers are not a basis over F_q")

    def _key(self):
        return ("ext", self.p, tuple(self.modulus), self.q, self.alpha)

    def describe(self):
        return f"GF({self.p}^{self.degree}; {_poly_to_str(self.modulus, 'x')}; q={self.q})"

    # arithmetic on raw ints
    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        log = self._log
        la = log[a]
        z = self._zech[(log[b] - la) % (self.size - 1)]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a):
        if self.p == 2 or a == 0:
            return a
        return self._exp[self._log[a] + self._half]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise DomainError("division by zero")
        return self._exp[(self.size - 1 - self._log[a]) % (self.size - 1)]

    def div(self, a, b):
        if b == 0:
            raise DomainError("division by zero")
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % (self.size - 1)]

    def pow(self, a, n):
        if a == 0:
            if n < 0:
                raise DomainError("division by zero")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.size - 1)]

    def frob(self, a):
        return self._frob[a]

    def frob_pow(self, a, i):
        return self._frob_tables[i % self.n][a]

    def frob_table(self, i: int) -> list[int]:
        """Lookup table of a -> a^(q^i); ``i`` may be negative."""
        return self._frob_tables[i % self.n]

    def inv_frob(self, a):
        return self._inv_frob[a]

    # enumeration, printing, bases
    def elements(self) -> Iterator[int]:
        return iter(range(self.size))

    def index(self, a) -> int:
        return a

    def from_index(self, j: int):
        return j

    def subfield_elements(self) -> list[int]:
        """Elements of F_q, i.e. the fixed points of Frobenius, in index order."""
        return list(self._subfield)

    def in_subfield(self, a) -> bool:
        return self._frob[a] == a

    def alpha_expand(self, a) -> tuple:
        """Coefficients (c_0, ..., c_{n-1}) in F_q with a = sum c_i alpha^i."""
        return self._expansion[a]

    def alpha_power(self, i: int):
        return self._alpha_pows[i] if 0 <= i <= self.n else self.pow(self.alpha, i)

    def symbols(self):
        return {"b": FieldElement(self, self.gen)}

    def to_str(self, a):
        return _poly_to_str(self._digits(a), "b")

    def random(self, rng):
        return rng.randrange(self.size)


class RationalField(Field):
    """The field of rational numbers with exact ``Fraction`` values."""

    kind = "rational"
    characteristic = 0

    def __init__(self):
        self.zero, self.one = Fraction(0), Fraction(1)

    def _key(self):
        return ("QQ",)

    def describe(self):
        return "QQ"

    def from_int(self, n):
        return Fraction(n)

    def _coerce_other(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, flint.fmpq):
            return Fraction(int(value.p), int(value.q))
        return super()._coerce_other(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DomainError("division by zero")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise DomainError("division by zero")
        return a / b

    def frob(self, a):
        raise RingSpecError("QQ has characteristic 0: no Frobenius")

    def inv_frob(self, a):
        raise RingSpecError("QQ has characteristic 0: no Frobenius")

    def to_str(self, a):
        return str(a)

    def random(self, rng, height: int = 5):
        den = rng.randint(1, height)
        return Fraction(rng.randint(-height, height), den)


QQ = RationalField()


def _poly_key(poly) -> tuple:
    items = []
    for k, v in poly.to_dict().items():
        items.append((k, (int(v.p), int(v.q)) if isinstance(v, flint.fmpq) else int(v)))
    return tuple(sorted(items))


class RatFunc:
    """Reduced fraction num/den of flint polynomials with a monic denominator.

    Instances are created through :class:`RationalFunctionField`, which keeps
    them canonical, so structural equality is value equality.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den):
        self.num = num
        self.den = den
        self._hash = None

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((_poly_key(self.num), _poly_key(self.den)))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self.num}, {self.den})"


class RationalFunctionField(Field):
    """Rational functions in named variables over F_p or QQ.

    Values stay in lowest terms with a denominator whose lex-leading
    coefficient is 1. Total degrees above ``max_degree`` raise :class:`CapError`.
    """

    kind = "rational-func"

    def __init__(self, base: Field, names: Sequence[str], max_degree: int = MAX_RATFUNC_DEGREE):
        names = tuple(names)
        if not names:
            raise RingSpecError("a rational function field needs at least one variable")
        if len(set(names)) != len(names):
            raise RingSpecError("variable names must be distinct")
        for nm in names:
            if nm in ("b", "t", "O") or re.fullmatch(r"d\d*", nm) or not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", nm):
                raise RingSpecError(f"reserved or invalid variable name {nm!r}")
        if isinstance(base, PrimeField):
            self._ctx = flint.nmod_mpoly_ctx.get(names, modulus=base.p)
            self.characteristic = base.p
            self.q = base.q
        elif isinstance(base, RationalField):
            self._ctx = flint.fmpq_mpoly_ctx.get(names)
            self.characteristic = 0
            self.q = None
        else:
            raise RingSpecError("rational function fields are built over GF(p) or QQ")
        self.base = base
        self.names = names
        self.nvars = len(names)
        self.max_degree = max_degree
        self._pzero = self._ctx.from_dict({})
        self._pone = self._ctx.from_dict({(0,) * self.nvars: 1})
        self.zero = RatFunc(self._pzero, self._pone)
        self.one = RatFunc(self._pone, self._pone)
        self._gens = [RatFunc(g, self._pone) for g in self._ctx.gens()]

    def _key(self):
        return ("ratfunc", self.base._key(), self.names, self.max_degree)

    def describe(self):
        return f"{self.base.describe()}({','.join(self.names)})"

    # construction
    def const_poly(self, c):
        c = self.base.coerce(c)
        if self.characteristic:
            return self._ctx.from_dict({(0,) * self.nvars: c}) if c else self._pzero
        return self._ctx.from_dict({(0,) * self.nvars: flint.fmpq(c.numerator, c.denominator)}) if c else self._pzero

    def from_int(self, n):
        return RatFunc(self.const_poly(n), self._pone)

    def _coerce_other(self, value):
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, Fraction) and not self.characteristic:
            return RatFunc(self.const_poly(value), self._pone)
        if isinstance(value, FieldElement) and value.field == self.base:
            return RatFunc(self.const_poly(value.raw), self._pone)
        return super()._coerce_other(value)

    def gen(self, i: int):
        """Raw value of the i-th variable (0-based)."""
        return self._gens[i]

    def from_polys(self, num, den=None):
        """Build a canonical value from flint polynomials num/den."""
        if den is None:
            return self._check(RatFunc(num, self._pone))
        return self._reduce(num, den)

    def from_dicts(self, num: dict, den: dict | None = None):
        """Build a value from ``{exponent tuple: base coefficient}`` dictionaries."""
        return self.from_polys(self._poly_from_dict(num), None if den is None else self._poly_from_dict(den))

    def _poly_from_dict(self, d: dict):
        if self.characteristic:
            return self._ctx.from_dict({k: int(v) % self.characteristic for k, v in d.items() if int(v) % self.characteristic})
        return self._ctx.from_dict({k: flint.fmpq(Fraction(v).numerator, Fraction(v).denominator)
                                    for k, v in d.items() if v})

    def _check(self, r: RatFunc) -> RatFunc:
        md = self.max_degree
        if r.num.total_degree() > md or r.den.total_degree() > md:
            raise CapError(f"rational function degree exceeds the cap {md}")
        return r

    def _monic_scale(self, lc):
        if self.characteristic:
            return pow(int(lc), -1, self.characteristic)
        return 1 / lc

    def _reduce(self, num, den) -> RatFunc:
        if den.is_zero():
            raise DomainError("division by zero")
        if num.is_zero():
            return self.zero
        if not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                s = self._monic_scale(lc)
                num = num * s
                den = den * s
        return self._check(RatFunc(num, den))

    # arithmetic
    def add(self, a, b):
        if a.den.is_one() and b.den.is_one():
            return self._check(RatFunc(a.num + b.num, self._pone))
        if a.den == b.den:
            return self._reduce(a.num + b.num, a.den)
        return self._reduce(a.num * b.den + b.num * a.den, a.den * b.den)

    def neg(self, a):
        return RatFunc(-a.num, a.den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a.den.is_one() and b.den.is_one():
            return self._check(RatFunc(a.num * b.num, self._pone))
        return self._reduce(a.num * b.num, a.den * b.den)

    def inv(self, a):
        if a.num.is_zero():
            raise DomainError("division by zero")
        return self._reduce(a.den, a.num)

    def div(self, a, b):
        if b.num.is_zero():
            raise DomainError("division by zero")
        return self._reduce(a.num * b.den, a.den * b.num)

    def is_zero(self, a):
        return a.num.is_zero()

    def frob(self, a):
        if not self.characteristic:
            raise RingSpecError(f"{self} has characteristic 0: no Frobenius")
        e = [self.q] * self.nvars
        num = a.num.inflate(e)
        den = a.den if a.den.is_one() else a.den.inflate(e)
        return self._check(RatFunc(num, den))

    def frob_pow(self, a, i):
        if i < 0:
            raise NotPerfectError(f"{self} is not perfect: q-th roots are unavailable")
        if i == 0:
            return a
        if not self.characteristic:
            raise RingSpecError(f"{self} has characteristic 0: no Frobenius")
        e = [self.q ** i] * self.nvars
        num = a.num.inflate(e)
        den = a.den if a.den.is_one() else a.den.inflate(e)
        return self._check(RatFunc(num, den))

    def inv_frob(self, a):
        raise NotPerfectError(f"{self} is not perfect: q-th roots are unavailable")

    def partial(self, a, i):
        if not 0 <= i < self.nvars:
            raise RingSpecError(f"variable index {i + 1} out of range for {self}")
        dn = a.num.derivative(i)
        if a.den.is_one():
            return self._check(RatFunc(dn, self._pone))
        dd = a.den.derivative(i)
        return self._reduce(dn * a.den - a.num * dd, a.den * a.den)

    def is_constant_wrt(self, a, indices: Iterable[int]) -> bool:
        return all(self.is_zero(self.partial(a, i)) for i in indices)

    def total_degree(self, a) -> int:
        return max(a.num.total_degree(), a.den.total_degree())

    # printing and parsing
    def symbols(self):
        return {nm: FieldElement(self, g) for nm, g in zip(self.names, self._gens)}

    def _coeff_str(self, c) -> str:
        if self.characteristic:
            return str(int(c))
        return str(Fraction(int(c.p), int(c.q)))

    def poly_str(self, poly) -> str:
        terms = []
        items = sorted(poly.to_dict().items(), key=lambda kv: kv[0], reverse=True)
        for exps, c in items:
            mono = "*".join(nm if e == 1 else f"{nm}^{e}" for nm, e in zip(self.names, exps) if e)
            cs = self._coeff_str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            terms.append(("-" if neg else "+", body))
        if not terms:
            return "0"
        out = "".join(sign + body for sign, body in terms)
        return out[1:] if out.startswith("+") else out

    def to_str(self, a):
        ns = self.poly_str(a.num)
        if a.den.is_one():
            return ns
        ds = self.poly_str(a.den)
        if len(a.num.to_dict()) > 1:
            ns = f"({ns})"
        if len(a.den.to_dict()) > 1 or "*" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def random(self, rng, degree: int = 2, terms: int = 3, den_degree: int = 0, height: int = 3):
        """Random value with numerator of total degree <= ``degree``."""
        num = self._random_poly(rng, degree, terms, height)
        if den_degree <= 0:
            return self.from_polys(num)
        den = self._random_poly(rng, den_degree, terms, height)
        if den.is_zero():
            den = self._pone
        return self._reduce(num, den)

    def _random_poly(self, rng, degree, terms, height):
        d = {}
        for _ in range(terms):
            exps = [0] * self.nvars
            budget = rng.randint(0, degree)
            for _ in range(budget):
                exps[rng.randrange(self.nvars)] += 1
            if self.characteristic:
                c = rng.randrange(self.characteristic)
            else:
                c = Fraction(rng.randint(-height, height), rng.randint(1, height))
            d[tuple(exps)] = c
        return self._poly_from_dict(d)


# public operations on FieldElement values

def frobenius(a: FieldElement) -> FieldElement:
    """Return a^q."""
    return FieldElement(a.field, a.field.frob(a.raw))


def inv_frobenius(a: FieldElement) -> FieldElement:
    """Return the unique b with b^q = a (perfect fields only)."""
    return FieldElement(a.field, a.field.inv_frob(a.raw))


def derive(a: FieldElement, var_index: int) -> FieldElement:
    """Formal partial derivative with respect to the variable numbered ``var_index`` (from 1)."""
    f = a.field
    if f.nvars == 0:
        raise RingSpecError(f"{f} has no variables")
    if not 1 <= var_index <= f.nvars:
        raise RingSpecError(f"variable index {var_index} out of range 1..{f.nvars}")
    return FieldElement(f, f.partial(a.raw, var_index - 1))


# field grammar

class _ModulusEnv(Env):
    """Evaluates a modulus polynomial in x over F_p to a coefficient list."""

    def __init__(self, p):
        self.p = p

    def number(self, n, pos):
        return _ModPoly([n % self.p], self.p)

    def name(self, name, pos):
        if name != "x":
            raise ParseError(f"modulus must be a polynomial in x, found {name!r}", pos)
        return _ModPoly([0, 1], self.p)

    def divide(self, a, b, pos):
        raise ParseError("division not allowed in a modulus", pos)


class _ModPoly:
    __slots__ = ("c", "p")

    def __init__(self, c, p):
        self.c = _poly_trim(list(c))
        self.p = p

    def __add__(self, o):
        n = max(len(self.c), len(o.c))
        a = self.c + [0] * (n - len(self.c))
        b = o.c + [0] * (n - len(o.c))
        return _ModPoly([(x + y) % self.p for x, y in zip(a, b)], self.p)

    def __neg__(self):
        return _ModPoly([-x % self.p for x in self.c], self.p)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        r = [0] * (len(self.c) + len(o.c))
        for i, x in enumerate(self.c):
            for j, y in enumerate(o.c):
                r[i + j] = (r[i + j] + x * y) % self.p
        return _ModPoly(r, self.p)

    def __pow__(self, n):
        if n < 0:
            raise ParseError("negative power in a modulus")
        r = _ModPoly([1], self.p)
        for _ in range(n):
            r = r * self
        return r


def _parse_int(text: str, what: str) -> int:
    text = text.strip()
    m = re.fullmatch(r"(\d+)(?:\s*\^\s*(\d+))?", text)
    if not m:
        raise ParseError(f"malformed {what} {text!r}")
    v = int(m.group(1))
    return v ** int(m.group(2)) if m.group(2) else v


def _matching_open(text: str, close: int) -> int:
    depth = 0
    for i in range(close, -1, -1):
        if text[i] == ")":
            depth += 1
        elif text[i] == "(":
            depth -= 1
            if depth == 0:
                return i
    raise ParseError("unbalanced parentheses in field", close, text)


def field_make(spec_text: str) -> Field:
    """Parse a field description such as ``GF(4; x^2+x+1; q=2)`` or ``QQ(x1,x2)``."""
    text = spec_text.strip()
    if text == "QQ":
        return QQ
    if text.endswith(")"):
        start = _matching_open(text, len(text) - 1)
        prefix = text[:start].strip()
        inner = text[start + 1:-1]
        if prefix == "GF":
            return _make_gf(inner)
        if prefix:
            base = field_make(prefix)
            names = [v.strip() for v in inner.split(",")]
            if any(not v for v in names):
                raise ParseError(f"malformed variable list in {spec_text!r}")
            return RationalFunctionField(base, names)
    raise ParseError(f"malformed field description {spec_text!r}")


def _make_gf(inner: str) -> Field:
    parts = [s.strip() for s in split_top_level(inner, ";")]
    size_text = parts[0]
    modulus = None
    q = None
    for part in parts[1:]:
        if part.startswith("q"):
            m = re.fullmatch(r"q\s*=\s*(.+)", part)
            if not m:
                raise ParseError(f"malformed q setting {part!r}")
            q = _parse_int(m.group(1), "q")
        elif part:
            modulus = part
    order = _parse_int(size_text, "field order")
    p = None
    for cand in range(2, order + 1):
        if order % cand == 0:
            p = cand
            break
    if p is None or _prime_power(order, p) is None or not _is_prime(p):
        raise RingSpecError(f"{order} is not a prime power")
    k = _prime_power(order, p)
    if k == 1:
        if modulus is not None:
            raise RingSpecError("a modulus is only meaningful for k >= 2")
        return PrimeField(p, q)
    if modulus is None:
        raise RingSpecError(f"GF({order}) needs an explicit irreducible modulus in x")
    poly = evaluate(parse_expression(modulus), _ModulusEnv(p))
    if isinstance(poly, _ModPoly):
        coeffs = poly.c
    else:  # pragma: no cover
        raise ParseError("malformed modulus")
    if len(coeffs) - 1 != k:
        raise RingSpecError(f"modulus degree {len(coeffs) - 1} does not match GF({p}^{k})")
    return ExtensionField(p, coeffs, q)


def finite_field(p: int, k: int = 1, q: int | None = None) -> Field:
    """Convenience constructor using the lexicographically first irreducible modulus."""
    if k == 1:
        return PrimeField(p, q)
    return ExtensionField(p, find_irreducible(p, k), q)
