"""Prime-power codes for twisted polynomials over finite fields.

J(a_0 + a_1 t + ... + a_d t^d) = 2^j(a_0) * 3^j(a_1) * ... * p_{d+1}^j(a_d)

where j enumerates the field by raw index (residue polynomials in
lexicographic order, so j(0) = 0 and j(1) = 1). Fractions are coded as the
pair of codes of their canonical denominator and numerator. The code-level
operations :func:`code_add` and :func:`code_mul` act on exponents only.
"""
from __future__ import annotations

from .errors import CapError, DomainError, RingSpecError
from .ore import OrePoly, OreRing, ore_mul
from .orefrac import OreFraction, frac_canonical

MAX_DEGREE = 32


def _first_primes(count: int) -> tuple[int, ...]:
    out, n = [], 2
    while len(out) < count:
        if all(n % p for p in out if p * p <= n):
            out.append(n)
        n += 1
    return tuple(out)


PRIMES = _first_primes(MAX_DEGREE + 1)


def _check_ring(ring: OreRing):
    if not getattr(ring.domain, "is_finite", False):
        raise RingSpecError(f"codes need a finite coefficient field, not {ring.domain}")


def encode_poly(f: OrePoly) -> int:
    """The code prod p_{i+1}^j(a_i); the zero polynomial codes to 1."""
    _check_ring(f.ring)
    if f.degree() > MAX_DEGREE:
        raise CapError(f"degree {f.degree()} exceeds the code cap {MAX_DEGREE}")
    F = f.ring.domain
    code = 1
    for p, a in zip(PRIMES, f.coeffs):
        j = F.index(a)
        if j:
            code *= p ** j
    return code


def code_exponents(code: int) -> list[int]:
    """rho(i, code) for i = 0..l(code); raises when a prime beyond the table divides code."""
    if not isinstance(code, int) or code < 1:
        raise DomainError(f"codes are positive integers, got {code!r}")
    exps = []
    n = code
    for p in PRIMES:
        if n == 1:
            break
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        exps.append(e)
    if n != 1:
        raise DomainError(f"{code} has a prime factor beyond p_{MAX_DEGREE + 1}")
    while exps and exps[-1] == 0:
        exps.pop()
    return exps


def is_code(code: int, ring: OreRing) -> bool:
    """Recognizer: every exponent lies in j(L)."""
    try:
        exps = code_exponents(code)
    except DomainError:
        return False
    size = ring.domain.size
    return all(e < size for e in exps)


def decode_poly(code: int, ring: OreRing) -> OrePoly:
    """Inverse of :func:`encode_poly`; rejects integers outside the code set."""
    _check_ring(ring)
    exps = code_exponents(code)
    F = ring.domain
    for i, e in enumerate(exps):
        if e >= F.size:
            raise DomainError(f"exponent {e} of p_{i + 1} in {code} is not the index of a field element")
    return OrePoly(ring, [F.from_index(e) for e in exps])


def code_degree(code: int):
    """Degree of the decoded polynomial, via the largest prime factor."""
    exps = code_exponents(code)
    return len(exps) - 1 if exps else float("-inf")


def code_coefficient(code: int, k: int, ring: OreRing):
    """Raw coefficient of t^k read off the exponent rho(k, code)."""
    exps = code_exponents(code)
    return ring.domain.from_index(exps[k]) if k < len(exps) else ring.domain.zero


def _from_exponents(exps) -> int:
    code = 1
    for p, e in zip(PRIMES, exps):
        if e:
            code *= p ** e
    if len(exps) > len(PRIMES) and any(exps[len(PRIMES):]):
        raise CapError(f"result degree exceeds the code cap {MAX_DEGREE}")
    return code


def code_add(n: int, m: int, ring: OreRing) -> int:
    """T_+(n, m) = prod p_{i+1}^P_+(rho(i, n), rho(i, m)) with P_+ the index addition table."""
    F = ring.domain
    a, b = code_exponents(n), code_exponents(m)
    size = max(len(a), len(b))
    a += [0] * (size - len(a))
    b += [0] * (size - len(b))
    idx = F.index
    exps = [idx(F.add(F.from_index(x), F.from_index(y))) for x, y in zip(a, b)]
    return _from_exponents(exps)


def code_neg(n: int, ring: OreRing) -> int:
    F = ring.domain
    return _from_exponents([F.index(F.neg(F.from_index(x))) for x in code_exponents(n)])


def code_sub(n: int, m: int, ring: OreRing) -> int:
    """T_-(n, m) = T_+(n, T_neg(m))."""
    return code_add(n, code_neg(m, ring), ring)


def code_mul(n: int, m: int, ring: OreRing) -> int:
    """T_x on codes: the twisted Cauchy product carried out on exponents."""
    F = ring.domain
    a = [F.from_index(x) for x in code_exponents(n)]
    b = [F.from_index(x) for x in code_exponents(m)]
    if not a or not b:
        return 1
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(ai, ring.sigma_pow(bj, i)))
    return _from_exponents([F.index(c) for c in out])


def encode_fraction(u: OreFraction) -> tuple[int, int]:
    """(J(den), J(num)) of the canonical representative."""
    _check_ring(u.ring)
    c = frac_canonical(u)
    return encode_poly(c.den), encode_poly(c.num)


def decode_fraction(pair, ring: OreRing) -> OreFraction:
    den, num = pair
    return OreFraction(decode_poly(den, ring), decode_poly(num, ring))


def factored(code: int) -> str:
    """Factored display such as ``2^1·5^1``; the empty product prints as ``1``."""
    exps = code_exponents(code)
    parts = [f"{p}^{e}" for p, e in zip(PRIMES, exps) if e]
    return "·".join(parts) if parts else "1"
