import itertools

import pytest

from orelab.errors import CapError, DomainError, RingSpecError
from orelab.fields import field_make
from orelab.godel import (PRIMES, code_add, code_coefficient, code_degree, code_mul, code_sub, decode_fraction,
                          decode_poly, encode_fraction, encode_poly, factored, is_code)
from orelab.ore import OrePoly, OreRing
from orelab.orefrac import OreFraction, frac_eq

from conftest import F4


def _polys(R, d):
    els = list(R.domain.elements())
    return [OrePoly(R, list(c)) for c in itertools.product(els, repeat=d + 1)]


def test_prime_table():
    assert PRIMES[:6] == (2, 3, 5, 7, 11, 13)
    assert len(PRIMES) == 33


def test_encode_examples(r2):
    assert encode_poly(r2.zero()) == 1
    assert encode_poly(r2.parse("1 + t^2")) == 10
    assert encode_poly(r2.parse("t + t^3")) == 21
    assert factored(10) == "2^1·5^1"
    assert factored(1) == "1"


def test_decode_examples(r2):
    assert decode_poly(10, r2) == r2.parse("1 + t^2")
    assert decode_poly(1, r2).is_zero()
    with pytest.raises(DomainError):
        decode_poly(8, r2)
    with pytest.raises(DomainError):
        decode_poly(0, r2)
    assert not is_code(8, r2) and is_code(10, r2)
    assert PRIMES[-1] == 137
    assert not is_code(2 * 139, r2)


def test_requires_finite_field():
    R = OreRing(field_make("GF(2)(s)"))
    with pytest.raises(RingSpecError):
        encode_poly(R.x())


def test_degree_cap(r2):
    with pytest.raises(CapError):
        encode_poly(r2.parse("t^33"))
    assert decode_poly(encode_poly(r2.parse("t^32")), r2) == r2.parse("t^32")


def test_fraction_examples(r4):
    assert encode_fraction(OreFraction.embed(r4.x())) == (2, 3)
    bt = r4.parse("b*t")
    assert encode_fraction(OreFraction(bt * r4.x(), bt)) == encode_fraction(OreFraction(r4.x(), r4.one()))
    assert encode_fraction(OreFraction(r4.parse("t+1"), r4.zero())) == (2, 1)
    u = OreFraction(r4.parse("t^2 + b"), r4.parse("b*t"))
    assert frac_eq(decode_fraction(encode_fraction(u), r4), u)


@pytest.mark.parametrize("text,deg", [("GF(2)", 4), (F4, 3)])
def test_round_trip_and_injectivity(text, deg):
    R = OreRing(field_make(text))
    seen = {}
    for d in range(deg + 1):
        for f in _polys(R, d):
            c = encode_poly(f)
            assert decode_poly(c, R) == f
            assert seen.setdefault(c, f) == f
            assert code_degree(c) == f.degree()
            for k in range(d + 1):
                assert code_coefficient(c, k, R) == f.coeff(k)
    assert len(seen) == R.domain.size ** (deg + 1)


def test_code_level_operations_exhaustive_f2():
    R = OreRing(field_make("GF(2)"))
    polys = _polys(R, 3)
    for f in polys:
        for g in polys:
            a, b = encode_poly(f), encode_poly(g)
            assert code_add(a, b, R) == encode_poly(f + g)
            assert code_sub(a, b, R) == encode_poly(f - g)
            assert code_mul(a, b, R) == encode_poly(f * g)


def test_fraction_codes_detect_equality(r4):
    small = [p for d in range(2) for p in _polys(r4, d)]
    fracs = [OreFraction(b, a) for b in small if not b.is_zero() for a in small]
    codes = [encode_fraction(u) for u in fracs]
    for i in range(0, len(fracs), 7):
        for j in range(0, len(fracs), 5):
            assert frac_eq(fracs[i], fracs[j]) == (codes[i] == codes[j])
