import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from orelab.errors import PrecisionError, RingSpecError
from orelab.fields import field_make
from orelab.series import (TwistedSeries, alpha_frobenius_periodic, decomposition_constants, parse_component_tuple,
                           parse_series, residue_split, series_d, series_d_inverse, series_inv, series_mul,
                           series_mul_decomposed, tau_centralizer_windows)

from conftest import F4, F9


@pytest.fixture(scope="module")
def F():
    return field_make(F4)


def P(text, F, prec=None):
    return parse_series(text, F, prec)


def C(text, F):
    return parse_series(text, F, commutative=True)


def test_product_examples(F):
    sq = series_mul(P("b*t", F, 5), P("b*t", F, 5))
    assert sq.terms() == {2: F.one}
    assert sq.agrees(P("t^2", F, 5))
    assert series_mul(P("t^-1", F), P("b", F)) == P("(b+1)*t^-1", F)
    f = P("1 + b*t + t^3", F, 5)
    g = series_mul(f, P("1", F))
    assert g == f and g.prec == 5


def test_product_precision_propagation(F):
    f = P("b*t", F, 5)
    g = series_mul(f, f)
    # each factor is known on [1, 5); the product on [2, 6)
    assert g.prec == 6
    h = series_mul(P("1 + t", F, 3), P("t^2 + t^3", F, 7))
    assert h.prec == min(3 + 2, 7 + 0)


def test_laurent_needs_perfect_field():
    S = field_make("GF(2)(s)")
    with pytest.raises(RingSpecError):
        series_mul(parse_series("t^-1", S), parse_series("s", S))


def test_coefficients_beyond_precision(F):
    f = P("1 + t", F, 3)
    assert f.coeff(2) == F.zero
    with pytest.raises(PrecisionError):
        f.coeff(3)


def test_component_map_examples(F):
    T = lambda s: C(s, F)
    assert series_d(P("b*t", F)) == (T("0"), T("T"))
    assert series_d(P("t^2", F)) == (T("T^2"), T("0"))
    assert series_d(P("b + 1", F)) == (T("1"), T("1"))


def test_component_map_inverse(F):
    rng = random.Random(3)
    for _ in range(30):
        f = TwistedSeries(F, rng.randint(-2, 2), [F.random(rng) for _ in range(5)])
        assert series_d_inverse(series_d(f)) == f


def test_residue_split_examples(F):
    T = lambda s: C(s, F)
    assert residue_split(T("1 + T + T^2 + T^3"), 2) == (T("1 + T^2"), T("T + T^3"))
    assert residue_split(T("0"), 2) == (T("0"), T("0"))
    assert residue_split(T("T^5"), 3) == (T("0"), T("0"), T("T^5"))


def test_decomposed_product_examples(F):
    tup = lambda s: parse_component_tuple(s, F)
    assert series_mul_decomposed(tup("(0; T)"), tup("(0; T)")) == tup("(T^2; 0)")
    other = tup("(T; T^2 + 1)")
    assert series_mul_decomposed(tup("(1; 0)"), other) == other
    assert series_mul_decomposed(other, tup("(1; 0)")) == other
    assert series_mul_decomposed(tup("(T; 0)"), tup("(T; 0)")) == tup("(T^2; 0)")


def test_symbolic_constants_small_n(F):
    table = decomposition_constants(F).symbolic()
    assert table


def test_alpha_periodicity():
    for text in (F4, F9, "GF(8; x^3+x+1; q=2)", "GF(16; x^4+x+1; q=4)"):
        assert alpha_frobenius_periodic(field_make(text))


@pytest.mark.parametrize("text", [F4, F9])
def test_tau_centralizer_exhaustive(text):
    K = field_make(text)
    prec = 3
    t = P("t", K)
    found = []
    for coeffs in itertools.product(list(K.elements()), repeat=prec):
        f = TwistedSeries(K, 0, list(coeffs), prec)
        a, b = series_mul(f, t), series_mul(t, f)
        if all(a.coeff(i) == b.coeff(i) for i in range(1, prec + 1)):
            found.append(f)
    fq = set(K.subfield_elements())
    assert all(all(c in fq for c in f.coeffs) for f in found)
    assert len(found) == len(fq) ** prec
    assert {str(f) for f in found} == {str(f) for f in tau_centralizer_windows(K, prec)}


def test_inverse(F):
    f = P("1 + b*t + t^2", F, 6)
    g = series_inv(f)
    one = P("1", F)
    assert series_mul(f, g).agrees(one) and series_mul(g, f).agrees(one)
    h = series_inv(P("b*t^-1 + t", F, 4))
    assert h.val == 1
    with pytest.raises(PrecisionError):
        series_inv(P("O(t^3)", F))


def test_literals(F):
    assert P("sum(t^i; i=0..4)", F) == P("1 + t + t^2 + t^3 + t^4 + O(t^5)", F)
    f = P("b*t^-1 + 1 + t^3 + O(t^5)", F)
    assert f.val == -1 and f.prec == 5
    assert P("t*t^-1", F) == P("1", F)


def _random_series(K, rng, low=-2):
    val = rng.randint(low, 2)
    n = rng.randint(1, 5)
    return TwistedSeries(K, val, [K.random(rng) for _ in range(n)], val + n)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_precision_soundness(seed):
    """Raising the input precision never changes coefficients already reported."""
    K = field_make(F9)
    rng = random.Random(seed)
    f_full, g_full = _random_series(K, rng), _random_series(K, rng)
    def extend(f):
        known = [f.coeff(i) for i in range(f.val, f.prec)]
        return TwistedSeries(K, f.val, known + [K.random(rng) for _ in range(3)], f.prec + 3)

    low, high = series_mul(f_full, g_full), series_mul(extend(f_full), extend(g_full))
    assert high.prec >= low.prec
    for i in range(min(low.val, high.val), int(low.prec)):
        assert low.coeff(i) == high.coeff(i)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_commuting_square_random(seed):
    K = field_make(F9)
    rng = random.Random(seed)
    f, g = _random_series(K, rng), _random_series(K, rng)
    assert series_d(series_mul(f, g)) == series_mul_decomposed(series_d(f), series_d(g))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_print_parse_round_trip(seed):
    K = field_make(F4)
    f = _random_series(K, random.Random(seed))
    assert P(str(f), K) == f
