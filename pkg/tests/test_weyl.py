import random

import pytest

from orelab.errors import CapError
from orelab.fields import field_make
from orelab.ore import OreRing, ore_mul
from orelab.orefrac import OreFraction, frac_eq
from orelab.weyl import (WeylRing, constants_centralizer_check, kappa_generator, kappa_generator_report,
                         ore_bound_N, phi_t_to_d, rl_divmod, rl_ring, weyl_common_left_multiple, weyl_mul,
                         weyl_ore_pair_search)

from conftest import nonzero


def test_multiplication_examples(w2):
    P = w2.parse
    assert P("d1") * P("x1") == P("x1*d1 + 1")
    assert P("d1") * P("x2") == P("x2*d1")
    assert P("d1*d2") * P("x1*x2") == P("x1*x2*d1*d2 + x2*d2 + x1*d1 + 1")


def test_matches_univariate_core():
    F = field_make("QQ(x)")
    W = WeylRing(F, 1)
    D = OreRing(F, "differential", var=1)
    rng = random.Random(2)
    for _ in range(100):
        f = W.random(rng, degree=2, terms=3)
        g = W.random(rng, degree=2, terms=3)
        lift = lambda op: D.from_raw([op.coeff((i,)) for i in range(op.max_degree() + 1)]) if not op.is_zero() else D.zero()
        assert lift(weyl_mul(f, g)) == ore_mul(lift(f), lift(g))


def test_ore_bound_examples():
    assert ore_bound_N(3, 1) == 3
    assert ore_bound_N(3, 2) == 7
    assert ore_bound_N(0, 2) == 0
    for n in range(6):
        for k in range(1, 4):
            N = ore_bound_N(n, k)
            assert 2 * (N + 1) ** k > (N + n + 1) ** k or (k == 1 and N == n)
            if N > 0 and k > 1:
                assert not 2 * N ** k > (N - 1 + n + 1) ** k


def test_common_left_multiple_examples(w2):
    P = w2.parse
    c, d = weyl_common_left_multiple(P("d1"), P("x1"))
    assert c * P("d1") == d * P("x1") and not c.is_zero() and not d.is_zero()
    c, d = weyl_common_left_multiple(P("d1"), P("d2"))
    assert c * P("d1") == d * P("d2")
    assert weyl_common_left_multiple(P("d1+x1"), P("d1+x1")) == (w2.one(), w2.one())
    pair = weyl_ore_pair_search(P("d1"), P("x1"))
    assert pair.bounds_tried[0] == ore_bound_N(1, 2)


def test_canonical_relation_and_commuting_generators():
    for names in ("x1", "x1,x2", "x1,x2,x3"):
        F = field_make(f"QQ({names})")
        W = WeylRing(F)
        for i in range(1, W.k + 1):
            assert W.d(i) * W.x(i) - W.x(i) * W.d(i) == W.one()
            for j in range(1, W.k + 1):
                assert W.d(i) * W.d(j) == W.d(j) * W.d(i)
                if i != j:
                    assert W.d(i) * W.x(j) == W.x(j) * W.d(i)


def test_associativity_random(w2):
    rng = random.Random(5)
    for _ in range(120):
        f, g, h = (w2.random(rng, degree=1, terms=2) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h


def test_dimension_count_at_first_bound(w2):
    rng = random.Random(8)
    for _ in range(6):
        a = nonzero(lambda: w2.random(rng, degree=1, terms=2))
        b = nonzero(lambda: w2.random(rng, degree=1, terms=2))
        n = max(a.max_degree(), b.max_degree())
        pair = weyl_ore_pair_search(a, b)
        N = ore_bound_N(n, 2)
        assert pair.bounds_tried == [N]
        assert pair.unknowns == 2 * (N + 1) ** 2
        assert pair.equations <= (N + n + 1) ** 2 < pair.unknowns
        assert pair.c * a == pair.d * b


def test_rl_division_examples(w2):
    W1 = WeylRing(field_make("QQ(x)"), 1)
    R1 = rl_ring(W1, 1)
    y, r = rl_divmod(R1.from_diffop(W1.parse("d1^2")), R1.from_diffop(W1.parse("d1")))
    assert y == R1.from_diffop(W1.parse("d1")) and r.is_zero()
    R = rl_ring(w2, 1)
    kappa = R.ring.monomial(R.coefficient(w2.parse("d2")), 1)
    x = R.from_diffop(w2.parse("d1^2"))
    y, r = rl_divmod(x, kappa)
    assert r.is_zero()
    assert y == R.ring.monomial(R.coeffs.inv(R.coefficient(w2.parse("d2"))), 1)
    small = R1.from_diffop(W1.parse("d1"))
    y, r = rl_divmod(small, R1.from_diffop(W1.parse("d1^2")))
    assert y.is_zero() and r == small


def test_rl_rejects_three_generators():
    W3 = WeylRing(field_make("QQ(x1,x2,x3)"))
    with pytest.raises(CapError):
        rl_ring(W3, 1)
    with pytest.raises(CapError):
        kappa_generator(W3.one(), W3.one(), 0, 1)


def test_kappa_examples(w2):
    W1 = WeylRing(field_make("QQ(x)"), 1)
    assert kappa_generator(W1.one(), W1.one(), 0, 2) == W1.one()
    rep = kappa_generator_report(w2.parse("x1"), w2.parse("x1"), 0, 1)
    assert rep.kappa == w2.one() and rep.verdict == "certified"


def test_kappa_planted():
    W = WeylRing(field_make("QQ(x)"), 1)
    rng = random.Random(4)
    d = W.d(1)
    for _ in range(5):
        k0 = nonzero(lambda: W.random(rng, degree=1, terms=2))
        A, B = weyl_common_left_multiple(k0 * d, d * k0)
        rep = kappa_generator_report(A, B, 0, 2)
        assert rep.verdict == "certified"
        assert (A * k0 * d - B * d * k0).is_zero()


def test_constants_check(w2):
    E = OreFraction.embed
    assert constants_centralizer_check(E(w2.parse("d1*d2 + 1")))
    assert not constants_centralizer_check(E(w2.parse("x1*d1")))
    assert constants_centralizer_check(OreFraction(w2.parse("d1"), w2.parse("d2")))


def test_t_to_d_is_a_homomorphism(w2):
    rng = random.Random(13)
    for _ in range(20):
        p = {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(2)}
        q = {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(2)}
        pq = {}
        for e1, c1 in p.items():
            for e2, c2 in q.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                pq[e] = pq.get(e, 0) + c1 * c2
        P, Q = phi_t_to_d(w2, p), phi_t_to_d(w2, q)
        assert P * Q == phi_t_to_d(w2, pq) == Q * P
        if not P.is_zero() and not Q.is_zero():
            u, v = OreFraction(P, w2.one()), OreFraction(Q, w2.one())
            assert frac_eq(u * v, v * u)
            assert constants_centralizer_check(u * v)
