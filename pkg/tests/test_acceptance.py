"""Acceptance suite: ten criteria, each with its sample size and time limit.

Run with ``pytest tests/test_acceptance.py -s`` (or ``python tests/test_acceptance.py``)
to see one PASS/FAIL line per criterion.
"""
import functools
import itertools
import random
import sys
import time

import pytest

from orelab.carlitz import commuting_set, enumerate_polys, principal_generator_report
from orelab.descend import descend_system, random_system, solutions_equiv
from orelab.errors import NotPerfectError
from orelab.fields import PrimeField, RationalFunctionField, field_make
from orelab.godel import code_add, code_mul, code_sub, decode_poly, encode_poly
from orelab.ore import OrePoly, OreRing, common_left_multiple, left_divmod, ore_mul, ore_pair_search, right_divmod
from orelab.series import TwistedSeries, series_d, series_mul, series_mul_decomposed
from orelab.verifier import CERTIFIED, CERTIFIED_AT_CAP, carlitz_ring, count_by_degree, verify_centralizer_eq
from orelab.weyl import (RlRing, WeylRing, kappa_generator_report, ore_bound_N, weyl_common_left_multiple,
                         weyl_mul, weyl_ore_pair_search)

F4 = "GF(4; x^2+x+1; q=2)"
F9 = "GF(9; x^2+1; q=3)"

RESULTS = {}


def criterion(number, title, limit):
    """Time the check, enforce the limit and record a PASS/FAIL line."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            ok, detail = False, ""
            try:
                detail = fn(*args, **kwargs) or ""
                ok = True
            except AssertionError as exc:
                detail = f"assertion failed: {exc}"
                raise
            finally:
                secs = time.perf_counter() - t0
                in_time = secs < limit
                passed = ok and in_time
                if ok and not in_time:
                    detail = f"exceeded the {limit} s limit"
                line = f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {title} ({secs:.2f} s / {limit} s) {detail}".rstrip()
                RESULTS[number] = line
                print(line, file=sys.__stdout__, flush=True)
            assert secs < limit, f"criterion {number} took {secs:.2f} s (limit {limit} s)"

        return run

    return wrap


def _ring_instances():
    s_field = RationalFunctionField(PrimeField(3), ["s"], max_degree=512)
    return [
        ("F2{t}", OreRing(field_make("GF(2)")), {}),
        ("F4{t}", OreRing(field_make(F4)), {}),
        ("F3(s){t}", OreRing(s_field), {"coeff_degree": 1, "terms": 2}),
        ("QQ(x)[d]", OreRing(field_make("QQ(x)"), "differential", var=1), {"coeff_degree": 1, "terms": 2}),
    ]


def _nonzero(make):
    while True:
        v = make()
        if not v.is_zero():
            return v


@criterion(1, "ring axioms of ore_mul and weyl_mul", 30)
def test_criterion_01_ring_axioms():
    rng = random.Random(1)
    triples = 1000
    for name, R, kw in _ring_instances():
        deg = 2
        for _ in range(triples):
            f, g, h = (R.random(rng, rng.randint(0, deg), **kw) for _ in range(3))
            assert ore_mul(ore_mul(f, g), h) == ore_mul(f, ore_mul(g, h)), name
            assert ore_mul(f, g + h) == ore_mul(f, g) + ore_mul(f, h), name
            assert ore_mul(f + g, h) == ore_mul(f, h) + ore_mul(g, h), name
    W = WeylRing(field_make("QQ(x1,x2)"), 2)
    for _ in range(triples):
        f, g, h = (W.random(rng, degree=1, terms=2, coeff_degree=1) for _ in range(3))
        assert weyl_mul(weyl_mul(f, g), h) == weyl_mul(f, weyl_mul(g, h))
        assert weyl_mul(f, g + h) == weyl_mul(f, g) + weyl_mul(f, h)
        assert weyl_mul(f + g, h) == weyl_mul(f, h) + weyl_mul(g, h)
    return f"{triples} triples in each of 5 rings"


@criterion(2, "division identities and the perfectness check", 10)
def test_criterion_02_division():
    rng = random.Random(2)
    pairs = 1000
    rings = [OreRing(field_make(F4)), OreRing(field_make(F9)),
             OreRing(field_make("QQ(x)"), "differential", var=1)]
    for R in rings:
        kw = {"coeff_degree": 1, "terms": 2} if R.domain.nvars else {}
        for _ in range(pairs):
            a = R.random(rng, rng.randint(0, 5), **kw)
            b = _nonzero(lambda: R.random(rng, rng.randint(0, 3), **kw))
            q, r = right_divmod(a, b)
            assert ore_mul(q, b) + r == a
            assert r.is_zero() or r.degree() < b.degree()
            q, r = left_divmod(a, b)
            assert ore_mul(b, q) + r == a
            assert r.is_zero() or r.degree() < b.degree()
    S = OreRing(field_make("GF(2)(s)"))
    for _ in range(20):
        a = S.random(rng, 3, coeff_degree=1)
        b = _nonzero(lambda: S.random(rng, rng.randint(1, 2), coeff_degree=1))
        if a.degree() >= b.degree():
            with pytest.raises(NotPerfectError):
                left_divmod(a, b)
    return f"{pairs} pairs in each of {len(rings)} rings"


@criterion(3, "Ore pairs and the dimension-count bound", 60)
def test_criterion_03_ore_pairs():
    rng = random.Random(3)
    count = 0
    R4 = OreRing(field_make(F4))
    for _ in range(200):
        a = _nonzero(lambda: R4.random(rng, rng.randint(0, 3)))
        b = _nonzero(lambda: R4.random(rng, rng.randint(0, 3)))
        c, d = common_left_multiple(a, b)
        assert not c.is_zero() and not d.is_zero() and ore_mul(c, a) == ore_mul(d, b)
        count += 1
    D = OreRing(field_make("QQ(x)"), "differential", var=1)
    for _ in range(200):
        a = _nonzero(lambda: D.random(rng, rng.randint(0, 2), coeff_degree=1, terms=2))
        b = _nonzero(lambda: D.random(rng, rng.randint(0, 2), coeff_degree=1, terms=2))
        pair = ore_pair_search(a, b)
        n = max(a.degree(), b.degree())
        N = ore_bound_N(n, 1)
        assert pair.bounds_tried[0] == N
        assert 2 * (N + 1) > N + n + 1
        assert not pair.c.is_zero() and not pair.d.is_zero() and ore_mul(pair.c, a) == ore_mul(pair.d, b)
        count += 1
    W = WeylRing(field_make("QQ(x1,x2)"), 2)
    for _ in range(100):
        deg = 2 if rng.random() < 0.1 else 1
        a = _nonzero(lambda: W.random(rng, degree=deg, terms=2, coeff_degree=1))
        b = _nonzero(lambda: W.random(rng, degree=1, terms=2, coeff_degree=1))
        pair = weyl_ore_pair_search(a, b)
        n = max(a.max_degree(), b.max_degree())
        N = ore_bound_N(n, 2)
        assert pair.bounds_tried[0] == N
        assert 2 * (N + 1) ** 2 > (N + n + 1) ** 2
        assert pair.unknowns == 2 * (N + 1) ** 2 and pair.equations <= (N + n + 1) ** 2
        assert not pair.c.is_zero() and not pair.d.is_zero()
        assert weyl_mul(pair.c, a) == weyl_mul(pair.d, b)
        c, d = weyl_common_left_multiple(a, b)
        assert weyl_mul(c, a) == weyl_mul(d, b)
        count += 1
    return f"{count} verified pairs"


@criterion(4, "centralizer of phi_T equals the Carlitz image", 60)
def test_criterion_04_centralizer():
    verdicts = []
    for q, n in ((2, 1), (2, 2), (3, 1)):
        rep = verify_centralizer_eq(carlitz_ring(q, n, "0"), 4)
        assert rep.verdict == CERTIFIED, rep.to_json()
        verdicts.append(f"({q},{n},0)")
    for q in (2, 3):
        rep = verify_centralizer_eq(carlitz_ring(q, 1, "s"), 4, cap=4)
        assert rep.verdict == CERTIFIED_AT_CAP, rep.to_json()
        verdicts.append(f"({q},1,s)@cap4")
    return "certified " + " ".join(verdicts)


@criterion(5, "degree counts of F_q[T], F_q{t} and phi(A)", 10)
def test_criterion_05_counts():
    for q in (2, 3):
        for d in range(5):
            counts = [count_by_degree(w, q, d) for w in ("Fq[T]", "Fq{t}", "phi(A)")]
            expected = [q ** (e + 1) for e in range(d + 1)]
            assert counts[0] == counts[1] == counts[2] == expected
    return "cumulative counts q^(e+1) for q in {2,3}, d <= 4"


def _decomposed_check(f, g):
    return series_d(series_mul(f, g)) == series_mul_decomposed(series_d(f), series_d(g))


def _random_laurent(K, rng):
    val, n = rng.randint(-2, 3), rng.randint(1, 8)
    return TwistedSeries(K, val, [K.random(rng) for _ in range(n)], val + n)


@criterion(6, "component map turns series products into the decomposed product", 120)
def test_criterion_06_series_square():
    K = field_make(F4)
    els = list(K.elements())
    pairs = 0
    for prec in range(1, 6):
        ser = [TwistedSeries(K, 0, list(c), prec) for c in itertools.product(els, repeat=prec)]
        ds = [series_d(s) for s in ser]
        for i, f in enumerate(ser):
            for j, g in enumerate(ser):
                assert series_mul_decomposed(ds[i], ds[j]) == series_d(series_mul(f, g)), (str(f), str(g))
                pairs += 1
    K9 = field_make(F9)
    rng = random.Random(6)
    for _ in range(500):
        f, g = (_random_laurent(K9, rng) for _ in range(2))
        assert _decomposed_check(f, g), (str(f), str(g))
    return f"{pairs} exhaustive F_4 pairs, 500 F_9 Laurent pairs"


@criterion(7, "code round trip and code-level operations", 10)
def test_criterion_07_codes():
    checked = 0
    for text, deg in (("GF(2)", 3), (F4, 2)):
        R = OreRing(field_make(text))
        els = list(R.domain.elements())
        polys = [OrePoly(R, list(c)) for c in itertools.product(els, repeat=deg + 1)]
        codes = {}
        for f in polys:
            c = encode_poly(f)
            assert decode_poly(c, R) == f
            assert codes.setdefault(c, f) == f
        assert len(codes) == len(polys)
        for f in polys:
            for g in polys:
                a, b = encode_poly(f), encode_poly(g)
                assert code_add(a, b, R) == encode_poly(f + g)
                assert code_sub(a, b, R) == encode_poly(f - g)
                assert code_mul(a, b, R) == encode_poly(ore_mul(f, g))
                checked += 1
    return f"{checked} code-level pairs"


@criterion(8, "descent preserves solution sets", 120)
def test_criterion_08_descent():
    rng = random.Random(8)
    total = 0
    for base, minpoly in (("GF(2)", [1, 1, 1]), ("GF(3)", [1, 0, 1])):
        F = field_make(base)
        for _ in range(100):
            s = random_system(F, minpoly, rng, max_unknowns=3, degree=2)
            assert solutions_equiv(s, descend_system(s), seed=rng.randrange(10 ** 6)), s.to_text()
            total += 1
    return f"{total} random systems"


@criterion(9, "generators of I and M factor every member", 120)
def test_criterion_09_generators():
    rng = random.Random(9)
    R = OreRing(field_make(F4))
    a = R.from_raw([R.domain.alpha])
    S = commuting_set(a, 3)
    found = 0
    for i in range(100):
        if i % 2:
            k0 = _nonzero(lambda: R.random(rng, rng.randint(0, 1)))
            B, C = common_left_multiple(ore_mul(a, k0), ore_mul(k0, a))
        else:
            B = _nonzero(lambda: R.random(rng, 1))
            C = _nonzero(lambda: R.random(rng, 1))
        rep = principal_generator_report(B, C, a, 3)
        assert rep.verdict in ("certified", "none-at-bound"), rep.witness
        members = [x for x in enumerate_polys(R, 3)
                   if not x.is_zero() and ore_mul(ore_mul(B, a), x) == ore_mul(ore_mul(C, x), a)]
        if i % 2:
            assert members and rep.generator is not None
        for x in members:
            assert any(ore_mul(rep.generator, s) == x for s in S), (str(x), str(rep.generator))
            found += 1
    W = WeylRing(field_make("QQ(x)"), 1)
    dd = W.d(1)
    Rl = RlRing(W, 0, 1)
    gen = Rl.generator()
    for i in range(50):
        if i % 2:
            k0 = _nonzero(lambda: W.random(rng, degree=1, terms=2, coeff_degree=1))
            A, B = weyl_common_left_multiple(weyl_mul(k0, dd), weyl_mul(dd, k0))
        else:
            A = _nonzero(lambda: W.random(rng, degree=1, terms=2, coeff_degree=1))
            B = _nonzero(lambda: W.random(rng, degree=1, terms=2, coeff_degree=1))
        rep = kappa_generator_report(A, B, 0, 2)
        assert rep.verdict in ("certified", "none-at-bound"), rep.witness
        if i % 2:
            assert rep.kappa is not None
        if rep.kappa is None:
            continue
        K = Rl.from_diffop(rep.kappa)
        for m in rep.basis:
            assert (weyl_mul(weyl_mul(A, m), dd) - weyl_mul(weyl_mul(B, dd), m)).is_zero()
            s, r = left_divmod(Rl.from_diffop(m), K)
            assert r.is_zero() and ore_mul(s, gen) == ore_mul(gen, s)
            found += 1
    return f"{found} members factored"


@criterion(10, "canonical relation d_i x_i - x_i d_i = 1", 1)
def test_criterion_10_weyl_relation():
    rings = ("QQ(x1)", "QQ(x1,x2)", "QQ(x1,x2,x3)", "GF(3)(x1,x2)", "GF(2)(x1,x2,x3)")
    for text in rings:
        W = WeylRing(field_make(text))
        for i in range(1, W.k + 1):
            assert weyl_mul(W.d(i), W.x(i)) - weyl_mul(W.x(i), W.d(i)) == W.one()
    return f"{len(rings)} rings"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
