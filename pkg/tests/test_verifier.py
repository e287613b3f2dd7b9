import json
from pathlib import Path

import jsonschema
import pytest

from orelab.carlitz import CarlitzSpec
from orelab.errors import DomainError
from orelab.verifier import (CERTIFIED, CERTIFIED_AT_CAP, COUNTEREXAMPLE, INCONCLUSIVE, build_similarity_table,
                             carlitz_ring, count_by_degree, count_report, phi_k_spec, replay_centralizer_witness,
                             verify_centralizer_eq, verify_difference_growth, verify_phik_intersection,
                             verify_truncation_lemma)

SCHEMA = json.loads((Path(__file__).parents[1] / "src/orelab/schemas/report.json").read_text())


def _valid(rep):
    jsonschema.validate(rep.to_json(), SCHEMA)
    return rep


def test_centralizer_finite():
    rep = _valid(verify_centralizer_eq(carlitz_ring(2, 2, "0"), 3))
    assert rep.verdict == CERTIFIED
    assert rep.counts["centralizer"] == rep.counts["image"] == 16


def test_centralizer_function_field():
    rep = _valid(verify_centralizer_eq(carlitz_ring(3, 1, "s"), 2))
    assert rep.verdict == CERTIFIED_AT_CAP


def test_perturbed_phi_gives_replayable_witness():
    base = carlitz_ring(2, 2, "0")
    bad = CarlitzSpec(base.ring, phi_T=base.ring.parse("t^2"))
    rep = _valid(verify_centralizer_eq(bad, 3))
    assert rep.verdict == COUNTEREXAMPLE
    assert replay_centralizer_witness(bad, rep.witness)
    twisted = CarlitzSpec(base.ring, phi_T=base.ring.parse("b*t"))
    assert verify_centralizer_eq(twisted, 3).verdict in (CERTIFIED, COUNTEREXAMPLE)


def test_counts():
    assert count_by_degree("Fq[T]", 2, 1) == [2, 4]
    assert count_by_degree("phi(A)", 3, 0) == [3]
    for q in (2, 3):
        a, b, c = (count_by_degree(w, q, 3) for w in ("Fq[T]", "Fq{t}", "phi(A)"))
        assert a == b == c == [q ** (e + 1) for e in range(4)]
    rep = _valid(count_report("phi(A)", 2, 3))
    assert rep.counts["cumulative"] == [2, 4, 8, 16]
    assert rep.counts["zero"] == 1


def test_phik_intersection():
    assert _valid(verify_phik_intersection(2, 1, 2, 2)).verdict.startswith(CERTIFIED)
    assert verify_phik_intersection(3, 1, 3, 1).verdict.startswith(CERTIFIED)
    with pytest.raises(DomainError):
        verify_phik_intersection(2, 1, 1, 2)


def test_similarity_table():
    table, rep = build_similarity_table(phi_k_spec(2, 1), phi_k_spec(2, 2), 1)
    _valid(rep)
    pairs = {(str(a), str(b)) for a, b in table.pairs}
    assert ("t + s", "t + s^2") in pairs
    for a, b in table.pairs:
        assert table.apply(table.apply(a)) == a
        assert table.apply(a) == b
    ident, rep = build_similarity_table(phi_k_spec(2, 1), phi_k_spec(2, 1), 2)
    assert not ident.pairs and rep.verdict.startswith(CERTIFIED)


def test_truncation():
    rep = _valid(verify_truncation_lemma(2, 4, 300, seed=1))
    assert rep.verdict == CERTIFIED
    again = verify_truncation_lemma(2, 4, 300, seed=1)
    assert again.counts == rep.counts and again.verdict == rep.verdict


def test_difference_growth():
    rep = _valid(verify_difference_growth(phi_k_spec(2, 1), phi_k_spec(2, 2), range(1, 5)))
    assert rep.verdict.startswith(CERTIFIED)
    cum = rep.counts["cumulative"]
    assert all(x <= y for x, y in zip(cum, cum[1:])) and cum[-1] > cum[0]
    same = verify_difference_growth(phi_k_spec(2, 1), phi_k_spec(2, 1), range(1, 4))
    assert same.verdict == INCONCLUSIVE


def test_reports_are_reproducible():
    a = verify_centralizer_eq(carlitz_ring(3, 1, "0"), 3).to_json()
    b = verify_centralizer_eq(carlitz_ring(3, 1, "0"), 3).to_json()
    a.pop("millis"), b.pop("millis")
    assert a == b
