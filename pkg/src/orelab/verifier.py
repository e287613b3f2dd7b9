"""Bounded-degree certification of structural statements about Carlitz images.

Each check returns a :class:`LemmaReport` whose verdict is ``certified``,
``counterexample`` (with a witness that replays to failure) or
``inconclusive-at-bound``. Over finite fields the checks enumerate
exhaustively in degree-lex order. Over F_q(s) they use kernels with a
coefficient-degree cap and say ``certified at cap``.
"""
from __future__ import annotations

import itertools
import random as _random
import time
from dataclasses import dataclass, field as dc_field

from .ansatz import base_field, coordinates
from .carlitz import (CarlitzSpec, CommutativePoly, carlitz_eval, carlitz_preimage, centralizer_basis,
                      enumerate_polys)
from .errors import CapError, DomainError, RingSpecError
from .fields import ExtensionField, PrimeField, RationalFunctionField, finite_field
from .linalg import rank
from .ore import OrePoly, OreRing, ore_mul

ENUM_CAP = 10 ** 6
VERIFIER_DEGREE_CAP = 4096

CERTIFIED = "certified"
CERTIFIED_AT_CAP = "certified at cap"
COUNTEREXAMPLE = "counterexample"
INCONCLUSIVE = "inconclusive-at-bound"


@dataclass
class LemmaReport:
    """Machine-readable outcome of one bounded check."""

    lemma: str
    params: dict
    verdict: str
    witness: object = None
    counts: object = None
    millis: float = 0.0
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict in (CERTIFIED, CERTIFIED_AT_CAP)

    def to_json(self) -> dict:
        out = {"lemma": self.lemma, "params": self.params, "verdict": self.verdict, "millis": round(self.millis, 3)}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.counts is not None:
            out["counts"] = self.counts
        if self.notes:
            out["notes"] = list(self.notes)
        return out


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.millis = (time.perf_counter() - self.t0) * 1000


def carlitz_ring(q: int, n: int = 1, gamma: str = "0", max_degree: int = VERIFIER_DEGREE_CAP) -> CarlitzSpec:
    """phi_T = gamma + t over F_{q^n} (gamma an element text, ``0`` for the T -> 0 structure) or over F_q(s) for gamma ``s^k``."""
    p = _prime_of(q)
    text = str(gamma).replace(" ", "")
    if "s" in text:
        if n != 1:
            raise RingSpecError("the F_q(s) setting uses n = 1")
        if p != q:
            raise RingSpecError("F_q(s) is shipped for prime q")
        K = RationalFunctionField(PrimeField(p), ["s"], max_degree=max_degree)
    else:
        K = PrimeField(p) if q ** n == p else finite_field(p, _log(q ** n, p), q)
    ring = OreRing(K, "twisted")
    return CarlitzSpec(ring, gamma=K.parse(text))


def phi_k_spec(q: int, k: int, max_degree: int = VERIFIER_DEGREE_CAP) -> CarlitzSpec:
    """phi_k(T) = s^k + t over F_q(s)."""
    return carlitz_ring(q, 1, f"s^{k}", max_degree)


def _prime_of(q: int) -> int:
    for p in range(2, q + 1):
        if q % p == 0:
            m = q
            while m % p == 0:
                m //= p
            if m != 1:
                raise RingSpecError(f"{q} is not a prime power")
            return p
    raise RingSpecError(f"{q} is not a prime power")


def _log(N: int, p: int) -> int:
    k = 0
    while N > 1:
        N //= p
        k += 1
    return k


def _fq_polys(spec: CarlitzSpec, d: int):
    """All f in F_q[T] with deg f <= d, degree-lex."""
    F = spec.field
    consts = _fq_elements(spec)
    nonzero = [c for c in consts if not F.is_zero(c)]
    yield CommutativePoly(F, [])
    for deg in range(d + 1):
        for lead in nonzero:
            for tail in itertools.product(consts, repeat=deg):
                yield CommutativePoly(F, list(reversed(tail)) + [lead])


def _fq_elements(spec: CarlitzSpec) -> list:
    F = spec.field
    if F.is_finite:
        return F.subfield_elements()
    return [F.from_int(i) for i in range(F.characteristic)]


def _image_upto(spec: CarlitzSpec, d: int) -> dict:
    """phi(f) -> f for all f with deg phi(f) <= d."""
    step = spec.phi_T.degree()
    out = {}
    for f in _fq_polys(spec, d // step):
        out[carlitz_eval(spec, f)] = f
    return out


def verify_centralizer_eq(spec: CarlitzSpec, d: int, cap: int = 4) -> LemmaReport:
    """{x : deg x <= d, x phi_T = phi_T x} against {phi(f) : deg phi(f) <= d}.

    Finite K: both sets are enumerated and compared exactly; the first
    element of the symmetric difference is the witness. K = F_q(s): a basis
    of the capped centralizer must consist of Carlitz images, and every
    phi(f) inside the cap must lie in its span.
    """
    F = spec.field
    params = {"field": F.describe(), "phi_T": str(spec.phi_T), "d": d}
    with _Timer() as tm:
        if F.is_finite:
            if F.size ** (d + 1) > ENUM_CAP:
                raise CapError(f"{F.size}^{d + 1} candidates exceed the enumeration cap")
            u = spec.phi_T
            image = _image_upto(spec, d)
            central = []
            witness = None
            for x in enumerate_polys(spec.ring, d):
                commutes = ore_mul(x, u) == ore_mul(u, x)
                if commutes:
                    central.append(x)
                if commutes != (x in image):
                    witness = {"element": str(x), "commutes": commutes, "in_image": x in image}
                    break
            verdict = CERTIFIED if witness is None else COUNTEREXAMPLE
            counts = {"centralizer": len(central), "image": len(image)} if witness is None else None
            report = LemmaReport("centralizer-eq", params, verdict, witness, counts)
        else:
            params["cap"] = cap
            report = _centralizer_at_cap(spec, d, cap, params)
    report.millis = tm.millis
    return report


def _centralizer_at_cap(spec: CarlitzSpec, d: int, cap: int, params: dict) -> LemmaReport:
    F = spec.field
    ring = spec.ring
    basis = centralizer_basis(spec.phi_T, ring, d, cap)
    for x in basis:
        try:
            f = carlitz_preimage(spec, x)
        except DomainError:
            return LemmaReport("centralizer-eq", params, COUNTEREXAMPLE,
                               {"element": str(x), "commutes": True, "in_image": False})
        if carlitz_eval(spec, f) != x:
            return LemmaReport("centralizer-eq", params, COUNTEREXAMPLE,
                               {"element": str(x), "commutes": True, "in_image": False})
    base = base_field(F)
    items = [{i: c for i, c in enumerate(x.coeffs) if not F.is_zero(c)} for x in basis]
    inside = []
    for f in _fq_polys(spec, d):
        g = carlitz_eval(spec, f)
        if all(F.total_degree(c) <= cap and c.den.is_one() for c in g.coeffs):
            inside.append(g)
    gitems = [{i: c for i, c in enumerate(g.coeffs) if not F.is_zero(c)} for g in inside]
    vecs = coordinates(F, items + gitems)
    keys = sorted({k for v in vecs for k in v}, key=repr)
    col = {k: j for j, k in enumerate(keys)}
    rows = [{col[k]: c for k, c in v.items()} for v in vecs]
    r0 = rank(base, rows[: len(basis)], len(keys))
    for g, row in zip(inside, rows[len(basis):]):
        if rank(base, rows[: len(basis)] + [row], len(keys)) != r0:
            return LemmaReport("centralizer-eq", params, COUNTEREXAMPLE,
                               {"element": str(g), "commutes": ore_mul(g, spec.phi_T) == ore_mul(spec.phi_T, g), "in_image": True})
    counts = {"basis": len(basis), "images_within_cap": len(inside), "rank": r0}
    return LemmaReport("centralizer-eq", params, CERTIFIED_AT_CAP, None, counts,
                       notes=[f"coefficients of s-degree <= {cap}"])


def replay_centralizer_witness(spec: CarlitzSpec, witness: dict) -> bool:
    """True when the witness still shows a disagreement between commuting and being an image."""
    x = spec.ring.parse(witness["element"])
    commutes = ore_mul(x, spec.phi_T) == ore_mul(spec.phi_T, x)
    try:
        f = carlitz_preimage(spec, x) if spec.phi_T.degree() == 1 and spec.phi_T.lc() == spec.field.one else None
        in_image = f is not None and carlitz_eval(spec, f) == x
        if f is None:
            in_image = x in _image_upto(spec, max(0, x.degree()))
    except DomainError:
        in_image = False
    return commutes != in_image


COUNT_CONVENTION = "cumulative: elements of degree <= e, zero included"


def count_by_degree(which: str, q: int, d: int, gamma: str = "0") -> list[int]:
    """Cumulative counts c_e = #{elements of degree <= e, zero included} for e = 0..d.

    ``which`` is ``Fq[T]``, ``Fq{t}`` or ``phi(A)``. Under this convention
    every entry equals q^(e+1).
    """
    return count_report(which, q, d, gamma).counts["cumulative"]


def count_report(which: str, q: int, d: int, gamma: str = "0") -> LemmaReport:
    if d > 6 or q > 9:
        raise CapError("count_by_degree is limited to d <= 6 and q <= 9")
    with _Timer() as tm:
        spec = carlitz_ring(q, 1, gamma)
        key = which.replace(" ", "").lower()
        if key in ("fq[t]", "a"):
            degs = [f.degree() for f in _fq_polys(spec, d)]
        elif key in ("fq{t}", "fq{tau}"):
            degs = [x.degree() for x in enumerate_polys(spec.ring, d)]
        elif key in ("phi(a)", "phi"):
            degs = [carlitz_eval(spec, f).degree() for f in _fq_polys(spec, d)]
        else:
            raise DomainError(f"unknown set {which!r}")
        exact = [sum(1 for g in degs if g == e) for e in range(d + 1)]
        zeros = sum(1 for g in degs if g == float("-inf") or g < 0)
        cumulative = []
        running = zeros
        for c in exact:
            running += c
            cumulative.append(running)
        ok = all(c == q ** (e + 1) for e, c in enumerate(cumulative))
    counts = {"exact": exact, "zero": zeros, "cumulative": cumulative}
    rep = LemmaReport("count-by-degree", {"set": which, "q": q, "d": d, "gamma": str(gamma)},
                      CERTIFIED if ok else COUNTEREXAMPLE, None if ok else {"cumulative": cumulative}, counts,
                      tm.millis, [COUNT_CONVENTION])
    return rep


def verify_phik_intersection(q: int, k: int, l: int, d: int) -> LemmaReport:
    """phi_k(A) and phi_l(A) share exactly F_q up to t-degree d (phi_k(T) = s^k + t over F_q(s))."""
    if k == l:
        raise DomainError("the intersection statement needs k != l")
    if d > 3:
        raise CapError("phi_k intersections are checked for d <= 3")
    params = {"q": q, "k": k, "l": l, "d": d}
    with _Timer() as tm:
        sk, sl = phi_k_spec(q, k), phi_k_spec(q, l)
        ik = _image_upto(sk, d)
        il = set(_image_upto(sl, d))
        common = [x for x in ik if x in il]
        consts = {sk.ring.from_raw([c]) for c in _fq_elements(sk)}
        extra = [x for x in common if x not in consts]
        missing = [c for c in consts if c not in il or c not in ik]
    if extra or missing:
        w = {"element": str((extra or missing)[0]), "kind": "extra" if extra else "missing"}
        return LemmaReport("phik-intersection", params, COUNTEREXAMPLE, w, {"common": len(common)}, tm.millis)
    return LemmaReport("phik-intersection", params, CERTIFIED, None,
                       {"image_k": len(ik), "image_l": len(il), "common": len(common)}, tm.millis)


@dataclass
class SimilarityTable:
    """Partial involution swapping enumerated difference sets and fixing everything else."""

    pairs: list
    overflow: list

    def apply(self, x: OrePoly) -> OrePoly:
        for a, b in self.pairs:
            if x == a:
                return b
            if x == b:
                return a
        return x


def build_similarity_table(phi: CarlitzSpec, psi: CarlitzSpec, d: int) -> tuple[SimilarityTable, LemmaReport]:
    """Pair the degree-lex enumerations of phi(A) minus psi(A) and psi(A) minus phi(A) up to degree d."""
    if phi.ring != psi.ring:
        raise RingSpecError("both Carlitz modules must live in the same twisted ring")
    params = {"phi_T": str(phi.phi_T), "psi_T": str(psi.phi_T), "d": d}
    with _Timer() as tm:
        ip = list(_image_upto(phi, d))
        iq = list(_image_upto(psi, d))
        sp, sq = set(ip), set(iq)
        d1 = [x for x in ip if x not in sq]
        d2 = [x for x in iq if x not in sp]
        m = min(len(d1), len(d2))
        table = SimilarityTable(list(zip(d1[:m], d2[:m])), d1[m:] + d2[m:])
        ok = True
        witness = None
        for x in ip:
            y = table.apply(x)
            if table.apply(y) != x:
                ok, witness = False, {"element": str(x), "reason": "not an involution"}
                break
            if y not in sq and x not in table.overflow:
                ok, witness = False, {"element": str(x), "image": str(y), "reason": "image outside psi(A)"}
                break
    notes = ["identity table: images agree up to the bound"] if not table.pairs and not table.overflow else []
    counts = {"pairs": len(table.pairs), "overflow": len(table.overflow), "phi_image": len(ip), "psi_image": len(iq)}
    rep = LemmaReport("similarity-table", params, CERTIFIED if ok else COUNTEREXAMPLE, witness, counts, tm.millis, notes)
    return table, rep


def verify_truncation_lemma(q: int, d: int, trials: int, seed: int = 0) -> LemmaReport:
    """If f1*g and f2*g agree from index N on, then f1 and f2 agree from N - deg g on (and likewise for g*f).

    Trials over F_q and F_{q^2}; half of the pairs share a random high part
    so that the hypothesis holds with a nontrivial N.
    """
    rng = _random.Random(seed)
    p = _prime_of(q)
    fields = [PrimeField(p, q) if q == p else finite_field(p, _log(q, p), q),
              finite_field(p, 2 * _log(q, p), q)]
    params = {"q": q, "d": d, "trials": trials, "seed": seed}
    probes = 0
    with _Timer() as tm:
        for t in range(trials):
            K = fields[t % 2]
            ring = OreRing(K, "twisted")
            f1 = ring.random(rng, d)
            g = ring.random(rng, d)
            while g.is_zero():
                g = ring.random(rng, d)
            if t % 4 < 2:
                low = ring.random(rng, rng.randint(0, max(0, d - 1)))
                f2 = f1 + low
            else:
                f2 = ring.random(rng, d)
            m = g.degree()
            for side in ("right", "left"):
                c = ore_mul(f1, g) if side == "right" else ore_mul(g, f1)
                e = ore_mul(f2, g) if side == "right" else ore_mul(g, f2)
                diff = c - e
                N = (diff.degree() + 1) if not diff.is_zero() else 0
                top = max(f1.degree(), f2.degree(), 0)
                for i in range(max(N - m, 0), int(top) + 1):
                    if f1.coeff(i) != f2.coeff(i):
                        w = {"field": K.describe(), "f1": str(f1), "f2": str(f2), "g": str(g), "side": side, "N": N, "index": i}
                        return LemmaReport("truncation", params, COUNTEREXAMPLE, w, None, 0.0)
                j = N - m - 1
                if j >= 0 and f1.coeff(j) != f2.coeff(j):
                    probes += 1
    return LemmaReport("truncation", params, CERTIFIED, None, {"trials": trials, "below_threshold_differences": probes}, tm.millis)


def verify_difference_growth(phi: CarlitzSpec, psi: CarlitzSpec, degrees=range(1, 5), chain: int = 2) -> LemmaReport:
    """Counts of phi(A) minus psi(A) per degree, and the power chain x^(2n), x^(2n+1) of a witness x."""
    degrees = list(degrees)
    if degrees and max(degrees) > 6:
        raise CapError("difference growth is checked for degrees <= 6")
    params = {"phi_T": str(phi.phi_T), "psi_T": str(psi.phi_T), "degrees": degrees}
    with _Timer() as tm:
        top = max(degrees) if degrees else 0
        ip = _image_upto(phi, top)
        iq = set(_image_upto(psi, top))
        diff = [x for x in ip if x not in iq]
        per_degree = {e: sum(1 for x in diff if x.degree() == e) for e in degrees}
        cumulative = []
        run = 0
        for e in degrees:
            run += per_degree[e]
            cumulative.append(run)
        if not diff:
            return LemmaReport("difference-growth", params, INCONCLUSIVE, None,
                               {"per_degree": {str(k): v for k, v in per_degree.items()}, "cumulative": cumulative}, 0.0,
                               ["difference set empty at every tested degree"])
        x = min(diff, key=lambda y: y.degree())
        links = []
        for n in range(1, chain + 1):
            try:
                pw = [_power(x, 2 * n), _power(x, 2 * n + 1)]
            except CapError:
                break
            outside = [not _in_image(psi, y) for y in pw]
            links.append({"n": n, "x^2n_outside": outside[0], "x^2n+1_outside": outside[1]})
            if not any(outside):
                w = {"x": str(x), "n": n}
                return LemmaReport("difference-growth", params, COUNTEREXAMPLE, w,
                                   {"per_degree": per_degree, "cumulative": cumulative, "chain": links}, 0.0)
        monotone = all(a <= b for a, b in zip(cumulative, cumulative[1:]))
        growing = cumulative[-1] > cumulative[0] if len(cumulative) > 1 else True
    counts = {"per_degree": {str(k): v for k, v in per_degree.items()}, "cumulative": cumulative, "chain": links}
    verdict = CERTIFIED if monotone and growing else COUNTEREXAMPLE
    return LemmaReport("difference-growth", params, verdict, None if verdict == CERTIFIED else {"cumulative": cumulative},
                       counts, tm.millis, [f"witness x = {x}"])


def _power(x: OrePoly, n: int) -> OrePoly:
    r = x.ring.one()
    for _ in range(n):
        r = ore_mul(r, x)
    return r


def _in_image(spec: CarlitzSpec, y: OrePoly) -> bool:
    if spec.phi_T.degree() == 1 and spec.phi_T.lc() == spec.field.one:
        try:
            return carlitz_eval(spec, carlitz_preimage(spec, y)) == y
        except DomainError:
            return False
    return y in _image_upto(spec, y.degree())


LEMMAS = ("centralizer-eq", "count-by-degree", "phik-intersection", "similarity-table", "truncation", "difference-growth")
