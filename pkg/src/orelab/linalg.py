"""Exact linear algebra over the raw-value interface of :mod:`orelab.fields`.

Vectors are sparse dictionaries ``{row: value}`` holding only nonzero entries.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def first_dependency(field, columns: Sequence[dict]) -> dict | None:
    """Kernel vector supported on the columns up to the first dependent one.

    Columns are processed left to right against an echelon basis of the
    earlier ones. The first column that reduces to zero is a free column; the
    returned vector ``{column: coefficient}`` sets its coefficient to 1 and is
    the unique kernel vector supported on it and the pivot columns before it.
    Returns ``None`` when the columns are independent.
    """
    add, mul, neg, inv, is_zero = field.add, field.mul, field.neg, field.inv, field.is_zero
    basis = []  # (pivot_row, vector, combination)
    for j, col in enumerate(columns):
        v = dict(col)
        combo = {j: field.one}
        for pr, bv, bc in basis:
            c = v.get(pr)
            if c is None:
                continue
            nc = neg(c)
            for r, x in bv.items():
                y = add(v.get(r, field.zero), mul(nc, x))
                if is_zero(y):
                    v.pop(r, None)
                else:
                    v[r] = y
            for r, x in bc.items():
                y = add(combo.get(r, field.zero), mul(nc, x))
                if is_zero(y):
                    combo.pop(r, None)
                else:
                    combo[r] = y
        if not v:
            return combo
        pr = min(v)
        s = inv(v[pr])
        basis.append((pr, {r: mul(s, x) for r, x in v.items()}, {r: mul(s, x) for r, x in combo.items()}))
    return None


def nullspace(field, rows: Sequence[dict], ncols: int) -> list[dict]:
    """Basis of ``{x : rows * x = 0}`` by reduced row echelon form.

    Each basis vector has one free variable set to 1; vectors are listed by
    increasing free-variable index.
    """
    add, mul, neg, inv, is_zero = field.add, field.mul, field.neg, field.inv, field.is_zero
    pivots = {}  # column -> row vector (normalized, fully reduced)
    for row in rows:
        v = dict(row)
        for c in sorted(pivots):
            x = v.get(c)
            if x is None:
                continue
            nx = neg(x)
            for k, y in pivots[c].items():
                z = add(v.get(k, field.zero), mul(nx, y))
                if is_zero(z):
                    v.pop(k, None)
                else:
                    v[k] = z
        if not v:
            continue
        c0 = min(v)
        s = inv(v[c0])
        v = {k: mul(s, y) for k, y in v.items()}
        for c, pv in pivots.items():
            x = pv.get(c0)
            if x is None:
                continue
            nx = neg(x)
            for k, y in v.items():
                z = add(pv.get(k, field.zero), mul(nx, y))
                if is_zero(z):
                    pv.pop(k, None)
                else:
                    pv[k] = z
        pivots[c0] = v
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        vec = {f: field.one}
        for c, pv in pivots.items():
            x = pv.get(f)
            if x is not None:
                vec[c] = neg(x)
        basis.append(vec)
    return basis


def rank(field, rows: Sequence[dict], ncols: int) -> int:
    return ncols - len(nullspace(field, rows, ncols))


def nullspace_fraction_free(rows: Sequence[dict], ncols: int) -> list[dict]:
    """Rational nullspace using integer row reduction.

    Denominators are cleared row by row first; elimination then works on
    primitive integer rows (content removed after each update), so no
    fractions appear until the final back-substitution. Output vectors have
    ``Fraction`` entries and are normalized like :func:`nullspace`.
    """
    work = []
    for row in rows:
        if not row:
            continue
        m = lcm(*(Fraction(x).denominator for x in row.values()))
        int_row = {k: int(Fraction(x) * m) for k, x in row.items() if x}
        if int_row:
            work.append(_primitive(int_row))
    pivots = {}  # column -> primitive integer row with that leading column
    for v in work:
        for c in sorted(pivots):
            x = v.get(c)
            if not x:
                continue
            pv = pivots[c]
            pc = pv[c]
            keys = set(v) | set(pv)
            v = {k: pc * v.get(k, 0) - x * pv.get(k, 0) for k in keys}
            v = {k: y for k, y in v.items() if y}
            if not v:
                break
            v = _primitive(v)
        if not v:
            continue
        c0 = min(v)
        for c, pv in list(pivots.items()):
            x = pv.get(c0)
            if not x:
                continue
            keys = set(v) | set(pv)
            nv = {k: v[c0] * pv.get(k, 0) - x * v.get(k, 0) for k in keys}
            pivots[c] = _primitive({k: y for k, y in nv.items() if y})
        pivots[c0] = v
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        vec = {f: Fraction(1)}
        for c, pv in pivots.items():
            x = pv.get(f)
            if x:
                vec[c] = Fraction(-x, pv[c])
        basis.append(vec)
    return basis


def _primitive(v: dict) -> dict:
    g = 0
    for x in v.values():
        g = gcd(g, x)
    lead = v[min(v)]
    if lead < 0:
        g = -g
    if g in (0, 1):
        return v
    return {k: x // g for k, x in v.items()}
