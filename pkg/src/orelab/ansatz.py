"""Bounded-degree solution spaces of conditions that are linear over a prime field.

Conditions such as x*u = u*x are not K-linear in the coefficients of x
(Frobenius and derivations get in the way) but they are linear over the prime
field F_p, or over QQ in characteristic zero. We pick a finite list of
*unknown* elements spanning the search space over that base, apply the
condition to each, flatten the results to base coordinates and solve the
resulting homogeneous system exactly.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import flint

from .fields import QQ, ExtensionField, PrimeField, RationalField, RationalFunctionField
from .linalg import nullspace, nullspace_fraction_free


def base_field(field):
    """The field over which conditions are solved: F_p or QQ."""
    if isinstance(field, (PrimeField, ExtensionField)):
        return PrimeField(field.p)
    if isinstance(field, RationalFunctionField):
        return PrimeField(field.characteristic) if field.characteristic else QQ
    if isinstance(field, RationalField):
        return QQ
    raise TypeError(f"no linear base for {field}")


def field_basis(field, cap: int = 4) -> list:
    """Raw elements spanning the coefficient search space over the base field.

    Finite fields give their F_p digit basis; rational function fields give
    the monomials of total degree at most ``cap``.
    """
    if isinstance(field, PrimeField):
        return [1]
    if isinstance(field, ExtensionField):
        return [field.p ** j for j in range(field.degree)]
    if isinstance(field, RationalField):
        return [QQ.one]
    if isinstance(field, RationalFunctionField):
        out = []
        for total in range(cap + 1):
            for exps in _compositions(total, field.nvars):
                out.append(field.from_dicts({exps: 1}))
        return out
    raise TypeError(f"no coefficient basis for {field}")


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def coordinates(field, items: Sequence[dict]) -> list[dict]:
    """Flatten ``{position: raw K value}`` images into base-field coordinate vectors.

    Rational function values at a given position are first brought to a common
    denominator across all images so that coordinates are polynomial
    coefficients; the scaling is per position and does not change the kernel.
    """
    if isinstance(field, (PrimeField, ExtensionField)):
        out = []
        for img in items:
            vec = {}
            for pos, a in img.items():
                for j, c in enumerate(field.digits(a)):
                    if c:
                        vec[(pos, j)] = c
            out.append(vec)
        return out
    if isinstance(field, RationalField):
        return [{pos: a for pos, a in img.items() if a} for img in items]
    if isinstance(field, RationalFunctionField):
        dens = {}
        for img in items:
            for pos, a in img.items():
                if not a.den.is_one():
                    l = dens.get(pos)
                    dens[pos] = a.den if l is None else l * a.den / l.gcd(a.den)
        out = []
        for img in items:
            vec = {}
            for pos, a in img.items():
                num = a.num
                if pos in dens:
                    num = num * (dens[pos] / a.den)
                for exps, c in num.to_dict().items():
                    if isinstance(c, flint.fmpq):
                        c = Fraction(int(c.p), int(c.q))
                    else:
                        c = int(c)
                    if c:
                        vec[(pos, exps)] = c
            out.append(vec)
        return out
    raise TypeError(f"cannot flatten values of {field}")


def solve_columns(base, columns: Sequence[dict], ncols: int) -> list[dict]:
    """Nullspace of the matrix whose columns are ``columns``."""
    rows = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            rows.setdefault(key, {})[j] = v
    keys = sorted(rows, key=repr)
    row_list = [rows[k] for k in keys]
    if base is QQ:
        return nullspace_fraction_free(row_list, ncols)
    return nullspace(base, row_list, ncols)


def bounded_kernel(field, unknowns: Sequence, condition: Callable, items: Callable[[object], dict]) -> list[list]:
    """Base-field kernel of ``condition`` restricted to the span of ``unknowns``.

    ``items(element)`` lists the nonzero coefficients of an element as
    ``{position: raw}``. Returns basis vectors as coefficient lists aligned
    with ``unknowns``.
    """
    images = [items(condition(u)) for u in unknowns]
    cols = coordinates(field, images)
    base = base_field(field)
    basis = solve_columns(base, cols, len(unknowns))
    out = []
    for vec in basis:
        out.append([vec.get(j, base.zero) for j in range(len(unknowns))])
    return out
