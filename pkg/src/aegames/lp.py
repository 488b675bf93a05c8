"""Exact two-phase simplex over Fractions with Bland's anti-cycling rule.

Solves   minimize c.x   subject to   rows (=, <=, >=),  x >= 0.
The tableau is dense but rows skip zero entries during elimination, which is
plenty for the layered-graph programs built in `ae.py`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple | None = None
    value: Fraction | None = None


@dataclass(frozen=True)
class Row:
    coeffs: dict          # variable index -> coefficient
    sense: str            # "=", "<=", ">="
    rhs: Fraction


def _tidy(x):
    # flow LPs stay mostly integral; plain ints are far cheaper than Fractions
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def _pivot(tab: list[list], obj: list, basis: list[int], r: int, col: int) -> None:
    row = tab[r]
    piv = row[col]
    if piv != 1:
        inv = Fraction(1) / piv
        for j, a in enumerate(row):
            if a:
                row[j] = _tidy(a * inv)
    nz = [(j, a) for j, a in enumerate(row) if a]
    for i, other in enumerate(tab):
        if i != r:
            f = other[col]
            if f:
                for j, a in nz:
                    other[j] = _tidy(other[j] - f * a)
    f = obj[col]
    if f:
        for j, a in nz:
            obj[j] = _tidy(obj[j] - f * a)
    basis[r] = col


def _run(tab, obj, basis, allowed: int) -> str:
    """Primal simplex on columns < allowed.  obj holds reduced costs, obj[-1] = -value."""
    while True:
        col = next((j for j in range(allowed) if obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        best_r, best_ratio = None, None
        for i, row in enumerate(tab):
            a = row[col]
            if a > 0:
                ratio = Fraction(row[-1]) / a
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[best_r])):
                    best_r, best_ratio = i, ratio
        if best_r is None:
            return UNBOUNDED
        _pivot(tab, obj, basis, best_r, col)


def simplex(c: Sequence, rows: Sequence[Row], nvars: int) -> LPResult:
    # slack/surplus columns for inequalities, then one artificial per row
    nslack = sum(1 for r in rows if r.sense != "=")
    m = len(rows)
    width = nvars + nslack + m
    tab: list[list] = []
    k = nvars
    for i, r in enumerate(rows):
        line = [0] * (width + 1)
        sign = -1 if r.rhs < 0 else 1
        for j, a in r.coeffs.items():
            line[j] = _tidy(Fraction(a) * sign)
        if r.sense == "<=":
            line[k] = sign
            k += 1
        elif r.sense == ">=":
            line[k] = -sign
            k += 1
        line[nvars + nslack + i] = 1
        line[-1] = _tidy(Fraction(r.rhs) * sign)
        tab.append(line)
    basis = [nvars + nslack + i for i in range(m)]

    # phase one: minimize the sum of artificials
    obj = [0] * (width + 1)
    for j in range(nvars + nslack, width):
        obj[j] = 1
    for row in tab:
        for j, a in enumerate(row):
            if a:
                obj[j] = _tidy(obj[j] - a)
    _run(tab, obj, basis, width)
    if obj[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive remaining artificials out of the basis; drop redundant rows
    real = nvars + nslack
    keep = []
    for i in range(len(tab)):
        if basis[i] >= real:
            col = next((j for j in range(real) if tab[i][j] != 0), None)
            if col is None:
                continue
            _pivot(tab, obj, basis, i, col)
        keep.append(i)
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]
    for row in tab:
        for j in range(real, width):
            row[j] = 0

    # phase two
    obj = [0] * (width + 1)
    for j, cj in enumerate(c):
        obj[j] = _tidy(Fraction(cj))
    for i, b in enumerate(basis):
        f = obj[b]
        if f:
            for j, a in enumerate(tab[i]):
                if a:
                    obj[j] = _tidy(obj[j] - f * a)
    status = _run(tab, obj, basis, real)
    if status != OPTIMAL:
        return LPResult(status)
    x = [Fraction(0)] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            x[b] = Fraction(tab[i][-1])
    return LPResult(OPTIMAL, tuple(x), Fraction(-obj[-1]))
