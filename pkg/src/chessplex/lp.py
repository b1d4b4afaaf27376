"""Exact feasibility of ``A x = b, x >= 0`` by the phase-one simplex method.

All arithmetic is on ``Fraction``; Bland's rule prevents cycling.
"""
from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction


def feasible_point(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """A nonnegative solution of ``A x = b``, or ``None`` if there is none."""
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m:
        raise ValueError("row count of A and length of b differ")
    rows: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        if len(row) != n:
            raise ValueError("ragged constraint matrix")
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        # one artificial per row, columns n .. n+m-1
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows.append(row + art + [rhs])
    width = n + m
    basis = list(range(n, n + m))
    # reduced costs of the phase-one objective (sum of artificials)
    cost = [Fraction(0)] * (width + 1)
    for row in rows:
        for j in range(n):
            cost[j] -= row[j]
        cost[width] -= row[width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # cannot happen for a bounded phase-one problem
            raise ArithmeticError("phase-one problem reported unbounded")
        _pivot(rows, cost, leave, enter)
        basis[leave] = enter
    if cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][width]
    return x


def _pivot(rows: list[list[Fraction]], cost: list[Fraction], r: int, c: int) -> None:
    prow = rows[r]
    p = prow[c]
    if p != 1:
        for j in range(len(prow)):
            if prow[j]:
                prow[j] /= p
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(rows):
        if i != r:
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
    f = cost[c]
    if f:
        for j in nz:
            cost[j] -= f * prow[j]
