"""Exact matrix rank over prime fields and the rationals.

Matrices are passed as a list of sparse columns (``{row: value}`` dicts with
integer entries).  Characteristic ``0`` means the rationals.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

# entry counts above which the dense routines are not used
DENSE_LIMIT_PRIME = 1_000_000
DENSE_LIMIT_RATIONAL = 40_000


def rank(columns: list[dict[int, int]], nrows: int, char: int, method: str = "auto") -> int:
    ncols = len(columns)
    if nrows == 0 or ncols == 0:
        return 0
    if method == "auto":
        limit = DENSE_LIMIT_RATIONAL if char == 0 else DENSE_LIMIT_PRIME
        method = "dense" if nrows * ncols <= limit else "sparse"
    if method == "dense":
        dense = to_dense(columns, nrows)
        if char == 0:
            return rank_dense_rational(dense)
        return rank_dense_mod_p(dense, char)
    if method != "sparse":
        raise ValueError(f"unknown rank method {method!r}")
    if char == 2:
        return rank_gf2(columns)
    return rank_sparse(columns, char)


def to_dense(columns: list[dict[int, int]], nrows: int) -> np.ndarray:
    out = np.zeros((nrows, len(columns)), dtype=np.int64)
    for j, col in enumerate(columns):
        for i, v in col.items():
            out[i, j] = v
    return out


def rank_dense_mod_p(a: np.ndarray, p: int) -> int:
    a = np.array(a, dtype=np.int64) % p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1:, c]
        rows = np.flatnonzero(below)
        if rows.size:
            rows += r + 1
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        r += 1
    return r


def rank_dense_rational(a) -> int:
    """Fraction-free (Bareiss) elimination over the integers."""
    m = [[int(x) for x in row] for row in np.asarray(a).tolist()]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        pv = pr[c]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (pv * row[j] - f * pr[j]) // prev
            row[c] = 0
        prev = pv
        r += 1
        if r == nrows:
            break
    return r


def rank_gf2(columns: list[dict[int, int]]) -> int:
    pivots: dict[int, int] = {}
    r = 0
    for col in columns:
        x = 0
        for i, v in col.items():
            if v % 2:
                x |= 1 << i
        while x:
            low = x.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = x
                r += 1
                break
            x ^= other
    return r


def rank_sparse(columns: list[dict[int, int]], char: int) -> int:
    """Column reduction keyed on the largest nonzero row (pivot columns normalized)."""
    if char == 0:
        one = Fraction(1)

        def norm(col):
            return {i: Fraction(v) for i, v in col.items() if v}

        def inv(v):
            return one / v
    else:
        def norm(col):
            return {i: v % char for i, v in col.items() if v % char}

        def inv(v):
            return pow(v, -1, char)

    pivots: dict[int, dict] = {}
    r = 0
    for raw in columns:
        col = norm(raw)
        while col:
            low = max(col)
            piv = pivots.get(low)
            if piv is None:
                scale = inv(col[low])
                if char == 0:
                    pivots[low] = {i: v * scale for i, v in col.items()}
                else:
                    pivots[low] = {i: v * scale % char for i, v in col.items()}
                r += 1
                break
            f = col[low]
            for i, v in piv.items():
                nv = col.get(i, 0) - f * v
                if char:
                    nv %= char
                if nv:
                    col[i] = nv
                else:
                    col.pop(i, None)
    return r
