"""Brute-force reference implementations, written independently of the package."""
from __future__ import annotations

import itertools
from fractions import Fraction


def board_cells(m, n):
    return [(c, r) for c in range(1, m + 1) for r in range(1, n + 1)]


def placement_ok(cells, m, n, caps, col_caps=None, symmetrized=False):
    rows = [0] * (n + 1)
    cols = [0] * (m + 1)
    for c, r in cells:
        rows[r] += 1
        cols[c] += 1
    col_caps = col_caps or [1] * m
    if any(cols[c] > col_caps[c - 1] for c in range(1, m + 1)):
        return False
    perms = itertools.permutations(caps) if symmetrized else [tuple(caps)]
    return any(all(rows[i + 1] <= p[i] for i in range(n)) for p in perms)


def brute_facets(m, n, caps, col_caps=None, symmetrized=False):
    """Maximal admissible placements as frozensets of (column, row)."""
    cells = board_cells(m, n)
    faces = [
        frozenset(sub)
        for k in range(len(cells) + 1)
        for sub in itertools.combinations(cells, k)
        if placement_ok(sub, m, n, caps, col_caps, symmetrized)
    ]
    faces_set = set(faces)
    return {f for f in faces if not any(f | {c} in faces_set for c in cells if c not in f)}


def all_faces(facets):
    out = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(len(f) + 1):
            out.update(frozenset(x) for x in itertools.combinations(f, k))
    return out


def rank_mod(rows, p):
    """Rank of an integer matrix over F_p (p prime) or Q (p = 0), plain Gaussian elimination."""
    M = [[Fraction(x) if p == 0 else x % p for x in row] for row in rows]
    if not M:
        return 0
    r = 0
    for c in range(len(M[0])):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c] if p == 0 else pow(M[r][c], p - 2, p)
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c] * inv
                M[i] = [(a - f * b) if p == 0 else (a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
    return r


def reduced_betti(facets, p):
    """Reduced Betti numbers in degrees 0..dim from the full augmented chain complex."""
    faces = all_faces(facets)
    if not faces:
        return []
    dim = max(len(f) for f in faces) - 1
    by_dim = {d: sorted(tuple(sorted(f)) for f in faces if len(f) == d + 1) for d in range(-1, dim + 1)}

    def boundary(d):
        rows = {f: i for i, f in enumerate(by_dim[d - 1])}
        mat = [[0] * len(by_dim[d]) for _ in rows]
        for j, f in enumerate(by_dim[d]):
            for k in range(len(f)):
                mat[rows[f[:k] + f[k + 1:]]][j] = (-1) ** k
        return mat

    ranks = {d: rank_mod(boundary(d), p) if by_dim[d] and by_dim[d - 1] else 0 for d in range(0, dim + 1)}
    ranks[dim + 1] = 0
    return [len(by_dim[d]) - ranks[d] - ranks[d + 1] for d in range(0, dim + 1)]


def is_shelling_pairwise(facets):
    """For each later F' and earlier F some earlier F'' and v in F' with F cap F' <= F'' cap F' = F' - v."""
    facets = [frozenset(f) for f in facets]
    for j in range(1, len(facets)):
        Fp = facets[j]
        for i in range(j):
            F = facets[i]
            if not any(
                (F & Fp) <= (facets[k] & Fp) and (facets[k] & Fp) == Fp - {v}
                for k in range(j)
                for v in Fp
            ):
                return False
    return True


def in_sdj_by_permutation(blocks, family):
    """Some permutation pi has A_i in K_{pi(i)} for every i; complexes given as sets of frozensets."""
    n = len(blocks)
    return any(all(frozenset(blocks[i]) in family[p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def unavoidable_brute(m, family):
    """Every assignment of [m] to n blocks puts some B_i into K_i (complexes as sets of frozensets)."""
    n = len(family)
    for assign in itertools.product(range(n), repeat=m):
        blocks = [frozenset(x + 1 for x in range(m) if assign[x] == i) for i in range(n)]
        if not any(blocks[i] in family[i] for i in range(n)):
            return False, blocks
    return True, None


def hull_point(points, weights):
    d = len(points[0])
    return tuple(sum(Fraction(w) * Fraction(p[c]) for w, p in zip(weights, points)) for c in range(d))


def longest_chain_brute(elements):
    elements = [frozenset(x) for x in elements]
    best = 0

    def extend(cur, length):
        nonlocal best
        best = max(best, length)
        for y in elements:
            if cur < y:
                extend(y, length + 1)

    for x in elements:
        extend(x, 1)
    return best
