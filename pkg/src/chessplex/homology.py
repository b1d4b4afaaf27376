"""Reduced simplicial homology over prime fields and Q, and connectivity evidence.

Ranks are computed on the augmented chain complex, so degree ``-1`` (the
empty simplex) is part of the computation.  Large complexes are first shrunk
by coreductions: a cell whose boundary, restricted to the surviving cells, is a
single cell ``b`` is removed together with ``b``.  Each such step is an
elementary reduction over the integers, so the surviving cells with the
restricted boundary have the same homology over every field.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import linalg
from .complex import ComplexSpec, ResourceLimitError, SimplicialComplex, bits_of, enumerate_facets, f_vector

FIELDS = {"Q": 0, "F2": 2, "F3": 3, "F5": 5}
DEFAULT_FIELDS = ("Q", "F2", "F3", "F5")
DEFAULT_FACE_LIMIT = 5_000_000
# below this many faces the chain complex is used as is
REDUCE_THRESHOLD = 2_000


def field_char(name: str | int) -> int:
    if isinstance(name, int):
        return name
    key = name.strip().upper()
    if key in ("Q", "QQ", "RATIONALS"):
        return 0
    if key.startswith("F") and key[1:].isdigit():
        p = int(key[1:])
    elif key.isdigit():
        p = int(key)
    else:
        raise ValueError(f"unknown field {name!r}")
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{name!r} is not a prime field")
    return p


def field_name(char: int) -> str:
    return "Q" if char == 0 else f"F{char}"


def _sign(mask: int, v: int) -> int:
    return -1 if (mask & ((1 << v) - 1)).bit_count() % 2 else 1


@dataclass
class BoundaryMatrix:
    """``d_degree : C_degree -> C_(degree-1)``, rows and columns in canonical order."""

    degree: int
    rows: list[tuple[int, ...]]
    cols: list[tuple[int, ...]]
    matrix: sp.csc_matrix

    def columns(self) -> list[dict[int, int]]:
        m = self.matrix
        return [
            dict(zip(m.indices[m.indptr[j]:m.indptr[j + 1]].tolist(), m.data[m.indptr[j]:m.indptr[j + 1]].tolist()))
            for j in range(m.shape[1])
        ]


def _boundary(cols_masks: Sequence[int], row_index: dict[int, int], nrows: int) -> sp.csc_matrix:
    data, indices, indptr = [], [], [0]
    for x in cols_masks:
        entries = []
        for v in bits_of(x):
            i = row_index.get(x ^ (1 << v))
            if i is not None:
                entries.append((i, _sign(x, v)))
        entries.sort()
        for i, s in entries:
            indices.append(i)
            data.append(s)
        indptr.append(len(indices))
    return sp.csc_matrix(
        (np.array(data, dtype=np.int64), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(nrows, len(cols_masks)),
    )


def _canonical(masks: Iterable[int]) -> list[int]:
    return sorted(masks, key=lambda x: tuple(bits_of(x)))


def boundary_matrix(complex: SimplicialComplex, degree: int) -> BoundaryMatrix:
    """The boundary map out of ``degree``-faces; degree 0 is the augmentation."""
    levels = complex.face_masks
    if not 0 <= degree + 1 < len(levels):
        raise ValueError(f"complex has no faces of dimension {degree}")
    cols = _canonical(levels[degree + 1])
    rows = _canonical(levels[degree]) if degree >= 0 else []
    index = {x: i for i, x in enumerate(rows)}
    return BoundaryMatrix(
        degree,
        [tuple(bits_of(x)) for x in rows],
        [tuple(bits_of(x)) for x in cols],
        _boundary(cols, index, len(rows)),
    )


def chain_complex(complex: SimplicialComplex) -> list[BoundaryMatrix]:
    return [boundary_matrix(complex, d) for d in range(0, complex.dim + 1)]


def boundary_squares_vanish(complex: SimplicialComplex) -> bool:
    """Check ``d_(i) o d_(i+1) = 0`` for every degree of the augmented chain complex."""
    mats = chain_complex(complex)
    for lower, upper in zip(mats, mats[1:]):
        if (lower.matrix @ upper.matrix).count_nonzero():
            return False
    return True


def coreduce(cells: Sequence[Iterable[int]], vertex_count: int) -> list[list[int]]:
    """Shrink an augmented chain complex by coreduction pairs.

    ``cells[k]`` holds the masks of the faces with ``k`` vertices (so
    ``cells[0]`` is ``{0}``, the empty face, for a nonvoid complex).  Returns
    the surviving masks, grouped the same way.
    """
    alive: set[int] = set()
    for level in cells:
        alive.update(level)
    count = {x: x.bit_count() for x in alive}
    singles = [1 << v for v in range(vertex_count)]
    queue = deque(sorted(cells[0]) if cells else [])
    opened: set[int] = set()
    while queue:
        a = queue.popleft()
        if a not in alive:
            continue
        k = count[a]
        if k == 1:
            b = next(a ^ (1 << v) for v in bits_of(a) if a ^ (1 << v) in alive)
            alive.discard(a)
            alive.discard(b)
            for x in (b, a):
                for bit in singles:
                    if not x & bit:
                        c = x | bit
                        if c in alive:
                            count[c] -= 1
                            if count[c] <= 1:
                                queue.append(c)
        elif k == 0 and a not in opened:
            opened.add(a)
            for bit in singles:
                if not a & bit:
                    c = a | bit
                    if c in alive and count[c] <= 1:
                        queue.append(c)
    out: list[list[int]] = [[] for _ in cells]
    for x in alive:
        out[x.bit_count()].append(x)
    return [_canonical(level) for level in out]


@dataclass
class Homology:
    """Reduced Betti numbers of one complex over several fields."""

    ranks: dict[str, list[int]]
    minus_one: dict[str, int]
    cells_used: list[int] = field(default_factory=list)


def _augmented_levels(complex: SimplicialComplex, face_limit: int) -> list[list[int]]:
    levels = complex.face_masks
    total = sum(len(level) for level in levels)
    if total > face_limit:
        raise ResourceLimitError(f"{total} faces exceed the limit {face_limit}")
    return [list(level) for level in levels]


def homology(
    complex: SimplicialComplex,
    fields: Sequence[str | int] = DEFAULT_FIELDS,
    method: str = "auto",
    face_limit: int = DEFAULT_FACE_LIMIT,
    rank_method: str = "auto",
) -> Homology:
    """Reduced homology ranks in degrees ``0..dim`` (and ``-1`` separately).

    ``method`` is ``"direct"`` (full chain complex), ``"reduced"`` (after
    coreduction) or ``"auto"``.
    """
    chars = [field_char(f) for f in fields]
    names = [field_name(c) for c in chars]
    dim = complex.dim
    if complex.is_void:
        return Homology({n: [] for n in names}, {n: 0 for n in names}, [])
    levels = _augmented_levels(complex, face_limit)
    if method == "auto":
        method = "reduced" if sum(len(x) for x in levels) > REDUCE_THRESHOLD else "direct"
    if method == "reduced":
        levels = coreduce(levels, complex.vertex_count)
    elif method == "direct":
        levels = [_canonical(level) for level in levels]
    else:
        raise ValueError(f"unknown homology method {method!r}")
    sizes = [len(level) for level in levels]
    # boundary out of level k (faces with k vertices), k = 1..dim+1
    mats: list[list[dict[int, int]] | None] = [None] * len(levels)
    for k in range(1, len(levels)):
        if sizes[k] and sizes[k - 1]:
            index = {x: i for i, x in enumerate(levels[k - 1])}
            mats[k] = BoundaryMatrix(k - 1, [], [], _boundary(levels[k], index, sizes[k - 1])).columns()
    ranks: dict[str, list[int]] = {}
    minus_one: dict[str, int] = {}
    for char, name in zip(chars, names):
        r = [0] * (len(levels) + 1)
        for k in range(1, len(levels)):
            if mats[k] is not None:
                r[k] = linalg.rank(mats[k], sizes[k - 1], char, rank_method)
        betti = [sizes[k] - r[k] - r[k + 1] for k in range(len(levels))]
        minus_one[name] = betti[0]
        ranks[name] = betti[1:dim + 2]
    return Homology(ranks, minus_one, sizes)


def reduced_homology_ranks(complex: SimplicialComplex, field: str | int = "Q", method: str = "auto") -> list[int]:
    """Reduced Betti numbers in degrees ``0..dim`` over one field."""
    h = homology(complex, [field], method)
    return h.ranks[field_name(field_char(field))]


def reduced_rank_minus_one(complex: SimplicialComplex) -> int:
    """1 for the complex ``{emptyset}``, else 0."""
    return 1 if complex.facets == ((),) else 0


def euler_characteristic(complex: SimplicialComplex) -> int:
    return f_vector(complex).euler_characteristic


def euler_from_homology(ranks: Sequence[int], minus_one: int = 0) -> int:
    """``1 + sum (-1)^i rank_i``, with the degree ``-1`` term included."""
    return 1 - minus_one + sum((-1) ** i * r for i, r in enumerate(ranks))


def concentrated_in_top(ranks: Sequence[int], dim: int) -> bool:
    return all(r == 0 for i, r in enumerate(ranks) if i != dim)


# -- connectivity ------------------------------------------------------------


@dataclass
class ConnectivityReport:
    mu: int | None
    bound: str
    hypothesis_ok: bool
    dim: int
    betti: dict[str, list[int]]
    minus_one: dict[str, int]
    verdict: str | None
    nonempty: bool
    note: str = "homology evidence only; homotopy connectivity is not computed"

    def to_json(self) -> dict:
        return {
            "mu": self.mu,
            "bound": self.bound,
            "dim": self.dim,
            "fields": self.betti,
            "minus_one": self.minus_one,
            "verdict": self.verdict,
            "hypothesis_ok": self.hypothesis_ok,
            "nonempty": self.nonempty,
            "note": self.note,
        }


def connectivity_bound(spec: ComplexSpec) -> tuple[int, str, bool]:
    """``(mu, formula, hypothesis_ok)`` for the applicable connectivity theorem."""
    if not spec.unit_columns:
        raise ValueError("connectivity bounds are only known for column caps p = 1")
    if spec.symmetrized:
        bal = spec.balanced
        if bal is None:
            raise ValueError(f"symmetric bound needs caps of the form (nu+1)^s nu^(n-s), got {spec.row_caps}")
        nu, s = bal
        ok = spec.m >= spec.n * (nu + 1) + s - 1
        return nu * spec.n + s - 2, "nu*n+s-2", ok
    mu = min(spec.m - spec.n - 1, sum(spec.row_caps) - 2)
    return mu, "min(m-n-1, k_1+...+k_n-2)", True


def verdict_for(mu: int, betti: dict[str, list[int]], nonempty: bool) -> str:
    if mu >= -1 and not nonempty:
        return "fail"
    for ranks in betti.values():
        if any(r for r in ranks[: max(mu + 1, 0)]):
            return "fail"
    return "pass"


def connectivity_evidence(
    spec: ComplexSpec,
    fields: Sequence[str | int] = DEFAULT_FIELDS,
    facet_limit: int | None = None,
    face_limit: int = DEFAULT_FACE_LIMIT,
    method: str = "auto",
) -> ConnectivityReport:
    mu, bound, ok = connectivity_bound(spec)
    complex = enumerate_facets(spec) if facet_limit is None else enumerate_facets(spec, facet_limit)
    h = homology(complex, fields, method=method, face_limit=face_limit)
    nonempty = any(complex.facets) and complex.dim >= 0
    rep = ConnectivityReport(mu, bound, ok, complex.dim, h.ranks, h.minus_one, None, nonempty)
    if ok:
        rep.verdict = verdict_for(mu, h.ranks, nonempty)
    else:
        rep.note = f"working hypothesis m >= {sum(spec.row_caps) + spec.n - 1} violated; no verdict. " + rep.note
    return rep
