"""Multiple chessboard complexes, their row symmetrizations and deleted joins.

Vertices of a chessboard complex are the cells of an ``m x n`` board.  A cell
``(column j, row i)`` (both 1-based) has global vertex index
``(j - 1) * n + (i - 1)``; every module uses this index for orientations and
serialization.

Generic complexes are stored by their facets, each a sorted tuple of 0-based
vertex indices.  Internally faces are also handled as integer bitmasks.
"""
from __future__ import annotations

import itertools
import json
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

DEFAULT_FACET_LIMIT = 10**7


class ResourceLimitError(RuntimeError):
    """Raised when an enumeration would exceed its configured size guard."""


class Cell(NamedTuple):
    column: int
    row: int


RookPlacement = frozenset  # frozenset[Cell]


def bits_of(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    out = 0
    for v in vertices:
        out |= 1 << v
    return out


@dataclass(frozen=True)
class ComplexSpec:
    """Parameters of ``Delta_{m,n}^{k;p}`` or of its row symmetrization."""

    m: int
    n: int
    row_caps: tuple[int, ...]
    col_caps: tuple[int, ...]
    symmetrized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "row_caps", tuple(int(k) for k in self.row_caps))
        object.__setattr__(self, "col_caps", tuple(int(p) for p in self.col_caps))
        if self.m < 0 or self.n < 0:
            raise ValueError("board dimensions must be non-negative")
        if len(self.row_caps) != self.n:
            raise ValueError(f"expected {self.n} row caps, got {len(self.row_caps)}")
        if len(self.col_caps) != self.m:
            raise ValueError(f"expected {self.m} column caps, got {len(self.col_caps)}")
        if any(k < 0 for k in self.row_caps) or any(p < 0 for p in self.col_caps):
            raise ValueError("caps must be non-negative")
        if self.symmetrized and any(p != 1 for p in self.col_caps):
            raise ValueError("symmetrization is only supported for column caps p = 1")

    @classmethod
    def chessboard(cls, m, n, row_caps, col_caps=None, symmetrized=False) -> ComplexSpec:
        if col_caps is None:
            col_caps = (1,) * m
        elif isinstance(col_caps, int):
            col_caps = (col_caps,) * m
        return cls(m, n, tuple(row_caps), tuple(col_caps), symmetrized)

    @classmethod
    def symmetric(cls, m: int, n: int, nu: int, s: int) -> ComplexSpec:
        """``Sigma_{m,n}`` with caps ``nu+1`` in ``s`` rows and ``nu`` in the rest."""
        if not 0 <= s <= n or nu < 0:
            raise ValueError(f"need nu >= 0 and 0 <= s <= n, got nu={nu}, s={s}")
        caps = (nu + 1,) * s + (nu,) * (n - s)
        return cls(m, n, caps, (1,) * m, True)

    @property
    def unit_columns(self) -> bool:
        return all(p == 1 for p in self.col_caps)

    @property
    def balanced(self) -> tuple[int, int] | None:
        """``(nu, s)`` when the caps are ``(nu+1)^s nu^(n-s)`` up to order."""
        if not self.row_caps:
            return None
        lo, hi = min(self.row_caps), max(self.row_caps)
        if hi == lo:
            return lo, 0
        if hi == lo + 1:
            return lo, sum(1 for k in self.row_caps if k == hi)
        return None

    @property
    def working_hypothesis(self) -> bool:
        """``m >= k_1 + ... + k_n + n - 1``."""
        return self.m >= sum(self.row_caps) + self.n - 1

    def index(self, cell: Cell) -> int:
        self.check_cell(cell)
        return (cell[0] - 1) * self.n + (cell[1] - 1)

    def cell(self, index: int) -> Cell:
        return Cell(index // self.n + 1, index % self.n + 1)

    def check_cell(self, cell) -> None:
        column, row = cell
        if not (1 <= column <= self.m and 1 <= row <= self.n):
            raise ValueError(f"cell {tuple(cell)} is off the {self.m}x{self.n} board")

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "caps": list(self.row_caps),
            "col_caps": list(self.col_caps),
            "symmetrized": self.symmetrized,
        }


@dataclass(frozen=True)
class LabeledPartition:
    """Ordered tuple ``(A_1, ..., A_n)`` of pairwise disjoint subsets of ``[m]``."""

    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set[int] = set()
        for b in blocks:
            if any(not isinstance(x, int) or x < 1 for x in b):
                raise ValueError(f"block elements must be positive integers: {sorted(b)}")
            if seen & b:
                raise ValueError(f"blocks are not disjoint: {self}")
            seen |= b

    @classmethod
    def of(cls, *blocks: Iterable[int]) -> LabeledPartition:
        return cls(tuple(frozenset(b) for b in blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def __repr__(self) -> str:
        inner = ", ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks)
        return f"LabeledPartition(({inner}))"

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def support(self) -> frozenset:
        return frozenset().union(*self.blocks)

    def sorted_blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(b)) for b in self.blocks)

    def cells(self) -> frozenset:
        return frozenset(Cell(x, i) for i, b in enumerate(self.blocks, 1) for x in b)

    @classmethod
    def from_cells(cls, cells: Iterable, n: int) -> LabeledPartition:
        rows: list[set[int]] = [set() for _ in range(n)]
        for column, row in cells:
            rows[row - 1].add(column)
        return cls(tuple(frozenset(r) for r in rows))


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A finite simplicial complex given by its facets.

    ``facets == ()`` is the void complex; ``facets == ((),)`` is the complex
    whose only face is the empty simplex.
    """

    vertex_count: int
    facets: tuple[tuple[int, ...], ...]
    vertex_labels: tuple | None = None
    spec: ComplexSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        facets = tuple(tuple(sorted(set(f))) for f in self.facets)
        object.__setattr__(self, "facets", facets)
        for f in facets:
            if f and (f[0] < 0 or f[-1] >= self.vertex_count):
                raise ValueError(f"facet {f} has a vertex outside 0..{self.vertex_count - 1}")
        if len(set(facets)) != len(facets):
            raise ValueError("duplicate facets")
        sizes = {len(f) for f in facets}
        if len(sizes) > 1:
            masks = self.masks
            by_size = sorted(range(len(facets)), key=lambda i: len(facets[i]))
            for a, i in enumerate(by_size):
                for j in by_size[a + 1:]:
                    if len(facets[j]) > len(facets[i]) and masks[i] & masks[j] == masks[i]:
                        raise ValueError(f"facet {facets[i]} is contained in {facets[j]}")

    @classmethod
    def from_faces(cls, vertex_count: int, faces: Iterable[Iterable[int]], **kw) -> SimplicialComplex:
        """Build from any generating set of faces, keeping the maximal ones."""
        masks = sorted({mask_of(f) for f in faces}, key=lambda x: -x.bit_count())
        kept: list[int] = []
        for x in masks:
            if not any(x & y == x for y in kept):
                kept.append(x)
        facets = sorted(tuple(bits_of(x)) for x in kept)
        return cls(vertex_count, tuple(facets), **kw)

    @classmethod
    def simplex(cls, vertex_count: int) -> SimplicialComplex:
        return cls(vertex_count, (tuple(range(vertex_count)),))

    @classmethod
    def skeleton(cls, vertex_count: int, k: int) -> SimplicialComplex:
        """The ``k``-skeleton of the full simplex on ``vertex_count`` vertices."""
        size = min(k + 1, vertex_count)
        if size < 0:
            return cls(vertex_count, ())
        return cls(vertex_count, tuple(itertools.combinations(range(vertex_count), size)))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(f) for f in self.facets)

    @property
    def is_void(self) -> bool:
        return not self.facets

    @property
    def dim(self) -> int:
        """Dimension; ``-1`` for ``{emptyset}`` and, by convention, for the void complex."""
        return max((len(f) for f in self.facets), default=0) - 1

    @property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    def contains(self, face: Iterable[int]) -> bool:
        x = mask_of(face)
        if x >> self.vertex_count:
            return False
        return any(x & y == x for y in self.masks)

    @cached_property
    def face_masks(self) -> tuple[frozenset, ...]:
        """All faces as bitmasks, grouped by size (index ``d + 1`` holds the ``d``-faces)."""
        if not self.facets:
            return ()
        levels: list[set[int]] = [set() for _ in range(self.dim + 2)]
        frontier = set(self.masks)
        for x in frontier:
            levels[x.bit_count()].add(x)
        # walk down one size at a time so each face is produced from a single level
        for size in range(self.dim + 1, 0, -1):
            below = levels[size - 1]
            for x in levels[size]:
                y = x
                while y:
                    low = y & -y
                    below.add(x ^ low)
                    y ^= low
        return tuple(frozenset(level) for level in levels)

    def faces(self, d: int) -> list[tuple[int, ...]]:
        """The ``d``-dimensional faces in canonical (lexicographic) order."""
        levels = self.face_masks
        if not 0 <= d + 1 < len(levels):
            return []
        return sorted(tuple(bits_of(x)) for x in levels[d + 1])

    def label(self, v: int):
        return self.vertex_labels[v] if self.vertex_labels else v


@dataclass(frozen=True)
class FVector:
    counts: tuple[int, ...]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** i * c for i, c in enumerate(self.counts))

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)

    def __getitem__(self, i):
        return self.counts[i]


def f_vector(complex: SimplicialComplex) -> FVector:
    levels = complex.face_masks
    return FVector(tuple(len(level) for level in levels[1:]))


# -- chessboard complexes ---------------------------------------------------


def _row_counts(spec: ComplexSpec, placement) -> tuple[list[int], list[int]]:
    rows = [0] * spec.n
    cols = [0] * spec.m
    for cell in placement:
        spec.check_cell(cell)
        rows[cell[1] - 1] += 1
        cols[cell[0] - 1] += 1
    return rows, cols


def _counts_admissible(spec: ComplexSpec, counts: Sequence[int]) -> bool:
    if spec.symmetrized:
        # a permutation of the caps dominating the counts exists iff the
        # sorted sequences compare componentwise
        return all(c <= k for c, k in zip(sorted(counts), sorted(spec.row_caps)))
    return all(c <= k for c, k in zip(counts, spec.row_caps))


def is_simplex(spec: ComplexSpec, placement: Iterable) -> bool:
    """Whether a set of cells is a face of the (symmetrized) multiple chessboard complex."""
    cells = set(placement)
    rows, cols = _row_counts(spec, cells)
    if any(c > p for c, p in zip(cols, spec.col_caps)):
        return False
    return _counts_admissible(spec, rows)


def _facet_count_vectors(spec: ComplexSpec) -> list[tuple[int, ...]]:
    """Row-count vectors of the maximal placements (unit column caps only)."""
    top = max(spec.row_caps, default=0)
    ranges = [range(top + 1) if spec.symmetrized else range(k + 1) for k in spec.row_caps]
    out = []
    for counts in itertools.product(*ranges):
        total = sum(counts)
        if total > spec.m or not _counts_admissible(spec, counts):
            continue
        if total < spec.m:
            grow = list(counts)
            extendable = False
            for i in range(spec.n):
                grow[i] += 1
                if _counts_admissible(spec, grow):
                    extendable = True
                grow[i] -= 1
                if extendable:
                    break
            if extendable:
                continue
        out.append(counts)
    return out


def _multinomial(m: int, counts: Sequence[int]) -> int:
    rest = m - sum(counts)
    return math.factorial(m) // (math.prod(math.factorial(c) for c in counts) * math.factorial(rest))


def _placements_with_counts(m: int, counts: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All ordered tuples of disjoint column sets of the given sizes (columns 1-based)."""
    n = len(counts)

    def rec(i: int, free: tuple[int, ...], acc: list):
        if i == n:
            yield tuple(acc)
            return
        for cols in itertools.combinations(free, counts[i]):
            chosen = set(cols)
            acc.append(cols)
            yield from rec(i + 1, tuple(c for c in free if c not in chosen), acc)
            acc.pop()

    yield from rec(0, tuple(range(1, m + 1)), [])


def _generic_facets(spec: ComplexSpec, limit: int) -> list[tuple[int, ...]]:
    """Maximal placements for arbitrary column caps, by depth-first search over cells."""
    n, m = spec.n, spec.m
    cells = [(j, i) for j in range(1, m + 1) for i in range(1, n + 1)]
    rows = [0] * n
    cols = [0] * m
    chosen: list[int] = []
    out: list[tuple[int, ...]] = []

    def fits(j, i):
        return rows[i - 1] < spec.row_caps[i - 1] and cols[j - 1] < spec.col_caps[j - 1]

    def rec(pos: int):
        if pos == len(cells):
            if not any(fits(j, i) for j, i in cells if (j - 1) * n + (i - 1) not in chosen_set):
                out.append(tuple(chosen))
                if len(out) > limit:
                    raise ResourceLimitError(f"more than {limit} facets")
            return
        j, i = cells[pos]
        if fits(j, i):
            rows[i - 1] += 1
            cols[j - 1] += 1
            chosen.append(pos)
            chosen_set.add(pos)
            rec(pos + 1)
            chosen_set.discard(pos)
            chosen.pop()
            rows[i - 1] -= 1
            cols[j - 1] -= 1
        rec(pos + 1)

    chosen_set: set[int] = set()
    rec(0)
    return out


def facet_count_bound(spec: ComplexSpec) -> int:
    """A cheap upper bound on the number of facets, used by the enumeration guard."""
    if spec.unit_columns:
        return sum(_multinomial(spec.m, c) for c in _facet_count_vectors(spec))
    per_row = [sum(math.comb(spec.m, t) for t in range(min(k, spec.m) + 1)) for k in spec.row_caps]
    return math.prod(per_row)


def enumerate_facets(spec: ComplexSpec, limit: int = DEFAULT_FACET_LIMIT) -> SimplicialComplex:
    """All maximal placements, in canonical order.

    Canonical order: descending row-size vector (lexicographic), then the
    sorted list of global cell indices, ascending.
    """
    bound = facet_count_bound(spec)
    if bound > limit:
        raise ResourceLimitError(f"facet count bound {bound} exceeds limit {limit}")
    n = spec.n
    keyed = []
    if spec.unit_columns:
        for counts in _facet_count_vectors(spec):
            for blocks in _placements_with_counts(spec.m, counts):
                facet = sorted((x - 1) * n + i for i, b in enumerate(blocks) for x in b)
                keyed.append((tuple(-c for c in counts), tuple(facet)))
    else:
        for facet in _generic_facets(spec, limit):
            counts = [0] * n
            for v in facet:
                counts[v % n] += 1
            keyed.append((tuple(-c for c in counts), facet))
    keyed.sort()
    labels = tuple(spec.cell(v) for v in range(spec.m * n))
    return SimplicialComplex(spec.m * n, tuple(f for _, f in keyed), labels, spec)


def facet_partition(spec: ComplexSpec, facet: Iterable[int]) -> LabeledPartition:
    """Read a facet (global cell indices) as ``(A_1, ..., A_n)``, ``A_i`` = columns used in row i."""
    rows: list[set[int]] = [set() for _ in range(spec.n)]
    for v in facet:
        rows[v % spec.n].add(v // spec.n + 1)
    return LabeledPartition(tuple(frozenset(r) for r in rows))


def partition_facet(spec: ComplexSpec, a: LabeledPartition) -> tuple[int, ...]:
    if len(a) != spec.n:
        raise ValueError(f"expected {spec.n} blocks, got {len(a)}")
    return tuple(sorted(spec.index(c) for c in a.cells()))


def symmetrized_complex_as_labeled(spec: ComplexSpec, limit: int = DEFAULT_FACET_LIMIT) -> Iterator[LabeledPartition]:
    """Stream the facets of a symmetrized complex as labeled partitions, canonical order."""
    if not spec.symmetrized:
        raise ValueError("expected a symmetrized spec")
    complex = enumerate_facets(spec, limit)
    for facet in complex.facets:
        yield facet_partition(spec, facet)


def deleted_join_membership(family: Sequence[SimplicialComplex], a: LabeledPartition) -> bool:
    """``A_i`` is a face of ``K_i`` for every ``i`` (ordered deleted join)."""
    if len(family) != len(a):
        raise ValueError(f"{len(family)} complexes but {len(a)} blocks")
    for K, block in zip(family, a.blocks):
        check_block(K, block)
    return all(K.contains(x - 1 for x in block) for K, block in zip(family, a.blocks))


def check_block(K: SimplicialComplex, block) -> None:
    if block and max(block) > K.vertex_count:
        raise ValueError(f"block {sorted(block)} mentions a vertex outside [{K.vertex_count}]")


# -- serialization ----------------------------------------------------------


def complex_to_json(complex: SimplicialComplex) -> dict:
    if complex.spec is not None:
        out = complex.spec.to_dict()
    else:
        out = {"vertex_count": complex.vertex_count}
    out["facets"] = [list(f) for f in complex.facets]
    return out


def complex_from_json(data: dict | str) -> SimplicialComplex:
    if isinstance(data, str):
        data = json.loads(data)
    facets = tuple(tuple(f) for f in data["facets"])
    if "m" in data:
        spec = ComplexSpec(
            data["m"], data["n"], tuple(data["caps"]),
            tuple(data.get("col_caps", [1] * data["m"])), bool(data.get("symmetrized", False)),
        )
        labels = tuple(spec.cell(v) for v in range(spec.m * spec.n))
        return SimplicialComplex(spec.m * spec.n, facets, labels, spec)
    return SimplicialComplex(data["vertex_count"], facets)
