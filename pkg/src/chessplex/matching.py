"""Membership graphs of labeled partitions, perfect matchings and unavoidability.

``family`` is a list of complexes on the vertex set ``[m]`` (vertex ``x`` of a
block is vertex ``x - 1`` of the complex).  The empty block is a face of every
nonvoid complex.
"""
from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

from .complex import LabeledPartition, ResourceLimitError, SimplicialComplex, check_block

DEFAULT_PARTITION_LIMIT = 4**12


@dataclass(frozen=True)
class EpsilonGraph:
    """``adjacency[i][j]`` is true iff ``A_i`` is a face of ``K_j`` (0-based indices)."""

    n: int
    adjacency: tuple[tuple[bool, ...], ...]

    def neighbors(self, i: int) -> list[int]:
        return [j for j, e in enumerate(self.adjacency[i]) if e]

    def complement(self) -> EpsilonGraph:
        return EpsilonGraph(self.n, tuple(tuple(not e for e in row) for row in self.adjacency))

    def to_json(self) -> list[list[int]]:
        return [[int(e) for e in row] for row in self.adjacency]


@dataclass(frozen=True)
class MatchingResult:
    """Either a perfect matching (row ``i`` to column ``matching[i]``) or a Hall violator."""

    matching: tuple[int, ...] | None
    violator: frozenset | None = None
    neighborhood: frozenset | None = None

    def __bool__(self) -> bool:
        return self.matching is not None

    def to_json(self) -> dict:
        if self.matching is not None:
            return {"perfect": True, "matching": [j + 1 for j in self.matching]}
        return {
            "perfect": False,
            "hall_violator": sorted(i + 1 for i in self.violator),
            "neighborhood": sorted(j + 1 for j in self.neighborhood),
        }


def _contains(K: SimplicialComplex, block) -> bool:
    check_block(K, block)
    return K.contains(x - 1 for x in block)


def epsilon_graph(a: LabeledPartition, family: Sequence[SimplicialComplex]) -> EpsilonGraph:
    if len(family) != len(a):
        raise ValueError(f"{len(family)} complexes but {len(a)} blocks")
    return EpsilonGraph(len(a), tuple(tuple(_contains(K, A) for K in family) for A in a.blocks))


def non_epsilon_graph(a: LabeledPartition, family: Sequence[SimplicialComplex]) -> EpsilonGraph:
    return epsilon_graph(a, family).complement()


def has_perfect_matching(g: EpsilonGraph) -> MatchingResult:
    """Augmenting paths; on failure the rows reachable from a stuck row form a Hall violator."""
    n = g.n
    adj = [g.neighbors(i) for i in range(n)]
    match_col: list[int | None] = [None] * n
    match_row: list[int | None] = [None] * n

    def augment(i: int, seen_cols: set[int], seen_rows: set[int]) -> bool:
        seen_rows.add(i)
        for j in adj[i]:
            if j in seen_cols:
                continue
            seen_cols.add(j)
            if match_col[j] is None or augment(match_col[j], seen_cols, seen_rows):
                match_col[j] = i
                match_row[i] = j
                return True
        return False

    for i in range(n):
        cols: set[int] = set()
        rows: set[int] = set()
        if not augment(i, cols, rows):
            return MatchingResult(None, frozenset(rows), frozenset(cols))
    return MatchingResult(tuple(match_row))


def in_symmetrized_deleted_join(a: LabeledPartition, family: Sequence[SimplicialComplex]) -> bool:
    """Some reordering of the family contains ``A_i`` in its ``i``-th complex for all ``i``."""
    return bool(has_perfect_matching(epsilon_graph(a, family)))


@dataclass(frozen=True)
class UnavoidabilityResult:
    unavoidable: bool
    witness: LabeledPartition | None = None

    def __bool__(self) -> bool:
        return self.unavoidable

    def to_json(self) -> dict:
        out: dict = {"unavoidable": self.unavoidable}
        if self.witness is not None:
            out["witness"] = [sorted(b) for b in self.witness.blocks]
        return out


def _face_sets(family: Sequence[SimplicialComplex]) -> list[set[int]]:
    out = []
    for K in family:
        faces: set[int] = set()
        for level in K.face_masks:
            faces.update(level)
        out.append(faces)
    return out


def _submasks(x: int):
    sub = x
    while True:
        yield sub
        if not sub:
            return
        sub = (sub - 1) & x


def _mask_blocks(masks: Sequence[int]) -> LabeledPartition:
    return LabeledPartition(tuple(frozenset(v + 1 for v in range(x.bit_length()) if x >> v & 1) for x in masks))


def is_collectively_unavoidable(
    family: Sequence[SimplicialComplex], m: int | None = None, limit: int = DEFAULT_PARTITION_LIMIT
) -> UnavoidabilityResult:
    """Every ordered partition ``B_1 + ... + B_n = [m]`` (empty blocks allowed) has some ``B_i in K_i``.

    Blocks are chosen one at a time among the non-faces of the matching
    complex, so only candidate violators are visited.
    """
    if not family:
        raise ValueError("empty family")
    m = family[0].vertex_count if m is None else m
    if any(K.vertex_count != m for K in family):
        raise ValueError("all complexes must live on the same vertex set")
    n = len(family)
    if n**m > limit:
        raise ResourceLimitError(f"{n}^{m} ordered partitions exceed the limit {limit}")
    faces = _face_sets(family)
    full = (1 << m) - 1
    chosen: list[int] = []

    def rec(i: int, rest: int) -> bool:
        if i == n - 1:
            if rest in faces[i]:
                return False
            chosen.append(rest)
            return True
        for sub in _submasks(rest):
            if sub in faces[i]:
                continue
            chosen.append(sub)
            if rec(i + 1, rest ^ sub):
                return True
            chosen.pop()
        return False

    if rec(0, full):
        return UnavoidabilityResult(False, _mask_blocks(chosen))
    return UnavoidabilityResult(True)


def ordered_partitions(m: int, n: int):
    """All ordered partitions of ``[m]`` into ``n`` possibly empty blocks."""
    for assignment in itertools.product(range(n), repeat=m):
        blocks: list[set[int]] = [set() for _ in range(n)]
        for x, i in enumerate(assignment, 1):
            blocks[i].add(x)
        yield LabeledPartition(tuple(frozenset(b) for b in blocks))


def unavoidable_via_matching(family: Sequence[SimplicialComplex], m: int | None = None) -> UnavoidabilityResult:
    """No full partition admits a perfect matching in its non-membership graph."""
    m = family[0].vertex_count if m is None else m
    for a in ordered_partitions(m, len(family)):
        result = has_perfect_matching(non_epsilon_graph(a, family))
        if result:
            blocks = [None] * len(family)
            for i, j in enumerate(result.matching):
                blocks[j] = a.blocks[i]
            return UnavoidabilityResult(False, LabeledPartition(tuple(blocks)))
    return UnavoidabilityResult(True)

