"""Shelling orders for symmetric multiple chessboard complexes, and a verifier.

For a facet order ``F_0, F_1, ...`` of a pure complex, the restriction of
``F_j`` is ``R_j = {v in F_j : F_j - v lies in an earlier facet}``.  The order
is a shelling iff no earlier facet contains ``R_j`` (for ``j > 0``).  Given an
earlier ``F`` and ``v in R_j - F``, the earliest facet ``F''`` containing
``F_j - v`` satisfies ``F cap F_j <= F'' cap F_j = F_j - v``.  The verifier
records ``R_j`` and the ``F''`` for each ``v``, from which the witness for any
pair can be read off without storing all pairs.
"""
from __future__ import annotations

import heapq
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .complex import (
    DEFAULT_FACET_LIMIT,
    Cell,
    ComplexSpec,
    LabeledPartition,
    SimplicialComplex,
    bits_of,
    enumerate_facets,
    facet_partition,
    mask_of,
)


class ShellingError(ValueError):
    pass


class ConstituentOrderError(ShellingError):
    """No certified shelling order was found for a constituent complex."""


@dataclass
class FacetOrder:
    """A permutation of the facets of ``complex`` (``positions[t]`` is the facet at step ``t``)."""

    complex: SimplicialComplex
    positions: tuple[int, ...]
    certificate: ShellingCertificate | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def facets(self) -> list[tuple[int, ...]]:
        return [self.complex.facets[i] for i in self.positions]

    def partitions(self) -> list[LabeledPartition]:
        spec = self.complex.spec
        if spec is None:
            raise ValueError("facets carry no board labels")
        return [facet_partition(spec, f) for f in self.facets]

    def is_permutation(self) -> bool:
        return sorted(self.positions) == list(range(len(self.complex.facets)))


@dataclass
class ShellingCertificate:
    """Compressed certificate: restriction sets plus earliest ridge witnesses.

    ``restrictions[j]`` lists the vertices of ``R_j``; ``ridge_witness[j][v]``
    is the step of the earliest facet containing ``F_j - v``.
    """

    order: FacetOrder
    restrictions: list[tuple[int, ...]]
    ridge_witness: list[dict[int, int]]

    @property
    def pair_count(self) -> int:
        f = len(self.order)
        return f * (f - 1) // 2

    def witness(self, j: int, i: int) -> tuple[int, int]:
        """``(step of F'', v)`` for the pair (step ``i`` before step ``j``)."""
        if not 0 <= i < j < len(self.order):
            raise IndexError(f"need 0 <= i < j, got i={i}, j={j}")
        facets = self.order.facets
        earlier = mask_of(facets[i])
        for v in self.restrictions[j]:
            if not earlier >> v & 1:
                return self.ridge_witness[j][v], v
        raise AssertionError(f"certificate does not cover pair ({i}, {j})")

    def check_pair(self, j: int, i: int) -> bool:
        f2, v = self.witness(j, i)
        facets = self.order.facets
        F, Fp, F2 = (mask_of(facets[t]) for t in (i, j, f2))
        target = Fp & ~(1 << v)
        return f2 < j and bool(Fp >> v & 1) and (F2 & Fp) == target and (F & Fp) & ~target == 0

    def pairs(self):
        for j in range(1, len(self.order)):
            for i in range(j):
                f2, v = self.witness(j, i)
                yield j, i, f2, v

    def to_json(self, expand: bool = False) -> dict:
        pos = self.order.positions
        out = {
            "order": list(pos),
            "pairs": self.pair_count,
            "restrictions": [list(r) for r in self.restrictions],
            "ridge_witness": [{str(v): pos[t] for v, t in sorted(w.items())} for w in self.ridge_witness],
        }
        if expand:
            out["witnesses"] = [
                {"f_prime": pos[j], "f": pos[i], "witness": pos[f2], "vertex": v} for j, i, f2, v in self.pairs()
            ]
        return out


@dataclass
class ShellingRefutation:
    """An earlier facet ``f`` (step) that contains the whole restriction of ``f_prime``."""

    order: FacetOrder
    f_prime: int
    f: int

    def to_json(self) -> dict:
        pos = self.order.positions
        return {"f_prime": pos[self.f_prime], "f": pos[self.f]}

    def __bool__(self) -> bool:
        return False


def _as_order(complex: SimplicialComplex, order) -> FacetOrder:
    if order is None:
        return FacetOrder(complex, tuple(range(len(complex.facets))))
    if isinstance(order, FacetOrder):
        if order.complex is not complex:
            raise ShellingError("order refers to a different complex")
        return order
    return FacetOrder(complex, tuple(order))


def verify_shelling(complex: SimplicialComplex, order=None) -> ShellingCertificate | ShellingRefutation:
    """Decide whether ``order`` (default: the stored facet order) is a shelling."""
    fo = _as_order(complex, order)
    if not fo.is_permutation():
        raise ShellingError("order is not a permutation of the facets")
    if not complex.is_pure:
        raise ShellingError("complex is not pure")
    masks = [complex.masks[i] for i in fo.positions]
    f = len(masks)
    V = complex.vertex_count
    first: dict[int, int] = {}
    for t, x in enumerate(masks):
        for v in bits_of(x):
            first.setdefault(x ^ (1 << v), t)
    # posting[v] has bit t set iff vertex v lies in the facet at step t
    incidence = np.zeros((max(V, 1), f), dtype=bool)
    for t, x in enumerate(masks):
        incidence[list(bits_of(x)), t] = True
    posting = np.packbits(incidence, axis=1, bitorder="little")
    restrictions: list[tuple[int, ...]] = [()]
    witnesses: list[dict[int, int]] = [{}]
    for j in range(1, f):
        x = masks[j]
        w = {}
        for v in bits_of(x):
            t = first[x ^ (1 << v)]
            if t < j:
                w[v] = t
        R = tuple(w)
        if not R:
            return ShellingRefutation(fo, j, 0)
        nb, rem = divmod(j, 8)
        acc = np.bitwise_and.reduce(posting[list(R), : nb + 1], axis=0)
        acc[nb] &= (1 << rem) - 1
        hit = np.flatnonzero(acc)
        if hit.size:
            byte = int(hit[0])
            bit = (int(acc[byte]) & -int(acc[byte])).bit_length() - 1
            return ShellingRefutation(fo, j, byte * 8 + bit)
        restrictions.append(R)
        witnesses.append(w)
    cert = ShellingCertificate(fo, restrictions, witnesses)
    fo.certificate = cert
    return cert


def verify_shelling_pairwise(complex: SimplicialComplex, order=None) -> bool:
    """Quadratic search straight from the pair condition; an independent check for small inputs."""
    fo = _as_order(complex, order)
    masks = [complex.masks[i] for i in fo.positions]
    for j in range(1, len(masks)):
        Fp = masks[j]
        for i in range(j):
            F = masks[i]
            if not any(
                (masks[k] & Fp) == Fp & ~(1 << v) and (F & Fp) & (1 << v) == 0
                for k in range(j)
                for v in bits_of(Fp)
            ):
                return False
    return True


# -- the order on facets of the symmetric complex -----------------------------

BEFORE, AFTER, SAME_BLOCK = "before", "after", "same-block"


def _check_sizes(F: LabeledPartition, Fp: LabeledPartition, caps: Sequence[int] | None) -> None:
    if len(F) != len(Fp):
        raise ShellingError("facets have different numbers of rows")
    if sorted(F.sizes) != sorted(Fp.sizes):
        raise ShellingError(f"block sizes {F.sizes} and {Fp.sizes} are not rearrangements of each other")
    if caps is not None and sorted(F.sizes) != sorted(caps):
        raise ShellingError(f"block sizes {F.sizes} do not match the caps {tuple(caps)}")


def paper_precedes(F: LabeledPartition, Fp: LabeledPartition, caps: Sequence[int] | None = None) -> str:
    """Compare size vectors: the larger one (lexicographically) comes first."""
    _check_sizes(F, Fp, caps)
    a, b = F.sizes, Fp.sizes
    if a == b:
        return SAME_BLOCK
    return BEFORE if a > b else AFTER


def pivot_row(F: LabeledPartition, Fp: LabeledPartition) -> int:
    """1-based first row where the block sizes differ."""
    for i, (a, b) in enumerate(zip(F.sizes, Fp.sizes), 1):
        if a != b:
            return i
    raise ShellingError("size vectors agree")


def shelling_condition(F: LabeledPartition, Fp: LabeledPartition, F2: LabeledPartition, v: Cell) -> bool:
    """``v in F'`` and ``F cap F' <= F'' cap F' = F' - v`` on cell sets."""
    a, b, c = F.cells(), Fp.cells(), F2.cells()
    v = Cell(*v)
    return v in b and (a & b) <= (c & b) and (c & b) == b - {v}


def case_a_witness(F: LabeledPartition, Fp: LabeledPartition) -> tuple[LabeledPartition, Cell]:
    """Witness ``(F'', v)`` when ``F`` comes before ``F'`` by size vectors."""
    if paper_precedes(F, Fp) != BEFORE:
        raise ShellingError("the size vector of F is not larger than that of F'")
    i0 = pivot_row(F, Fp)
    A, B = F.blocks, Fp.blocks
    j = next(j for j in range(i0 + 1, len(B) + 1) if len(B[j - 1]) > len(A[j - 1]))
    x = min(B[j - 1] - A[j - 1])
    blocks = list(B)
    blocks[i0 - 1] = B[i0 - 1] | {x}
    blocks[j - 1] = B[j - 1] - {x}
    F2 = LabeledPartition(tuple(blocks))
    v = Cell(x, j)
    assert shelling_condition(F, Fp, F2, v)
    return F2, v


# -- constituent orders -------------------------------------------------------


def _greedy_shelling(masks: Sequence[int]) -> list[int] | None:
    """Grow a shelling from the first facet, preferring facets with large restriction.

    A facet may be appended when its restriction is nonempty and no placed
    facet contains it.  Returns ``None`` if the search gets stuck.
    """
    f = len(masks)
    if f == 0:
        return []
    ridges: dict[int, list[int]] = {}
    for i, x in enumerate(masks):
        for v in bits_of(x):
            ridges.setdefault(x ^ (1 << v), []).append(i)
    posting: dict[int, int] = {}
    placed = [False] * f
    R = [0] * f
    covered: set[int] = set()
    heap = [(0, 0)]
    order: list[int] = []
    while heap:
        _, i = heapq.heappop(heap)
        if placed[i]:
            continue
        if order:
            r = R[i]
            if not r:
                continue
            acc = -1
            for v in bits_of(r):
                acc &= posting.get(v, 0)
                if not acc:
                    break
            if acc:
                # blocked for now; it is pushed again when its restriction grows
                continue
        placed[i] = True
        step = len(order)
        order.append(i)
        x = masks[i]
        for v in bits_of(x):
            posting[v] = posting.get(v, 0) | (1 << step)
        for v in bits_of(x):
            ridge = x ^ (1 << v)
            if ridge in covered:
                continue
            covered.add(ridge)
            for k in ridges[ridge]:
                if not placed[k]:
                    R[k] |= masks[k] ^ ridge
                    heapq.heappush(heap, (-R[k].bit_count(), k))
    return order if len(order) == f else None


def _block_complex(facets: Sequence[LabeledPartition], m: int | None) -> SimplicialComplex:
    n = len(facets[0])
    m = m or max((max(F.support, default=0) for F in facets), default=0)
    spec = ComplexSpec.chessboard(m, n, facets[0].sizes)
    rows = sorted(tuple(sorted((x - 1) * n + i for i, b in enumerate(F.blocks) for x in b)) for F in facets)
    labels = tuple(spec.cell(v) for v in range(m * n))
    return SimplicialComplex(m * n, tuple(rows), labels, spec)


def _lex_key(F: LabeledPartition):
    return F.sorted_blocks()


def constituent_order(
    a_sizes: Sequence[int],
    facets: Sequence[LabeledPartition],
    m: int | None = None,
    strategy: str = "auto",
) -> FacetOrder:
    """A certified shelling order of facets sharing the size vector ``a_sizes``.

    ``strategy`` is ``"lex"`` (lexicographic on block contents), ``"greedy"``
    or ``"auto"`` (lex, then greedy).  The result always carries a
    certificate; if no candidate verifies, ``ConstituentOrderError`` is raised.
    """
    a_sizes = tuple(a_sizes)
    if not facets:
        raise ValueError("no facets given")
    for F in facets:
        if F.sizes != a_sizes:
            raise ShellingError(f"facet {F} does not have block sizes {a_sizes}")
    K = _block_complex(facets, m)
    spec = K.spec
    where = {facet: i for i, facet in enumerate(K.facets)}
    index = {F: where[tuple(sorted(spec.index(c) for c in F.cells()))] for F in facets}
    candidates = []
    if strategy in ("lex", "auto"):
        candidates.append([index[F] for F in sorted(facets, key=_lex_key)])
    if strategy in ("greedy", "auto"):
        candidates.append(None)
    if not candidates:
        raise ValueError(f"unknown strategy {strategy!r}")
    last = None
    for cand in candidates:
        if cand is None:
            cand = _greedy_shelling(K.masks)
            if cand is None:
                continue
        result = verify_shelling(K, cand)
        if isinstance(result, ShellingCertificate):
            return result.order
        last = result
    detail = f" (refuted at step {last.f_prime} by step {last.f})" if last is not None else ""
    raise ConstituentOrderError(f"no certified shelling for block sizes {a_sizes}{detail}")


def paper_shelling_order(
    spec: ComplexSpec,
    limit: int = DEFAULT_FACET_LIMIT,
    strategy: str = "auto",
    verify: bool = True,
) -> FacetOrder:
    """Blocks of equal size vectors in descending order, each in a certified constituent order."""
    if not spec.symmetrized or spec.balanced is None:
        raise ShellingError("expected a symmetrized spec with caps (nu+1)^s nu^(n-s)")
    if not spec.working_hypothesis:
        raise ShellingError(f"m = {spec.m} is below the working hypothesis m >= {sum(spec.row_caps) + spec.n - 1}")
    K = enumerate_facets(spec, limit)
    n = spec.n
    groups: dict[tuple[int, ...], list[int]] = {}
    for idx, facet in enumerate(K.facets):
        sizes = [0] * n
        for v in facet:
            sizes[v % n] += 1
        groups.setdefault(tuple(sizes), []).append(idx)
    positions: list[int] = []
    for sizes in sorted(groups, reverse=True):
        members = groups[sizes]
        parts = [facet_partition(spec, K.facets[i]) for i in members]
        sub = constituent_order(sizes, parts, spec.m, strategy)
        lookup = {f: i for f, i in zip((K.facets[i] for i in members), members)}
        positions.extend(lookup[sub.complex.facets[t]] for t in sub.positions)
    order = FacetOrder(K, tuple(positions))
    if verify:
        result = verify_shelling(K, order)
        if not isinstance(result, ShellingCertificate):
            raise ShellingError(f"assembled order is not a shelling: step {result.f_prime} against step {result.f}")
    return order
