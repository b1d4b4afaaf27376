"""Face posets of complex differences, chains, antichains and the X_a map.

Poset elements are frozensets ordered by inclusion.  Faces of a
``SimplicialComplex`` are vertex sets; labeled partitions are read as their
cell sets, so inclusion is blockwise inclusion.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .complex import ComplexSpec, LabeledPartition, SimplicialComplex, bits_of, enumerate_facets
from .matching import in_symmetrized_deleted_join


def _faces_of_complex(K: SimplicialComplex) -> set[frozenset]:
    return {frozenset(bits_of(x)) for level in K.face_masks for x in level}


def face_set(obj) -> set[frozenset]:
    """All elements of ``obj`` as frozensets: a complex, a spec, or an iterable of faces."""
    if isinstance(obj, ComplexSpec):
        K = enumerate_facets(obj)
        return {frozenset(K.label(v) for v in face) for face in _faces_of_complex(K)}
    if isinstance(obj, SimplicialComplex):
        return _faces_of_complex(obj)
    out = set()
    for x in obj:
        out.add(x.cells() if isinstance(x, LabeledPartition) else frozenset(x))
    return out


@dataclass(frozen=True)
class FacePosetDifference:
    """Elements of the bigger face set missing from the smaller one, ordered by inclusion."""

    elements: tuple[frozenset, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def of(cls, elements: Iterable) -> FacePosetDifference:
        return cls(tuple(sorted(set(map(frozenset, elements)), key=_element_key)))


def _element_key(x: frozenset):
    return (len(x), sorted(map(repr, x)))


def face_poset_difference(bigger, smaller) -> FacePosetDifference:
    big, small = face_set(bigger), face_set(smaller)
    extra = small - big
    if extra:
        example = min(extra, key=_element_key)
        raise ValueError(f"smaller collection has {set(example) or '{}'} which the bigger one lacks")
    return FacePosetDifference.of(big - small)


def _proper_subsets_in(x: frozenset, members: set[frozenset], by_size: dict[int, list[frozenset]]):
    """Elements of ``members`` strictly contained in ``x``."""
    if 2 ** len(x) <= sum(len(v) for k, v in by_size.items() if k < len(x)):
        items = list(x)
        for size in range(len(items)):
            for sub in itertools.combinations(items, size):
                y = frozenset(sub)
                if y in members:
                    yield y
    else:
        for size, group in by_size.items():
            if size < len(x):
                for y in group:
                    if y < x:
                        yield y


def _by_size(elements: Sequence[frozenset]) -> dict[int, list[frozenset]]:
    out: dict[int, list[frozenset]] = {}
    for x in elements:
        out.setdefault(len(x), []).append(x)
    return out


def longest_chain(poset: FacePosetDifference) -> list[frozenset]:
    """A longest strictly increasing chain (empty for the empty poset)."""
    members = set(poset.elements)
    by_size = _by_size(poset.elements)
    best: dict[frozenset, tuple[int, frozenset | None]] = {}
    ordered = sorted(poset.elements, key=_element_key)
    for x in ordered:
        length, prev = 1, None
        for y in _proper_subsets_in(x, members, by_size):
            if best[y][0] + 1 > length:
                length, prev = best[y][0] + 1, y
        best[x] = (length, prev)
    if not best:
        return []
    top = max(ordered, key=lambda x: best[x][0])
    chain = []
    cur: frozenset | None = top
    while cur is not None:
        chain.append(cur)
        cur = best[cur][1]
    return chain[::-1]


def order_complex_dim(poset: FacePosetDifference) -> int | None:
    """Dimension of the order complex, ``None`` when the poset is empty."""
    chain = longest_chain(poset)
    return len(chain) - 1 if chain else None


def difference_order_complex_dim(bigger, smaller) -> int | None:
    return order_complex_dim(face_poset_difference(bigger, smaller))


def is_antichain(poset: FacePosetDifference) -> tuple[bool, tuple[frozenset, frozenset] | None]:
    """``(True, None)`` or ``(False, (smaller, larger))`` for a comparable pair."""
    members = set(poset.elements)
    by_size = _by_size(poset.elements)
    for x in poset.elements:
        for y in _proper_subsets_in(x, members, by_size):
            return False, (y, x)
    return True, None


# -- the alpha_s family -----------------------------------------------------


def alpha_spec(m: int, r: int, nu: int, s: int) -> ComplexSpec:
    """Symmetric complex with ``s`` row caps ``nu + 1`` and ``r - s`` caps ``nu`` (``0 <= s <= r``)."""
    return ComplexSpec.symmetric(m, r, nu, s)


def alpha_difference(m: int, r: int, nu: int, s: int) -> FacePosetDifference:
    """Faces with caps ``alpha_s`` that are not faces with caps ``alpha_(s-1)``."""
    if not 1 <= s <= r:
        raise ValueError("need 1 <= s <= r")
    return face_poset_difference(alpha_spec(m, r, nu, s), alpha_spec(m, r, nu, s - 1))


def alpha_hypothesis(m: int, r: int, nu: int, s: int) -> bool:
    return m >= r * nu + s + r - 1


# -- model poset and the X_a map ----------------------------------------------


def model_poset(r: int, s: int, t: int) -> FacePosetDifference:
    """Subsets ``Z`` of ``[r]`` with ``s + 1 <= |Z| <= t``."""
    return FacePosetDifference.of(
        frozenset(z) for size in range(s + 1, t + 1) for z in itertools.combinations(range(1, r + 1), size)
    )


def cyclic_shift(z: frozenset, r: int, j: int = 1) -> frozenset:
    return frozenset((i - 1 + j) % r + 1 for i in z)


def free_cyclic_action(poset: FacePosetDifference, r: int) -> tuple[bool, tuple[frozenset, int] | None]:
    """No element is fixed by a nonidentity power of ``i -> i + 1 (mod r)``."""
    for z in poset.elements:
        for j in range(1, r):
            if cyclic_shift(z, r, j) == z:
                return False, (z, j)
    return True, None


def _check_subcomplex(K: SimplicialComplex, L: SimplicialComplex) -> None:
    if K.vertex_count != L.vertex_count:
        raise ValueError("complexes live on different vertex sets")
    for facet in K.facets:
        if not L.contains(facet):
            raise ValueError(f"K is not contained in L: facet {facet}")


def x_map(a: LabeledPartition, K: SimplicialComplex, L: SimplicialComplex) -> frozenset:
    """Indices ``i`` (1-based) with ``A_i`` a face of ``L`` but not of ``K``."""
    _check_subcomplex(K, L)
    out = set()
    for i, block in enumerate(a.blocks, 1):
        face = [x - 1 for x in block]
        if L.contains(face) and not K.contains(face):
            out.add(i)
    return frozenset(out)


def kl_family(K: SimplicialComplex, L: SimplicialComplex, r: int, s: int) -> list[SimplicialComplex]:
    """``s`` copies of ``L`` followed by ``r - s`` copies of ``K``."""
    return [L] * s + [K] * (r - s)


def labeled_partitions(m: int, r: int):
    """All ``r``-tuples of pairwise disjoint subsets of ``[m]``."""
    for assignment in itertools.product(range(r + 1), repeat=m):
        blocks: list[set[int]] = [set() for _ in range(r)]
        for x, i in enumerate(assignment, 1):
            if i < r:
                blocks[i].add(x)
        yield LabeledPartition(tuple(frozenset(b) for b in blocks))


def sdj_members(K: SimplicialComplex, L: SimplicialComplex, r: int, s: int) -> list[LabeledPartition]:
    family = kl_family(K, L, r, s)
    return [a for a in labeled_partitions(K.vertex_count, r) if in_symmetrized_deleted_join(a, family)]


def sdj_difference(K: SimplicialComplex, L: SimplicialComplex, r: int, s: int, t: int) -> FacePosetDifference:
    """Simplices of the symmetrized deleted join of type ``(r, t)`` missing from type ``(r, s)``."""
    _check_subcomplex(K, L)
    return face_poset_difference(sdj_members(K, L, r, t), sdj_members(K, L, r, s))
