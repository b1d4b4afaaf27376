import itertools

import pytest

from chessplex.complex import (
    Cell,
    ComplexSpec,
    LabeledPartition,
    ResourceLimitError,
    SimplicialComplex,
    complex_from_json,
    complex_to_json,
    deleted_join_membership,
    enumerate_facets,
    f_vector,
    facet_partition,
    is_simplex,
    partition_facet,
    symmetrized_complex_as_labeled,
)

from oracles import all_faces, brute_facets


def cellset(spec, facet):
    return frozenset(spec.cell(v) for v in facet)


# -- is_simplex -----------------------------------------------------------------


def test_non_attacking_rooks_form_a_simplex():
    spec = ComplexSpec.chessboard(2, 2, (1, 1), (1, 1))
    assert is_simplex(spec, {(1, 1), (2, 2)})
    assert not is_simplex(spec, {(1, 1), (1, 2)})


def test_symmetrized_caps_may_be_permuted():
    spec = ComplexSpec.chessboard(4, 2, (2, 1), symmetrized=True)
    placement = {(1, 1), (2, 2), (3, 2)}
    assert is_simplex(spec, placement)
    plain = ComplexSpec.chessboard(4, 2, (2, 1))
    swapped = ComplexSpec.chessboard(4, 2, (1, 2))
    assert not is_simplex(plain, placement)
    assert is_simplex(swapped, placement)


def test_cell_off_board_is_an_error():
    spec = ComplexSpec.chessboard(2, 2, (1, 1))
    with pytest.raises(ValueError):
        is_simplex(spec, {(3, 1)})
    with pytest.raises(ValueError):
        is_simplex(spec, {(1, 0)})


def test_symmetrization_requires_unit_columns():
    with pytest.raises(ValueError):
        ComplexSpec.chessboard(3, 2, (1, 1), col_caps=2, symmetrized=True)


def test_empty_placement_is_a_simplex():
    assert is_simplex(ComplexSpec.chessboard(3, 2, (0, 0)), set())


# -- enumerate_facets ----------------------------------------------------------


def test_two_by_two_board_has_two_facets():
    spec = ComplexSpec.chessboard(2, 2, (1, 1), (1, 1))
    K = enumerate_facets(spec)
    assert {cellset(spec, f) for f in K.facets} == {
        frozenset({(1, 1), (2, 2)}),
        frozenset({(2, 1), (1, 2)}),
    }


def test_single_row_gives_skeleton_of_simplex():
    spec = ComplexSpec.chessboard(3, 1, (2,))
    K = enumerate_facets(spec)
    assert len(K.facets) == 3
    assert all(len(f) == 2 for f in K.facets)
    assert f_vector(K).counts == (3, 3)


def test_symmetric_four_by_two_has_24_facets():
    spec = ComplexSpec.symmetric(4, 2, 1, 1)
    K = enumerate_facets(spec)
    assert len(K.facets) == 24
    assert {cellset(spec, f) for f in K.facets} == brute_facets(4, 2, (2, 1), symmetrized=True)


@pytest.mark.parametrize(
    "m,n,caps,col_caps,sym",
    [
        (3, 2, (1, 1), None, False),
        (4, 2, (2, 1), None, False),
        (4, 2, (2, 1), None, True),
        (3, 3, (1, 1, 1), None, True),
        (4, 3, (2, 1, 0), None, True),
        (5, 2, (2, 2), None, True),
        (3, 2, (2, 1), (2, 1, 1), False),
        (3, 2, (3, 1), (2, 2, 2), False),
        (2, 3, (1, 1, 1), (2, 1), False),
        (4, 1, (0,), None, False),
    ],
)
def test_enumeration_matches_brute_force(m, n, caps, col_caps, sym):
    spec = ComplexSpec.chessboard(m, n, caps, col_caps, sym)
    K = enumerate_facets(spec)
    assert {cellset(spec, f) for f in K.facets} == brute_facets(m, n, caps, col_caps and list(col_caps), sym)


def test_canonical_order_descending_size_vector_then_cells():
    spec = ComplexSpec.symmetric(5, 2, 1, 1)
    K = enumerate_facets(spec)
    keys = []
    for f in K.facets:
        sizes = facet_partition(spec, f).sizes
        keys.append((tuple(-x for x in sizes), f))
    assert keys == sorted(keys)
    assert facet_partition(spec, K.facets[0]).sizes == (2, 1)
    assert facet_partition(spec, K.facets[-1]).sizes == (1, 2)


def test_pure_dimension_under_hypothesis():
    for m, n, nu, s in [(5, 2, 1, 1), (6, 3, 1, 1), (7, 2, 2, 1), (6, 2, 2, 0)]:
        K = enumerate_facets(ComplexSpec.symmetric(m, n, nu, s))
        assert K.is_pure
        assert K.dim + 1 == n * nu + s


def test_below_hypothesis_may_be_non_pure():
    # with too few columns the big rows cannot all be filled
    spec = ComplexSpec.chessboard(3, 2, (3, 1))
    K = enumerate_facets(spec)
    assert {cellset(spec, f) for f in K.facets} == brute_facets(3, 2, (3, 1))


def test_facet_limit_guard():
    with pytest.raises(ResourceLimitError):
        enumerate_facets(ComplexSpec.symmetric(9, 3, 2, 1), limit=1000)


def test_no_facet_contains_another():
    K = enumerate_facets(ComplexSpec.chessboard(4, 3, (2, 1, 1), col_caps=2))
    masks = K.masks
    for a, b in itertools.permutations(masks, 2):
        assert a & b != a


# -- f-vector, simplicial complex basics ----------------------------------------


def test_f_vector_examples():
    assert f_vector(SimplicialComplex(4, ((0, 1), (2, 3)))).counts == (4, 2)
    assert f_vector(SimplicialComplex.simplex(3)).counts == (3, 3, 1)


def test_f_vector_of_three_by_two_board_matches_downward_closure():
    spec = ComplexSpec.chessboard(3, 2, (1, 1))
    K = enumerate_facets(spec)
    faces = all_faces(K.facets)
    counts = [sum(1 for f in faces if len(f) == d + 1) for d in range(K.dim + 1)]
    assert list(f_vector(K)) == counts == [6, 6]


def test_faces_are_listed_lexicographically():
    K = SimplicialComplex(4, ((0, 1, 2), (1, 3)))
    assert K.faces(1) == [(0, 1), (0, 2), (1, 2), (1, 3)]
    assert K.faces(-1) == [()]


def test_void_and_empty_simplex_complexes_differ():
    void = SimplicialComplex(3, ())
    empty = SimplicialComplex(3, ((),))
    assert void.is_void and not empty.is_void
    assert not void.contains(())
    assert empty.contains(())
    assert f_vector(empty).counts == ()


def test_contained_facets_are_rejected():
    with pytest.raises(ValueError):
        SimplicialComplex(3, ((0, 1), (0, 1, 2)))
    with pytest.raises(ValueError):
        SimplicialComplex(2, ((0, 2),))


def test_from_faces_keeps_maximal_faces():
    K = SimplicialComplex.from_faces(4, [(0,), (0, 1), (1, 2), (2,), (3,)])
    assert K.facets == ((0, 1), (1, 2), (3,))


# -- labeled partitions --------------------------------------------------------


def test_labeled_partition_disjointness():
    with pytest.raises(ValueError):
        LabeledPartition.of({1, 2}, {2})
    a = LabeledPartition.of({1, 2}, set(), {3})
    assert a.sizes == (2, 0, 1)
    assert a.cells() == {Cell(1, 1), Cell(2, 1), Cell(3, 3)}


def test_symmetrized_labeled_stream():
    spec = ComplexSpec.symmetric(4, 2, 1, 1)
    parts = list(symmetrized_complex_as_labeled(spec))
    assert len(parts) == 24
    assert all(sorted(p.sizes) == [1, 2] for p in parts)
    K = enumerate_facets(spec)
    assert [partition_facet(spec, p) for p in parts] == list(K.facets)


def test_two_singletons_stream():
    parts = list(symmetrized_complex_as_labeled(ComplexSpec.symmetric(2, 2, 0, 2)))
    assert set(parts) == {LabeledPartition.of({1}, {2}), LabeledPartition.of({2}, {1})}


def test_empty_caps_stream_only_the_empty_tuple():
    parts = list(symmetrized_complex_as_labeled(ComplexSpec.symmetric(3, 2, 0, 0)))
    assert parts == [LabeledPartition.of(set(), set())]


# -- deleted joins ---------------------------------------------------------------


def test_deleted_join_membership_examples():
    K = SimplicialComplex.skeleton(3, 0)
    assert deleted_join_membership([K, K], LabeledPartition.of({1}, {2}))
    assert not deleted_join_membership([K, K], LabeledPartition.of({1, 2}, {3}))
    fam = [SimplicialComplex.skeleton(3, 0), SimplicialComplex.skeleton(3, 1)]
    assert deleted_join_membership(fam, LabeledPartition.of({1}, {2, 3}))
    assert not deleted_join_membership(fam, LabeledPartition.of({2, 3}, {1}))


def test_deleted_join_vertex_out_of_range():
    K = SimplicialComplex.skeleton(3, 0)
    with pytest.raises(ValueError):
        deleted_join_membership([K, K], LabeledPartition.of({4}, {1}))


# -- serialization ------------------------------------------------------------------


def test_json_round_trip():
    spec = ComplexSpec.symmetric(4, 2, 1, 1)
    K = enumerate_facets(spec)
    data = complex_to_json(K)
    assert data["caps"] == [2, 1] and data["symmetrized"]
    back = complex_from_json(data)
    assert back.facets == K.facets and back.spec == spec
    plain = SimplicialComplex(4, ((0, 1), (2, 3)))
    assert complex_from_json(complex_to_json(plain)).facets == plain.facets
