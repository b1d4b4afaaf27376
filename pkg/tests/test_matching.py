import itertools
import random

import pytest

from chessplex.complex import ComplexSpec, LabeledPartition, ResourceLimitError, SimplicialComplex, enumerate_facets, facet_partition
from chessplex.matching import (
    EpsilonGraph,
    epsilon_graph,
    has_perfect_matching,
    in_symmetrized_deleted_join,
    is_collectively_unavoidable,
    non_epsilon_graph,
    ordered_partitions,
    unavoidable_via_matching,
)
from chessplex.posets import labeled_partitions

from oracles import all_faces, in_sdj_by_permutation, unavoidable_brute

LP = LabeledPartition.of
S = SimplicialComplex


def face_family(family):
    return [{frozenset(x + 1 for x in f) for f in all_faces(K.facets)} for K in family]


def test_epsilon_graph_examples():
    K0, K1 = S.skeleton(3, 0), S.skeleton(3, 1)
    g = epsilon_graph(LP({1, 2}, {3}), [K0, K1])
    assert g.adjacency == ((False, True), (True, True))
    K = S.skeleton(3, 2)
    assert all(all(row) for row in epsilon_graph(LP({1}, {2, 3}), [K, K]).adjacency)
    g = epsilon_graph(LP({1, 2, 3}, {}), [K1, K1])
    assert g.adjacency[0] == (False, False)


def test_epsilon_graph_checks_sizes():
    K = S.skeleton(3, 0)
    with pytest.raises(ValueError):
        epsilon_graph(LP({1}), [K, K])
    with pytest.raises(ValueError):
        epsilon_graph(LP({5}, {1}), [K, K])


def test_matching_examples():
    ident = EpsilonGraph(3, tuple(tuple(i == j for j in range(3)) for i in range(3)))
    assert has_perfect_matching(ident).matching == (0, 1, 2)
    zero_row = EpsilonGraph(2, ((True, True), (False, False)))
    res = has_perfect_matching(zero_row)
    assert not res and res.violator == {1} and res.neighborhood == frozenset()
    g = EpsilonGraph(3, ((True, True, False), (True, True, False), (True, True, True)))
    res = has_perfect_matching(g)
    assert res and sorted(res.matching) == [0, 1, 2]


def test_hall_violator_is_a_real_violation():
    rng = random.Random(3)
    for _ in range(500):
        n = rng.randint(1, 6)
        adj = tuple(tuple(rng.random() < 0.35 for _ in range(n)) for _ in range(n))
        g = EpsilonGraph(n, adj)
        res = has_perfect_matching(g)
        brute = any(all(adj[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))
        assert bool(res) == brute
        if res:
            assert all(adj[i][j] for i, j in enumerate(res.matching))
            assert len(set(res.matching)) == n
        else:
            nbhd = {j for i in res.violator for j in range(n) if adj[i][j]}
            assert nbhd == res.neighborhood
            assert len(nbhd) < len(res.violator)


def test_membership_examples():
    fam = [S.skeleton(3, 0), S.skeleton(3, 1)]
    assert in_symmetrized_deleted_join(LP({1, 2}, {3}), fam)
    fam = [S.skeleton(4, 0), S.skeleton(4, 0)]
    assert not in_symmetrized_deleted_join(LP({1, 2}, {3, 4}), fam)


def test_chessboard_facets_lie_in_the_skeleton_join():
    spec = ComplexSpec.symmetric(5, 3, 1, 1)
    fam = [S.skeleton(5, c - 1) for c in spec.row_caps]
    for f in enumerate_facets(spec).facets:
        assert in_symmetrized_deleted_join(facet_partition(spec, f), fam)


def random_complex(rng, m):
    faces = [tuple(sorted(rng.sample(range(m), rng.randint(0, m)))) for _ in range(rng.randint(0, 3))]
    if rng.random() < 0.1:
        return S(m, ())
    return S.from_faces(m, faces or [()])


def test_membership_matches_permutation_definition_on_random_families():
    rng = random.Random(5)
    for _ in range(40):
        m, n = rng.randint(1, 4), rng.randint(1, 3)
        fam = [random_complex(rng, m) for _ in range(n)]
        faces = face_family(fam)
        for a in labeled_partitions(m, n):
            assert in_symmetrized_deleted_join(a, fam) == in_sdj_by_permutation(a.blocks, faces)


# -- unavoidability --------------------------------------------------------------


def test_size_one_caps_on_three_points_are_unavoidable():
    K = S.skeleton(3, 0)
    assert is_collectively_unavoidable([K, K])
    assert unavoidable_brute(3, face_family([K, K]))[0]


def test_full_simplices_are_unavoidable():
    K = S.simplex(4)
    assert is_collectively_unavoidable([K, K])


def test_empty_simplex_only_is_avoidable():
    E = S(3, ((),))
    res = is_collectively_unavoidable([E, E])
    assert not res
    assert not any(res.witness.blocks[i] == frozenset() for i in range(2))


def test_void_complex_never_contains_a_block():
    V = S(2, ())
    res = is_collectively_unavoidable([V, V])
    assert not res


def test_witness_is_a_violating_partition():
    rng = random.Random(9)
    for _ in range(60):
        m, n = rng.randint(1, 5), rng.randint(1, 3)
        fam = [random_complex(rng, m) for _ in range(n)]
        res = is_collectively_unavoidable(fam)
        brute, _ = unavoidable_brute(m, face_family(fam))
        assert bool(res) == brute
        assert bool(unavoidable_via_matching(fam)) == brute
        if not res:
            blocks = res.witness.blocks
            assert frozenset().union(*blocks) == frozenset(range(1, m + 1))
            assert not any(fam[i].contains(x - 1 for x in blocks[i]) for i in range(n))


def test_ordered_partitions_count():
    assert sum(1 for _ in ordered_partitions(4, 3)) == 3**4


def test_unavoidability_guard():
    K = S.skeleton(13, 0)
    with pytest.raises(ResourceLimitError):
        is_collectively_unavoidable([K] * 4)


def test_non_epsilon_graph_is_complement():
    fam = [S.skeleton(3, 0), S.skeleton(3, 1)]
    a = LP({1, 2}, {3})
    g, h = epsilon_graph(a, fam), non_epsilon_graph(a, fam)
    assert all(x != y for r1, r2 in zip(g.adjacency, h.adjacency) for x, y in zip(r1, r2))
