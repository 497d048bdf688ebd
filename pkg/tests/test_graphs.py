import pytest
from hypothesis import given, settings, strategies as st

from cdvlab.graphs import (
    CapExceededError,
    CycleId,
    Graph,
    build_named_graph,
    enumerate_cycles,
    graph_from_graph6,
    graph_from_text,
    graph_to_text,
    induced_components,
    modify,
    support_profile,
)
from cdvlab.scalars import FieldScalar

from .oracles import components_brute, cycle_count_brute


def small_graphs():
    return st.integers(3, 7).flatmap(
        lambda n: st.sets(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                lambda e: e[0] < e[1]
            ),
            max_size=n * (n - 1) // 2,
        ).map(lambda es: Graph.from_edges(n, es))
    )


# -- constructors -------------------------------------------------------------


def test_named_graphs():
    K4 = build_named_graph("k_n", 4)
    assert (K4.n, K4.m) == (4, 6)
    star = build_named_graph("star", 3)
    assert star.neighbors(0) == [1, 2, 3]
    hw = build_named_graph("heawood")
    assert (hw.n, hw.m) == (14, 21)
    assert all(hw.degree(v) == 3 for v in range(14))
    side = [v % 2 for v in range(14)]
    assert all(side[u] != side[v] for u, v in hw.edge_list())
    with pytest.raises(ValueError):
        build_named_graph("moebius")


def test_petersen_shape():
    pet = build_named_graph("petersen")
    assert (pet.n, pet.m) == (10, 15)
    assert all(pet.degree(v) == 3 for v in range(10))
    assert len(enumerate_cycles(pet)) == 57


def test_petersen_cycles_against_networkx():
    nx = pytest.importorskip("networkx")
    pet = build_named_graph("petersen")
    H = nx.Graph(pet.edge_list())
    expected = sum(1 for c in nx.simple_cycles(H) if len(c) >= 3)
    assert len(enumerate_cycles(pet)) == expected


# -- components ----------------------------------------------------------------


def test_components_examples():
    star = build_named_graph("star", 3)
    assert len(induced_components(star, {1, 2})) == 2
    C4 = build_named_graph("cycle", 4)
    assert len(induced_components(C4, {0, 1})) == 1
    assert len(induced_components(C4, {0, 2})) == 2
    assert induced_components(C4, set()) == []


@given(small_graphs(), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_components_partition_and_separation(G, rng):
    S = {v for v in range(G.n) if rng.random() < 0.5}
    comps = induced_components(G, S)
    union = set().union(*comps) if comps else set()
    assert union == S
    for i, a in enumerate(comps):
        for b in comps[i + 1:]:
            assert not any(G.has_edge(u, v) for u in a for v in b)
    assert len(comps) == components_brute(G, S)


# -- support profiles ------------------------------------------------------------


def test_support_profile_example():
    star = build_named_graph("star", 3)
    prof = support_profile(star, [0, 1, 1, -2])
    assert prof.supp_plus == {1, 2}
    assert prof.supp_minus == {3}
    assert prof.separator == {0}
    assert prof.remote == frozenset()


def test_support_profile_zero_vector():
    G = build_named_graph("cycle", 5)
    prof = support_profile(G, [0] * 5)
    assert prof.remote == frozenset(range(5))
    assert not prof.supp_plus and not prof.supp_minus and not prof.separator


def test_support_profile_full_support():
    C4 = build_named_graph("cycle", 4)
    prof = support_profile(C4, [1, 1, -1, -1])
    assert prof.supp_plus == {0, 1}
    assert prof.supp_minus == {2, 3}
    assert not prof.separator and not prof.remote


@given(small_graphs(), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_support_profile_partitions(G, rng):
    x = [rng.randint(-2, 2) for _ in range(G.n)]
    prof = support_profile(G, x)
    parts = [prof.supp_plus, prof.supp_minus, prof.separator, prof.remote]
    assert set().union(*parts) == set(range(G.n))
    assert sum(len(p) for p in parts) == G.n
    # no edge can join the support to the remote set
    supp = prof.supp
    assert not any(
        (u in supp) != (v in supp) and (v in prof.remote or u in prof.remote)
        for u, v in G.edge_list()
    )


# -- cycles -----------------------------------------------------------------------


def test_cycle_counts():
    assert len(enumerate_cycles(build_named_graph("cycle", 5))) == 1
    assert len(enumerate_cycles(build_named_graph("k_n", 4))) == 7
    assert len(enumerate_cycles(build_named_graph("k_n", 5))) == 37


def test_cycle_lengths_k5():
    by_len = {}
    for c in enumerate_cycles(build_named_graph("k_n", 5)):
        by_len[len(c)] = by_len.get(len(c), 0) + 1
    assert by_len == {3: 10, 4: 15, 5: 12}


@given(small_graphs())
@settings(max_examples=25, deadline=None)
def test_cycles_match_brute_force(G):
    assert len(enumerate_cycles(G)) == cycle_count_brute(G)


def test_cycle_cap():
    with pytest.raises(CapExceededError):
        enumerate_cycles(build_named_graph("k_n", 5), cap=10)


def test_cycles_canonical_and_sorted():
    cycles = enumerate_cycles(build_named_graph("k_n", 4))
    for c in cycles:
        seq = c.vertex_sequence
        assert seq[0] == min(seq)
        assert seq[1] < seq[-1]
    assert cycles == sorted(cycles, key=lambda c: (len(c), c.vertex_sequence))


@given(st.permutations(list(range(5))), st.integers(0, 4), st.booleans())
def test_canonical_invariant_under_rotation_reflection(perm, shift, flip):
    seq = list(perm)
    rotated = seq[shift:] + seq[:shift]
    if flip:
        rotated = list(reversed(rotated))
    assert CycleId.canonical(seq) == CycleId.canonical(rotated)


# -- modification ------------------------------------------------------------------


def test_delete_vertex_of_k4():
    K4 = build_named_graph("k_n", 4)
    res = modify(K4, "delete_vertices", [3])
    assert (res.graph.n, res.graph.m) == (3, 3)


def test_contract_edge_of_c4():
    C4 = build_named_graph("cycle", 4)
    res = modify(C4, "contract_edges", [(0, 1)])
    assert (res.graph.n, res.graph.m) == (3, 3)


def test_contract_rejects_cycles():
    K3 = build_named_graph("k_n", 3)
    with pytest.raises(ValueError):
        modify(K3, "contract_edges", [(0, 1), (1, 2), (0, 2)])


def test_modify_rejects_missing_edge():
    P3 = build_named_graph("path", 3)
    with pytest.raises(ValueError):
        modify(P3, "delete_edges", [(0, 2)])


def test_contract_merges_parallel_edges():
    K3 = build_named_graph("k_n", 3)
    res = modify(K3, "contract_edges", [(0, 1)])
    assert (res.graph.n, res.graph.m) == (2, 1)


# -- interchange formats -------------------------------------------------------------


def test_text_round_trip():
    G = build_named_graph("petersen")
    assert graph_from_text(graph_to_text(G)) == G


def test_text_rejects_garbage():
    with pytest.raises(ValueError):
        graph_from_text("3 2\n0 1\n")


def test_graph6_known_strings():
    assert graph_from_graph6("C~") == build_named_graph("k_n", 4)
    assert graph_from_graph6("D~{") == build_named_graph("k_n", 5)
