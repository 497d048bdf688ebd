import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cdvlab.exactlp import strictly_feasible
from cdvlab.graphs import build_named_graph, support_profile
from cdvlab.linalg import ExactMatrix, Subspace, kernel_basis
from cdvlab.schrodinger import validate_membership
from cdvlab.signcells import (
    DimGuardExceededError,
    FanSanityError,
    HypothesisUnverifiedError,
    classify_cells,
    enumerate_cells,
    eta_lower_bound,
    fan_sanity,
    fan_to_json,
    lambda_lower_bound,
    verify_representation,
    verify_representation_sampled,
)

from .oracles import sign_pattern_oracle


def neg_adjacency_star3():
    return ExactMatrix([[0, 1, 1, 1], [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]]).scale(-1)


def star3_kernel():
    return kernel_basis(neg_adjacency_star3())


# -- exact LP -------------------------------------------------------------------


def test_lp_feasible_open_cone():
    ok, w = strictly_feasible([[1, 0], [0, 1], [1, 1]])
    assert ok
    assert all((sum(r * x for r, x in zip(row, w))).sign() > 0 for row in [[1, 0], [0, 1], [1, 1]])


def test_lp_infeasible_opposites():
    ok, w = strictly_feasible([[1, -1], [-1, 1]])
    assert not ok and w is None


def test_lp_zero_row_infeasible():
    ok, _ = strictly_feasible([[0, 0]])
    assert not ok


def test_lp_empty_system_feasible():
    ok, w = strictly_feasible([])
    assert ok and w == ()


# -- enumeration ------------------------------------------------------------------


def test_line_in_plane():
    fan = enumerate_cells(Subspace(2, [[1, -1]]))
    assert sorted(c.pattern_string() for c in fan.cells) == ["+-", "-+", "00"]


def test_sum_zero_three():
    fan = enumerate_cells(kernel_basis(ExactMatrix([[-1] * 3 for _ in range(3)])))
    assert len(fan.cells) == 13
    assert Counter(c.dim for c in fan.cells) == {0: 1, 1: 6, 2: 6}


def test_star_kernel_cells():
    fan = enumerate_cells(star3_kernel())
    assert len(fan.cells) == 13
    patterns = {c.pattern_string() for c in fan.cells}
    assert "0++-" in patterns
    boundary = {
        fan.cells[i].pattern_string()
        for i in fan.boundary_of(fan.cell_index()[(0, 1, 1, -1)])
        if not fan.cells[i].is_zero()
    }
    assert boundary == {"0+0-", "00+-"}


def test_witness_matches_pattern():
    fan = enumerate_cells(star3_kernel())
    for cell in fan.cells:
        prof = support_profile(build_named_graph("star", 3), cell.witness)
        assert prof.supp_plus == cell.supp_plus
        assert prof.supp_minus == cell.supp_minus


def test_zero_dimensional_subspace():
    fan = enumerate_cells(Subspace(3, []))
    assert len(fan.cells) == 1 and fan.cells[0].is_zero()


def test_dim_guard():
    L = Subspace(8, [[1 if i == j else 0 for j in range(8)] for i in range(8)])
    with pytest.raises(DimGuardExceededError):
        enumerate_cells(L, dim_guard=6)


@given(st.randoms(use_true_random=False))
@settings(max_examples=20, deadline=None)
def test_antipodality(rng):
    n = rng.randint(3, 6)
    d = rng.randint(1, 3)
    L = Subspace(n, [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(d)])
    fan = enumerate_cells(L)
    patterns = {c.pattern for c in fan.cells}
    by_pattern = {c.pattern: c for c in fan.cells}
    for p in patterns:
        neg = tuple(-s for s in p)
        assert neg in patterns
        assert by_pattern[neg].witness == tuple(-x for x in by_pattern[p].witness)


@given(st.randoms(use_true_random=False))
@settings(max_examples=15, deadline=None)
def test_enumeration_matches_oracle(rng):
    n = rng.randint(3, 6)
    d = rng.randint(1, 3)
    L = Subspace(n, [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(d)])
    fan = enumerate_cells(L)
    assert {c.pattern for c in fan.cells} == sign_pattern_oracle(L, seed=rng.randint(0, 10**6))


# -- classification ----------------------------------------------------------------


def test_broken_cells_star():
    star = build_named_graph("star", 3)
    fan = classify_cells(enumerate_cells(star3_kernel()), star)
    broken = sorted(fan.cells[i].pattern_string() for i in fan.broken)
    assert broken == ["0++-", "0+-+", "0-++"]


def test_no_broken_on_complete_graphs():
    K4 = build_named_graph("k_n", 4)
    fan = classify_cells(enumerate_cells(kernel_basis(ExactMatrix([[-1] * 4] * 4))), K4)
    assert fan.broken == frozenset()


def test_c4_alternating_is_broken():
    C4 = build_named_graph("cycle", 4)
    fan = classify_cells(enumerate_cells(Subspace(4, [[1, -1, 1, -1]])), C4)
    assert {fan.cells[i].pattern_string() for i in fan.broken} == {"+-+-", "-+-+"}


# -- representation verdicts ---------------------------------------------------------


def test_star_kernel_semivalid():
    verdict = verify_representation(star3_kernel(), build_named_graph("star", 3), "semivalid")
    assert verdict.holds
    assert verdict.cells_checked == 12


def test_alternating_line_not_semivalid():
    verdict = verify_representation(
        Subspace(4, [[1, -1, 1, -1]]), build_named_graph("cycle", 4), "semivalid"
    )
    assert not verdict.holds
    assert {v.clause for v in verdict.violations} == {"ii", "iii", "iv"}


def test_k4_kernel_valid():
    L = kernel_basis(ExactMatrix([[-1] * 4] * 4))
    assert verify_representation(L, build_named_graph("k_n", 4), "valid").holds


def test_star_kernel_not_valid_kind():
    # broken cones violate the connected-positive-support clause
    verdict = verify_representation(star3_kernel(), build_named_graph("star", 3), "valid")
    assert not verdict.holds


def test_sampled_verifier_finds_violation():
    verdict = verify_representation_sampled(
        Subspace(4, [[1, -1, 1, -1]]), build_named_graph("cycle", 4), samples=10, seed=1
    )
    assert not verdict.holds and not verdict.exhaustive


def test_sampled_verifier_zero_dim():
    verdict = verify_representation_sampled(
        Subspace(4, []), build_named_graph("cycle", 4), samples=5
    )
    assert verdict.holds and not verdict.exhaustive


def test_sampled_verifier_star_clean():
    verdict = verify_representation_sampled(
        star3_kernel(), build_named_graph("star", 3), samples=500, seed=3
    )
    assert verdict.holds


# -- certified bounds ------------------------------------------------------------------


def test_eta_bound_k4():
    K4 = build_named_graph("k_n", 4)
    S = validate_membership(K4, ExactMatrix([[-1] * 4] * 4))
    cert = eta_lower_bound(K4, S, [])
    assert cert.bound == 3
    assert cert.method == "degree"


def test_eta_bound_k5_exact_route():
    # max degree 4 with empty F forces the exact fan check; the complete
    # graph has no broken cones, so the hypothesis holds vacuously
    K5 = build_named_graph("k_n", 5)
    S = validate_membership(K5, ExactMatrix([[-1] * 5] * 5))
    cert = eta_lower_bound(K5, S, [])
    assert cert.bound == 4
    assert cert.method == "exact-fan"


def test_eta_bound_heawood():
    from cdvlab.projplane import build_plane, incidence_graph

    rep = incidence_graph(build_plane(2))
    cert = eta_lower_bound(rep.graph, rep.matrix, [])
    assert cert.bound == 6
    assert cert.method == "degree"  # 3-regular settles the hypothesis


def test_eta_bound_h3_one_edge():
    from cdvlab.projplane import build_plane, incidence_graph

    rep = incidence_graph(build_plane(3))
    edge = rep.graph.edge_list()[0]
    cert = eta_lower_bound(rep.graph, rep.matrix, [edge])
    assert cert.bound == 11
    assert cert.subspace.dim == 11
    assert cert.method == "degree"


def test_eta_hypothesis_unverified():
    from cdvlab.projplane import build_plane, incidence_graph

    # H_3 is 4-regular: with empty F neither route applies at low guard
    rep = incidence_graph(build_plane(3))
    with pytest.raises(HypothesisUnverifiedError):
        eta_lower_bound(rep.graph, rep.matrix, [])


def test_lambda_bounds():
    from cdvlab.projplane import build_plane, incidence_graph

    rep2 = incidence_graph(build_plane(2))
    assert lambda_lower_bound(rep2.graph, rep2.matrix) == 4
    rep3 = incidence_graph(build_plane(3))
    assert lambda_lower_bound(rep3.graph, rep3.matrix) == 9
    star = build_named_graph("star", 3)
    S = validate_membership(star, neg_adjacency_star3())
    assert lambda_lower_bound(star, S) == 0


# -- fan sanity ---------------------------------------------------------------------


def test_fan_sanity_star():
    star = build_named_graph("star", 3)
    fan = classify_cells(enumerate_cells(star3_kernel()), star)
    report = fan_sanity(fan, star)
    assert report.broken_count == 3
    assert report.ok


def test_fan_sanity_vacuous_on_k4():
    K4 = build_named_graph("k_n", 4)
    fan = classify_cells(enumerate_cells(kernel_basis(ExactMatrix([[-1] * 4] * 4))), K4)
    assert fan_sanity(fan, K4).broken_count == 0


def test_fan_sanity_heawood_kernel():
    from cdvlab.projplane import build_plane, incidence_graph

    rep = incidence_graph(build_plane(2))
    fan = classify_cells(enumerate_cells(rep.matrix.kernel(), dim_guard=6), rep.graph)
    report = fan_sanity(fan, rep.graph)
    assert report.ok


def test_fan_sanity_rejects_non_semivalid():
    C4 = build_named_graph("cycle", 4)
    fan = classify_cells(enumerate_cells(Subspace(4, [[1, -1, 1, -1]])), C4)
    with pytest.raises(FanSanityError):
        fan_sanity(fan, C4)


def test_fan_json():
    star = build_named_graph("star", 3)
    fan = classify_cells(enumerate_cells(star3_kernel()), star)
    data = fan_to_json(fan)
    assert data["dim"] == 2
    assert sum(1 for c in data["cells"] if c["broken"]) == 3
