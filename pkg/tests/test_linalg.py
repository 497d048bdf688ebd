import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cdvlab.linalg import (
    ExactMatrix,
    Inertia,
    NonSymmetricError,
    Subspace,
    constrain_subspace,
    inertia,
    kernel_basis,
    matrix_from_json,
    matrix_to_json,
    rank,
)
from cdvlab.scalars import FieldScalar

from .oracles import plain_rank


def mat(rows):
    return ExactMatrix(rows)


def neg_adjacency_star3():
    return mat([[0, 1, 1, 1], [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]]).scale(-1)


# -- kernels ---------------------------------------------------------------


def test_kernel_star_adjacency():
    # solved by hand: x_center = 0 and the leaf coordinates sum to zero
    K = kernel_basis(neg_adjacency_star3())
    assert K.dim == 2
    for b in K.basis:
        assert b[0].is_zero()
        assert (b[1] + b[2] + b[3]).is_zero()


def test_kernel_identity_trivial():
    assert kernel_basis(ExactMatrix.identity(4)).dim == 0


def test_kernel_all_ones():
    J4 = mat([[-1] * 4 for _ in range(4)])
    assert kernel_basis(J4).dim == 3


@given(st.integers(2, 5), st.randoms(use_true_random=False))
@settings(max_examples=25, deadline=None)
def test_kernel_vectors_annihilate(n, rng):
    M = mat([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
    K = kernel_basis(M)
    for b in K.basis:
        image = [sum((M[i, j] * b[j] for j in range(n)), FieldScalar.of(0)) for i in range(n)]
        assert all(x.is_zero() for x in image)
    assert K.dim == n - rank(M)


def test_subspace_canonical_idempotent():
    L = Subspace(3, [[1, 1, 0], [0, 1, 1]])
    again = Subspace(3, L.basis)
    assert L == again


# -- rank -------------------------------------------------------------------


def test_rank_examples():
    assert rank(mat([[1] * 5 for _ in range(5)])) == 1
    assert rank(ExactMatrix.identity(3)) == 3
    assert rank(ExactMatrix.zeros(0, 9)) == 0


@given(st.integers(2, 5), st.integers(2, 5), st.randoms(use_true_random=False))
@settings(max_examples=30, deadline=None)
def test_rank_transpose_shuffle(r, c, rng):
    M = mat([[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)])
    assert rank(M) == rank(M.transpose())
    rows = list(M.entries)
    rng.shuffle(rows)
    assert rank(mat(rows)) == rank(M)
    assert rank(M) == plain_rank(M)


def test_rank_quadratic_field():
    root = FieldScalar.sqrt_of(2)
    M = mat([[root, 2], [1, root]])  # det = 2 - 2 = 0
    assert rank(M) == 1


# -- inertia ----------------------------------------------------------------


def test_inertia_examples():
    assert inertia(mat([[-1] * 5 for _ in range(5)])) == Inertia(1, 4, 0)
    assert inertia(mat([[1, 0, 0], [0, -2, 0], [0, 0, 0]])) == Inertia(1, 1, 1)
    # eigenvalues of -A(K_{1,3}) are -sqrt(3), 0, 0, sqrt(3)
    assert inertia(neg_adjacency_star3()) == Inertia(1, 2, 1)


def test_inertia_hyperbolic_block():
    assert inertia(mat([[0, 5], [5, 0]])) == Inertia(1, 0, 1)


def test_inertia_requires_symmetry():
    with pytest.raises(NonSymmetricError):
        inertia(mat([[0, 1], [2, 0]]))


@given(st.integers(2, 7), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_inertia_zero_count_is_corank(n, rng):
    entries = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            entries[i][j] = entries[j][i] = rng.randint(-3, 3)
    M = mat(entries)
    sig = inertia(M)
    assert sig.n_neg + sig.n_zero + sig.n_pos == n
    assert sig.n_zero == kernel_basis(M).dim


@given(st.integers(2, 8), st.randoms(use_true_random=False))
@settings(max_examples=25, deadline=None)
def test_inertia_against_float_eigensolver(n, rng):
    # advisory cross-check only; integer inputs keep the float side honest
    entries = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            entries[i][j] = entries[j][i] = rng.randint(-4, 4)
    sig = inertia(mat(entries))
    eig = np.linalg.eigvalsh(np.array(entries, dtype=float))
    assert sig.n_neg == int((eig < -1e-9).sum())
    assert sig.n_pos == int((eig > 1e-9).sum())
    assert sig.n_zero == int((abs(eig) <= 1e-9).sum())


# -- constrained subspaces -----------------------------------------------------


def test_constrain_examples():
    L = kernel_basis(mat([[-1] * 4 for _ in range(4)]))
    constrained = constrain_subspace(L, [[1, 1, 0, 0]])
    assert constrained.dim == 2
    assert constrain_subspace(L, []) == L


def test_constrain_counts_dimension_drop():
    L = Subspace(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    C = constrain_subspace(L, [[1, 1, 1], [1, -1, 0]])
    assert C.dim == 1


def test_coordinates_round_trip():
    L = Subspace(4, [[1, 0, 1, 0], [0, 1, 0, -1]])
    x = L.vector_from_coefficients([Fraction(2), Fraction(-3)])
    assert L.coordinates_of(x) == (FieldScalar.of(2), FieldScalar.of(-3))
    assert not L.contains([1, 1, 1, 1])


# -- JSON -----------------------------------------------------------------------


def test_matrix_json_round_trip():
    root = FieldScalar.sqrt_of(3)
    M = mat([[root, -1], [-1, root]])
    blob = json.dumps(matrix_to_json(M))
    assert matrix_from_json(blob) == M


def test_matrix_json_plain_rational():
    M = mat([[Fraction(1, 2), 0], [0, Fraction(-7, 3)]])
    data = matrix_to_json(M)
    assert data["q"] is None
    assert matrix_from_json(data) == M
