"""The matrix class of a graph: membership, corank, SAH, mu bounds.

A certified matrix has negative entries exactly on edges, zeros on
non-edges, free diagonal, and exactly one negative eigenvalue.  Its
corank is a certified lower bound for the spectral minor-monotone
parameter once the strong Arnold condition holds, which is decided by
the rank of an auxiliary matrix built from the non-edge pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .graphs import DisconnectedError, Graph
from .linalg import (
    ExactMatrix,
    Inertia,
    NonSymmetricError,
    Subspace,
    inertia,
    kernel_basis,
    rank,
)
from .scalars import ZERO


class PatternViolationError(ValueError):
    def __init__(self, u: int, v: int, reason: str):
        super().__init__(f"entry ({u},{v}) {reason}")
        self.u, self.v = u, v


class InertiaViolationError(ValueError):
    def __init__(self, actual: Inertia):
        super().__init__(
            f"matrix has {actual.n_neg} negative eigenvalues, needs exactly 1"
        )
        self.actual = actual


@dataclass(frozen=True)
class SchrodingerMatrix:
    """A matrix validated against its graph's pattern and inertia."""

    graph: Graph
    matrix: ExactMatrix

    def kernel(self) -> Subspace:
        return _kernel_cached(self.matrix)

    def corank(self) -> int:
        return self.kernel().dim


@lru_cache(maxsize=64)
def _kernel_cached(M: ExactMatrix) -> Subspace:
    return kernel_basis(M)


def validate_membership(G: Graph, M: ExactMatrix) -> SchrodingerMatrix:
    """Check the edge/non-edge sign pattern and the one-negative-eigenvalue
    condition; raises a structured violation otherwise."""
    n = G.n
    if M.rows != n or M.cols != n:
        raise ValueError(f"matrix is {M.rows}x{M.cols}, graph has {n} vertices")
    if not M.is_symmetric():
        raise NonSymmetricError("matrix must be symmetric")
    for u in range(n):
        for v in range(u + 1, n):
            entry = M[u, v]
            if G.has_edge(u, v):
                if entry.sign() >= 0:
                    raise PatternViolationError(u, v, "must be negative on an edge")
            elif not entry.is_zero():
                raise PatternViolationError(u, v, "must be zero on a non-edge")
    sig = inertia(M)
    if sig.n_neg != 1:
        raise InertiaViolationError(sig)
    return SchrodingerMatrix(G, M)


def corank(S: SchrodingerMatrix) -> int:
    return S.corank()


# -- strong Arnold condition ---------------------------------------------------


def non_edges(G: Graph) -> list[tuple[int, int]]:
    return [
        (u, v)
        for u in range(G.n)
        for v in range(u + 1, G.n)
        if not G.has_edge(u, v)
    ]


@dataclass(frozen=True)
class SahReport:
    p: int
    n_matrix: ExactMatrix
    rank: int
    sah_holds: bool


def sah_matrix(S: SchrodingerMatrix) -> ExactMatrix:
    """p x n^2 matrix: column (i,j) holds M E_ij + E_ij^T M on non-edges.

    Non-edges (rows) ordered lexicographically with u < v; columns
    ordered lexicographically over (i, j).  Entry at row (u,v), column
    (i,j) is M[u,i]*[v==j] + M[i,v]*[u==j].
    """
    G, M = S.graph, S.matrix
    n = G.n
    ne = non_edges(G)
    rows = []
    for u, v in ne:
        row = []
        for i in range(n):
            for j in range(n):
                entry = ZERO
                if v == j:
                    entry = entry + M[u, i]
                if u == j:
                    entry = entry + M[i, v]
                row.append(entry)
        rows.append(row)
    if not rows:
        return ExactMatrix.zeros(0, n * n)
    return ExactMatrix(rows)


def sah_check(S: SchrodingerMatrix) -> SahReport:
    N = sah_matrix(S)
    p = N.rows
    r = rank(N) if p else 0
    return SahReport(p, N, r, r == p)


def mu_lower_certificate(S: SchrodingerMatrix) -> int | None:
    """corank(S) when the strong Arnold condition holds, else None."""
    report = sah_check(S)
    if not report.sah_holds:
        return None
    return S.corank()


# -- edge-count upper bound -----------------------------------------------------


class K33Exception(RuntimeError):
    """The edge-count bound has a single exceptional graph."""


def _is_k33(G: Graph) -> bool:
    # 3-regular bipartite on 6 vertices forces complete bipartite 3+3
    if G.n != 6 or G.m != 9:
        return False
    if any(G.degree(v) != 3 for v in range(6)):
        return False
    side = {0: 0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in G.neighbors(x):
            if y not in side:
                side[y] = 1 - side[x]
                stack.append(y)
            elif side[y] == side[x]:
                return False
    return len(side) == 6


def mu_edge_upper_bound(G: Graph) -> int:
    """Largest k with k(k+1)/2 <= |E|, an upper bound on the spectral
    parameter for every connected graph except K_{3,3}."""
    if not G.is_connected():
        raise DisconnectedError("edge bound requires a connected graph")
    if _is_k33(G):
        raise K33Exception("K_{3,3} is the exception to the edge bound")
    m = G.m
    t = math.isqrt(8 * m + 1)
    return (t - 1) // 2


# -- report ----------------------------------------------------------------------


def bounds_report(G: Graph, S: SchrodingerMatrix | None = None) -> dict:
    """JSON-ready summary of certified bounds for one graph."""
    out: dict = {
        "graph": {"n": G.n, "edges": G.edge_list()},
        "exceptions": [],
    }
    try:
        out["muUpper"] = mu_edge_upper_bound(G)
    except K33Exception:
        out["muUpper"] = None
        out["exceptions"].append("K33")
    if S is not None:
        report = sah_check(S)
        out["corank"] = S.corank()
        out["sah"] = {"p": report.p, "rank": report.rank, "holds": report.sah_holds}
        out["muLower"] = mu_lower_certificate(S)
    else:
        out["corank"] = None
        out["sah"] = None
        out["muLower"] = None
    return out
