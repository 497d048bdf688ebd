"""Finite projective planes, their incidence graphs and separation reports.

Planes come from homogeneous coordinates over the prime field; the
incidence identity N N^T = qI + J is verified entrywise and certifies
the bipartite adjacency spectrum, so the sqrt(q)-shift matrix is a
certified member of the graph's matrix class with corank q^2 + q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import DisconnectedError, Graph, modify
from .linalg import ExactMatrix
from .scalars import FieldScalar
from .schrodinger import SchrodingerMatrix, mu_edge_upper_bound, validate_membership
from .signcells import EtaCertificate, eta_lower_bound, lambda_lower_bound


class NotPrimeError(ValueError):
    def __init__(self, q: int):
        super().__init__(f"plane order {q} must be prime (prime powers unsupported)")
        self.q = q


class PlaneAxiomError(RuntimeError):
    """The constructed incidence structure failed N N^T = qI + J."""


class ModeParamMismatchError(ValueError):
    """Report mode incompatible with the given plane order."""


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ProjectivePlane:
    q: int
    points: tuple[tuple[int, int, int], ...]
    lines: tuple[frozenset[int], ...]  # point indices per line
    incidence: ExactMatrix  # points x lines, 0/1

    @property
    def size(self) -> int:
        return self.q * self.q + self.q + 1


def build_plane(q: int) -> ProjectivePlane:
    """PG(2, q) over the field with q elements, q prime.

    Points and lines are the projective classes of nonzero triples,
    normalized to leading coordinate 1 and ordered lexicographically;
    a point lies on a line iff their dot product vanishes mod q.
    """
    if not _is_prime(q):
        raise NotPrimeError(q)
    points = []
    for a in range(q):
        for b in range(q):
            points.append((1, a, b))
    for a in range(q):
        points.append((0, 1, a))
    points.append((0, 0, 1))
    points.sort()
    lines = []
    for coeffs in points:  # self-dual: same representatives
        on_line = frozenset(
            i
            for i, p in enumerate(points)
            if (coeffs[0] * p[0] + coeffs[1] * p[1] + coeffs[2] * p[2]) % q == 0
        )
        lines.append(on_line)
    m = len(points)
    incidence = ExactMatrix(
        [[1 if i in lines[j] else 0 for j in range(m)] for i in range(m)]
    )
    plane = ProjectivePlane(q, tuple(points), tuple(lines), incidence)
    _check_axioms(plane)
    return plane


def _check_axioms(plane: ProjectivePlane):
    q, m = plane.q, plane.size
    if len(plane.points) != m or len(plane.lines) != m:
        raise PlaneAxiomError(f"expected {m} points and lines")
    if any(len(line) != q + 1 for line in plane.lines):
        raise PlaneAxiomError("line of wrong size")
    N = plane.incidence
    NNt = N @ N.transpose()
    for i in range(m):
        for j in range(m):
            want = q + 1 if i == j else 1
            if NNt[i, j] != FieldScalar.of(want):
                raise PlaneAxiomError(f"N N^T entry ({i},{j}) is {NNt[i, j]}, want {want}")


def collinear(plane: ProjectivePlane, i: int, j: int, k: int) -> bool:
    return any({i, j, k} <= line for line in plane.lines)


# -- incidence graph and its certified matrix ---------------------------------


@dataclass(frozen=True)
class IncidenceGraphReport:
    plane: ProjectivePlane
    graph: Graph  # points 0..m-1, lines m..2m-1
    matrix: SchrodingerMatrix  # sqrt(q) I - A over Q(sqrt(q))
    corank: int
    spectrum_certificate: bool


def incidence_graph(plane: ProjectivePlane) -> IncidenceGraphReport:
    q, m = plane.q, plane.size
    edges = [
        (i, m + j)
        for j, line in enumerate(plane.lines)
        for i in line
    ]
    G = Graph.from_edges(2 * m, edges)
    root = FieldScalar.sqrt_of(q)
    n = 2 * m
    entries = [
        [
            root if i == j else (FieldScalar.of(-1) if G.has_edge(i, j) else FieldScalar.of(0))
            for j in range(n)
        ]
        for i in range(n)
    ]
    S = validate_membership(G, ExactMatrix(entries))
    # the incidence identity pins the adjacency spectrum, hence the corank
    return IncidenceGraphReport(plane, G, S, S.corank(), True)


# -- separation pipelines -------------------------------------------------------


@dataclass(frozen=True)
class GapConstruction:
    """Deterministic trace of the vertex/edge surgery on the q=3 graph."""

    removed_points: tuple[int, int, int]
    removed_edge: tuple[int, int]
    degree_two_vertices: tuple[int, ...]
    contracted: tuple[tuple[int, int], ...]
    graph: Graph  # after deletions, before contraction
    contracted_graph: Graph


def _first_noncollinear_triple(plane: ProjectivePlane) -> tuple[int, int, int]:
    m = plane.size
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                if not collinear(plane, i, j, k):
                    return (i, j, k)
    raise PlaneAxiomError("plane has no non-collinear triple")


def build_gap_graph(report: IncidenceGraphReport) -> GapConstruction:
    """Delete three non-collinear point-vertices, drop one edge at a
    degree-3 vertex, then contract one edge per degree-2 vertex."""
    plane, H = report.plane, report.graph
    triple = _first_noncollinear_triple(plane)
    after_points = modify(H, "delete_vertices", list(triple))
    Gp = after_points.graph

    deg2 = sorted(v for v in range(Gp.n) if Gp.degree(v) == 2)
    if len(deg2) != 3:
        raise PlaneAxiomError(f"expected 3 degree-2 vertices, found {len(deg2)}")
    edge = next(
        (u, v)
        for u, v in Gp.edge_list()
        if Gp.degree(u) == 3 or Gp.degree(v) == 3
    )
    G = modify(Gp, "delete_edges", [edge]).graph

    deg2_after = sorted(v for v in range(G.n) if G.degree(v) == 2)
    if len(deg2_after) != 4:
        raise PlaneAxiomError(f"expected 4 degree-2 vertices, found {len(deg2_after)}")
    F = []
    used = set()
    for v in deg2_after:
        e = next(tuple(sorted(e)) for e in G.edge_list() if v in e and tuple(sorted(e)) not in used)
        used.add(e)
        F.append(e)
    contracted = modify(G, "contract_edges", F).graph
    return GapConstruction(triple, edge, tuple(deg2_after), tuple(F), G, contracted)


def separation_report(q: int, mode: str, dim_guard: int = 6) -> dict:
    """Certified bound chains for one plane order.

    prop_9_11 and thm_gap are pinned to q = 3 (the desk-scale instance);
    asymptotic works for any prime order.
    """
    if mode in ("prop_9_11", "thm_gap") and q != 3:
        raise ModeParamMismatchError(f"mode {mode} requires q=3, got {q}")
    plane = build_plane(q)
    report = incidence_graph(plane)
    H, S = report.graph, report.matrix
    base = {
        "q": q,
        "mode": mode,
        "vertices": H.n,
        "edges": H.m,
        "corank": report.corank,
    }
    if mode == "prop_9_11":
        mu_upper = mu_edge_upper_bound(H)
        first_edge = H.edge_list()[0]
        cert = eta_lower_bound(H, S, [first_edge], dim_guard=dim_guard)
        base.update(
            {
                "muUpper": mu_upper,
                "etaLower": cert.bound,
                "etaEdge": list(first_edge),
                "etaMethod": cert.method,
                # eta certifies the topological parameter from below, and
                # dropping an edge cannot increase it
                "sigmaLowerChain": [
                    f"eta(H-e) >= {cert.bound}",
                    f"sigma(H-e) >= eta(H-e) >= {cert.bound}",
                    f"sigma(H) >= sigma(H-e) >= {cert.bound}",
                ],
                "sigmaLower": cert.bound,
            }
        )
        return base
    if mode == "thm_gap":
        gap = build_gap_graph(report)
        mu_upper = mu_edge_upper_bound(gap.contracted_graph)
        first_edge = H.edge_list()[0]
        eta_cert = eta_lower_bound(H, S, [first_edge], dim_guard=dim_guard)
        sigma_lower = eta_cert.bound - 3  # vertex removal costs at most 1 each
        base.update(
            {
                "removedPoints": list(gap.removed_points),
                "removedEdge": list(gap.removed_edge),
                "contracted": [list(e) for e in gap.contracted],
                "edgesAfterDeletion": gap.graph.m,
                "edgesAfterContraction": gap.contracted_graph.m,
                "muUpper": mu_upper,
                "sigmaLower": sigma_lower,
                "sigmaLowerChain": [
                    f"sigma(H_3 - e) >= eta(H_3 - e) >= {eta_cert.bound}",
                    "removing a vertex decreases sigma by at most 1 (cited)",
                    f"sigma(G) >= {eta_cert.bound} - 3 = {sigma_lower}",
                ],
            }
        )
        return base
    if mode == "asymptotic":
        base.update(
            {
                "muUpper": mu_edge_upper_bound(H),
                "lambdaLower": lambda_lower_bound(H, S),
            }
        )
        return base
    raise ModeParamMismatchError(f"unknown mode {mode!r}")


def plane_to_json(plane: ProjectivePlane) -> dict:
    return {
        "q": plane.q,
        "points": [list(p) for p in plane.points],
        "lines": [sorted(line) for line in plane.lines],
    }
