"""Independent oracles for the test suite.

Each oracle recomputes a quantity by a route disjoint from the library
implementation it checks: cycle censuses by subset/permutation search,
sign-pattern fans by exhaustive 3^n LP feasibility, the non-edge pattern
matrix by literal matrix products, ranks by plain fraction elimination,
and moment-curve triangle crossings by the interleaving criterion.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations, product

from cdvlab.exactlp import strictly_feasible
from cdvlab.graphs import Graph
from cdvlab.linalg import ExactMatrix, Subspace, kernel_basis
from cdvlab.scalars import FieldScalar


def cycle_count_brute(G: Graph) -> int:
    """Count simple cycles: every vertex subset, every Hamiltonian order."""
    total = 0
    for size in range(3, G.n + 1):
        for subset in combinations(range(G.n), size):
            seen = set()
            first = subset[0]
            for perm in permutations(subset[1:]):
                seq = (first,) + perm
                if all(
                    G.has_edge(seq[i], seq[(i + 1) % size]) for i in range(size)
                ):
                    canon = min(seq[1], seq[-1])
                    key = seq if seq[1] == canon else (first,) + tuple(reversed(perm))
                    seen.add(key)
            total += len(seen)
    return total


def sign_pattern_oracle(L: Subspace, seed: int = 999, samples: int = 400) -> set:
    """All realizable sign patterns by 3^n exhaustion with exact LP.

    Sampling only supplies positive witnesses (checked exactly); every
    undecided candidate goes to the LP.
    """
    n, d = L.ambient_dim, L.dim
    ells = [tuple(b[v] for b in L.basis) for v in range(n)]
    found: set = {(0,) * n}
    rng = random.Random(seed)
    for _ in range(samples):
        coeffs = [rng.randint(-30, 30) for _ in range(d)]
        x = L.vector_from_coefficients(coeffs)
        pat = tuple(v.sign() for v in x)
        found.add(pat)
        found.add(tuple(-s for s in pat))

    strata: dict[frozenset, tuple] = {}

    def stratum(zeros: frozenset):
        if zeros not in strata:
            if zeros:
                W = kernel_basis(ExactMatrix([ells[v] for v in sorted(zeros)])).basis
            else:
                W = tuple(
                    tuple(FieldScalar.of(1 if i == j else 0) for j in range(d))
                    for i in range(d)
                )
            restricted = [
                tuple(
                    sum((e * wi for e, wi in zip(ells[v], w)), FieldScalar.of(0))
                    for w in W
                )
                for v in range(n)
            ]
            sat = frozenset(
                v for v in range(n) if all(x.is_zero() for x in restricted[v])
            )
            strata[zeros] = (restricted, sat)
        return strata[zeros]

    out = set()
    for cand in product((-1, 0, 1), repeat=n):
        if cand in out:
            continue
        if tuple(-s for s in cand) in out:
            out.add(cand)
            continue
        if cand in found:
            out.add(cand)
            continue
        zeros = frozenset(v for v in range(n) if cand[v] == 0)
        restricted, sat = stratum(zeros)
        if any(cand[v] != 0 and v in sat for v in range(n)):
            continue
        rows = [
            [x if cand[v] > 0 else -x for x in restricted[v]]
            for v in range(n)
            if cand[v] != 0
        ]
        feasible, _ = strictly_feasible(rows)
        if feasible:
            out.add(cand)
    return out


def naive_sah_matrix(S) -> ExactMatrix:
    """N(M) by literal products M E_ij + E_ij^T M, then non-edge extraction."""
    G, M = S.graph, S.matrix
    n = G.n
    ne = [
        (u, v) for u in range(n) for v in range(u + 1, n) if not G.has_edge(u, v)
    ]
    columns = []
    for i in range(n):
        for j in range(n):
            E = [[FieldScalar.of(1 if (r, c) == (i, j) else 0) for c in range(n)] for r in range(n)]
            Em = ExactMatrix(E)
            prod = (M @ Em) + (Em.transpose() @ M)
            columns.append([prod[u, v] for u, v in ne])
    rows = [[columns[c][r] for c in range(n * n)] for r in range(len(ne))]
    if not rows:
        return ExactMatrix.zeros(0, n * n)
    return ExactMatrix(rows)


def plain_rank(M: ExactMatrix) -> int:
    """Ordinary division-based elimination, no Bareiss."""
    rows = [list(r) for r in M.entries]
    rank = 0
    for col in range(M.cols):
        piv = next(
            (r for r in range(rank, len(rows)) if not rows[r][col].is_zero()), None
        )
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def triangles_interleave(params_a, params_b) -> int:
    """Moment-curve triangles cross iff their parameters alternate."""
    order = sorted(list(params_a) + list(params_b))
    labels = [t in set(params_a) for t in order]
    switches = sum(1 for i in range(6) if labels[i] != labels[(i + 1) % 6])
    return 1 if switches == 6 else 0


def components_brute(G: Graph, S) -> int:
    """Component count by label propagation to a fixed point."""
    S = sorted(S)
    label = {v: v for v in S}
    changed = True
    while changed:
        changed = False
        for u, v in G.edge_list():
            if u in label and v in label:
                low = min(label[u], label[v])
                if label[u] != low or label[v] != low:
                    label[u] = label[v] = low
                    changed = True
    return len(set(label.values()))
