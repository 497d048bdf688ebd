"""Deciding the sigma <= 5 threshold with emittable obstruction certificates.

Glue a disk to every cycle of the graph, form the GF(2) space of
symmetric 4-cycles of the deleted product (generated by unordered pairs
of vertex-disjoint cycles), and evaluate the mod-2 crossing form of a
moment-curve map on a kernel basis.  The form vanishes everywhere iff
sigma <= 5; a nonzero value yields a polynomial-size certificate whose
triangle-pair pushforward any verifier can recheck independently.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .graphs import CapExceededError, CycleId, Graph, enumerate_cycles

DEFAULT_SEED = 0
MAX_PARAM_RETRIES = 10


class DegeneratePositionError(RuntimeError):
    """Triangle images touch non-transversally; re-seed the parameters."""


# -- the glued-disk complex ----------------------------------------------------


@dataclass(frozen=True)
class TwoClosure:
    graph: Graph
    cycles: tuple[CycleId, ...]
    triangulations: dict[CycleId, tuple[tuple[int, int, int], ...]]

    def __post_init__(self):
        object.__setattr__(self, "triangulations", dict(self.triangulations))


def fan_triangulation(cycle: CycleId) -> tuple[tuple[int, int, int], ...]:
    """Disk triangles all containing the cycle's minimal vertex."""
    seq = cycle.vertex_sequence
    return tuple((seq[0], seq[i], seq[i + 1]) for i in range(1, len(seq) - 1))


def two_closure(G: Graph, cap: int = 100_000) -> TwoClosure:
    cycles = tuple(enumerate_cycles(G, cap))
    tri = {c: fan_triangulation(c) for c in cycles}
    return TwoClosure(G, cycles, tri)


# -- symmetric chain spaces over GF(2) -----------------------------------------


def _pair_key(r: CycleId, s: CycleId):
    return (len(r), r.vertex_sequence) <= (len(s), s.vertex_sequence)


def canonical_pair(r: CycleId, s: CycleId) -> tuple[CycleId, CycleId]:
    return (r, s) if _pair_key(r, s) else (s, r)


@dataclass(frozen=True)
class SymChain4:
    """GF(2) combination of unordered vertex-disjoint cycle pairs."""

    pairs: frozenset[tuple[CycleId, CycleId]]

    def __bool__(self):
        return bool(self.pairs)

    def cycles(self) -> set[CycleId]:
        return {c for pair in self.pairs for c in pair}


def chain_boundary_is_zero(z: SymChain4) -> bool:
    """The partner 1-chains of every cycle must cancel mod 2."""
    partners: dict[CycleId, set[frozenset[int]]] = {}
    for r, s in z.pairs:
        for a, b in ((r, s), (s, r)):
            acc = partners.setdefault(a, set())
            acc ^= set(b.edges())
            partners[a] = acc
    return all(not edges for edges in partners.values())


@dataclass(frozen=True)
class SymChainBasis:
    gen4: tuple[tuple[CycleId, CycleId], ...]
    gen3: tuple[tuple[tuple[int, int], CycleId], ...]
    boundary_rows: tuple[int, ...]  # one bitmask over gen4 per gen3 generator
    kernel: tuple[SymChain4, ...]


def _gf2_kernel(rows: list[int], ncols: int) -> list[int]:
    """Kernel basis of the row system, vectors as column bitmasks."""
    work = [r for r in rows if r]
    pivots: dict[int, int] = {}  # column -> row bitmask
    for row in work:
        while row:
            col = row.bit_length() - 1
            if col in pivots:
                row ^= pivots[col]
            else:
                pivots[col] = row
                break
    # back-substitute to reduced form
    for col in sorted(pivots, reverse=True):
        for other in pivots:
            if other != col and pivots[other] >> col & 1:
                pivots[other] ^= pivots[col]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = 1 << f
        for col, row in pivots.items():
            if row >> f & 1:
                vec |= 1 << col
        basis.append(vec)
    return basis


def sym_cycle_basis(T: TwoClosure, restrict_pairs=None) -> SymChainBasis:
    """Boundary matrix of pair generators and a kernel basis.

    The column of pair {r, s} has ones at (e, s) for edges e of r and at
    (e, r) for edges e of s; a chain is a 4-cycle iff those cancel.
    """
    cycles = T.cycles
    if restrict_pairs is None:
        gen4 = []
        by_vertices = [(c, c.vertices()) for c in cycles]
        for i, (r, rv) in enumerate(by_vertices):
            for s, sv in by_vertices[i + 1:]:
                if rv.isdisjoint(sv):
                    gen4.append(canonical_pair(r, s))
        gen4.sort(key=lambda p: (len(p[0]), p[0].vertex_sequence, len(p[1]), p[1].vertex_sequence))
    else:
        gen4 = sorted(
            restrict_pairs,
            key=lambda p: (len(p[0]), p[0].vertex_sequence, len(p[1]), p[1].vertex_sequence),
        )
    col_of = {pair: j for j, pair in enumerate(gen4)}

    row_of: dict[tuple[tuple[int, int], CycleId], int] = {}
    gen3: list[tuple[tuple[int, int], CycleId]] = []
    rows: list[int] = []

    def row_index(edge, cycle):
        key = (edge, cycle)
        if key not in row_of:
            row_of[key] = len(gen3)
            gen3.append(key)
            rows.append(0)
        return row_of[key]

    for pair, j in col_of.items():
        r, s = pair
        for a, b in ((r, s), (s, r)):
            for e in a.edges():
                idx = row_index(tuple(sorted(e)), b)
                rows[idx] |= 1 << j
    kernel_masks = _gf2_kernel(rows, len(gen4))
    kernel = tuple(
        SymChain4(frozenset(gen4[j] for j in range(len(gen4)) if mask >> j & 1))
        for mask in kernel_masks
    )
    return SymChainBasis(tuple(gen4), tuple(gen3), tuple(rows), kernel)


# -- exact moment-curve crossing test -------------------------------------------


def _moment_point(t: int) -> tuple[Fraction, ...]:
    t = Fraction(t)
    return (t, t * t, t * t * t, t * t * t * t)


def _solve_rational(matrix: list[list[Fraction]], rhs: list[Fraction]):
    """Gaussian elimination; None when the square system is singular."""
    n = len(matrix)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def triangles_cross(tri_a, tri_b, params: dict[int, int]) -> int:
    """1 iff the closed moment-curve triangles cross in an interior point.

    Barycentric 6x6 system; a singular system or a boundary contact is a
    degenerate position and raises.
    """
    verts = list(tri_a) + list(tri_b)
    ts = [params[v] for v in verts]
    if len(set(ts)) != 6:
        raise DegeneratePositionError("moment parameters not injective on the pair")
    pts = [_moment_point(t) for t in ts]
    matrix = []
    for c in range(4):
        matrix.append(
            [pts[i][c] for i in range(3)] + [-pts[j][c] for j in range(3, 6)]
        )
    matrix.append([Fraction(1)] * 3 + [Fraction(0)] * 3)
    matrix.append([Fraction(0)] * 3 + [Fraction(1)] * 3)
    rhs = [Fraction(0)] * 4 + [Fraction(1), Fraction(1)]
    sol = _solve_rational(matrix, rhs)
    if sol is None:
        raise DegeneratePositionError(f"affine hulls of {tri_a} and {tri_b} degenerate")
    if any(x == 0 for x in sol):
        raise DegeneratePositionError(f"boundary contact between {tri_a} and {tri_b}")
    return 1 if all(x > 0 for x in sol) else 0


def crossing_parity(T: TwoClosure, pair, params: dict[int, int]) -> int:
    """Parity of crossings between the two glued disks under the moment map."""
    r, s = pair
    if not r.vertices().isdisjoint(s.vertices()):
        raise ValueError("cycle pair must be vertex-disjoint")
    tri_r = T.triangulations.get(r) or fan_triangulation(r)
    tri_s = T.triangulations.get(s) or fan_triangulation(s)
    total = 0
    for ta in tri_r:
        for tb in tri_s:
            total ^= triangles_cross(ta, tb, params)
    return total


def evaluate_I(z: SymChain4, T: TwoClosure, params: dict[int, int]) -> int:
    """Crossing form of the moment map on a symmetric 4-cycle."""
    if not chain_boundary_is_zero(z):
        raise ValueError("chain is not a 4-cycle")
    total = 0
    for pair in z.pairs:
        total ^= crossing_parity(T, pair, params)
    return total


def default_params(G: Graph) -> dict[int, int]:
    return {v: v + 1 for v in range(G.n)}


def _random_params(G: Graph, rng: random.Random) -> dict[int, int]:
    values = rng.sample(range(1, 20 * G.n + 1), G.n)
    return {v: values[v] for v in range(G.n)}


# -- decision and certificates ---------------------------------------------------


@dataclass(frozen=True)
class ObstructionCertificate:
    moment_params: dict[int, int]
    chain: SymChain4
    pushforward: frozenset[tuple[tuple[int, int, int], tuple[int, int, int]]]
    i_value: int

    def __post_init__(self):
        object.__setattr__(self, "moment_params", dict(self.moment_params))


def pushforward_pairs(z: SymChain4) -> frozenset:
    """Image of the chain in the full-simplex 2-skeleton: unordered
    triangle pairs with GF(2) multiplicities."""
    acc: set[tuple] = set()
    for r, s in z.pairs:
        for ta in fan_triangulation(r):
            for tb in fan_triangulation(s):
                key = tuple(sorted((tuple(sorted(ta)), tuple(sorted(tb)))))
                acc ^= {key}
    return frozenset(acc)


@dataclass(frozen=True)
class SigmaVerdict:
    sigma_le_5: bool
    generators: int
    kernel_dim: int
    i_values: tuple[int, ...]
    certificate: ObstructionCertificate | None
    moment_params: dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "moment_params", dict(self.moment_params))


def decide_sigma_le_5(
    G: Graph, cap: int = 100_000, seed: int = DEFAULT_SEED
) -> SigmaVerdict:
    """sigma(G) <= 5 iff the crossing form vanishes on a kernel basis.

    On failure emits the pushforward certificate; degenerate parameter
    choices are retried with fresh seeded draws.
    """
    T = two_closure(G, cap)
    basis = sym_cycle_basis(T)
    rng = random.Random(seed)
    params = default_params(G)
    for attempt in range(MAX_PARAM_RETRIES):
        try:
            i_values = tuple(evaluate_I(z, T, params) for z in basis.kernel)
            break
        except DegeneratePositionError:
            params = _random_params(G, rng)
    else:
        raise DegeneratePositionError(
            f"no general-position parameters after {MAX_PARAM_RETRIES} retries"
        )
    bad = next((k for k, v in enumerate(i_values) if v == 1), None)
    if bad is None:
        return SigmaVerdict(True, len(basis.gen4), len(basis.kernel), i_values, None, params)
    z = basis.kernel[bad]
    cert = ObstructionCertificate(params, z, pushforward_pairs(z), 1)
    return SigmaVerdict(False, len(basis.gen4), len(basis.kernel), i_values, cert, params)


def verify_certificate(cert: ObstructionCertificate, G: Graph) -> tuple[bool, str]:
    """Independent recheck, safe on adversarial input.

    Confirms the chain is made of vertex-disjoint graph cycles, is a
    4-cycle, pushes forward to the stated triangle pairs, and that the
    crossing form of the pushforward under the stated parameters is 1.
    Polynomial in the certificate size.
    """
    try:
        params = {int(k): int(v) for k, v in cert.moment_params.items()}
        if len(set(params.values())) != len(params):
            return False, "moment parameters not injective"
        for r, s in cert.chain.pairs:
            for cyc in (r, s):
                seq = cyc.vertex_sequence
                if len(set(seq)) != len(seq) or len(seq) < 3:
                    return False, f"not a simple cycle: {seq}"
                if CycleId.canonical(seq).vertex_sequence != seq:
                    return False, f"cycle not canonical: {seq}"
                for i in range(len(seq)):
                    u, w = seq[i], seq[(i + 1) % len(seq)]
                    if not G.has_edge(u, w):
                        return False, f"missing edge ({u},{w})"
                if any(v not in params for v in seq):
                    return False, "vertex without moment parameter"
            if not r.vertices().isdisjoint(s.vertices()):
                return False, f"pair not vertex-disjoint: {r.vertex_sequence}, {s.vertex_sequence}"
        if not cert.chain.pairs:
            return False, "empty chain"
        if not chain_boundary_is_zero(cert.chain):
            return False, "chain boundary does not vanish"
        if pushforward_pairs(cert.chain) != cert.pushforward:
            return False, "pushforward does not match the chain"
        if cert.i_value != 1:
            return False, "certificate must claim I = 1"
        total = 0
        for ta, tb in cert.pushforward:
            total ^= triangles_cross(ta, tb, params)
        if total != 1:
            return False, f"crossing form of pushforward is {total}"
        return True, "ok"
    except DegeneratePositionError as exc:
        return False, f"degenerate parameters: {exc}"
    except (KeyError, ValueError, TypeError) as exc:
        return False, f"malformed certificate: {exc}"


# -- JSON ------------------------------------------------------------------------


def certificate_to_json(cert: ObstructionCertificate) -> dict:
    pairs = sorted(
        ((list(r.vertex_sequence), list(s.vertex_sequence)) for r, s in cert.chain.pairs)
    )
    push = sorted((list(a), list(b)) for a, b in cert.pushforward)
    return {
        "momentParams": {str(v): t for v, t in sorted(cert.moment_params.items())},
        "pairs": [{"cycleA": a, "cycleB": b} for a, b in pairs],
        "pushforward": [{"triA": a, "triB": b} for a, b in push],
        "iValue": cert.i_value,
    }


def certificate_from_json(data) -> ObstructionCertificate:
    if isinstance(data, str):
        data = json.loads(data)
    params = {int(k): int(v) for k, v in data["momentParams"].items()}
    pairs = frozenset(
        canonical_pair(
            CycleId(tuple(item["cycleA"])), CycleId(tuple(item["cycleB"]))
        )
        for item in data["pairs"]
    )
    push = frozenset(
        (tuple(item["triA"]), tuple(item["triB"])) for item in data["pushforward"]
    )
    return ObstructionCertificate(params, SymChain4(pairs), push, int(data["iValue"]))
