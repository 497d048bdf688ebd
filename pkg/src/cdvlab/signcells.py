"""Sign-pattern fans of exact subspaces and representation certificates.

A subspace L of R^V splits into relatively open cones of constant sign
pattern.  This module enumerates those cones exactly (breadth-first wall
crossing seeded at a generic cell, every candidate validated by exact LP
feasibility), classifies broken cones, checks the valid/semivalid
support-connectivity clauses per cone, and turns kernels of certified
matrices into lower-bound certificates for the representation parameters.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, replace

from . import _fastfan as _ff
from .graphs import DisconnectedError, Graph, induced_components, support_profile
from .linalg import ExactMatrix, Subspace, constrain_subspace, kernel_basis
from .scalars import ZERO, ONE, FieldScalar

DEFAULT_DIM_GUARD = 6


class DimGuardExceededError(RuntimeError):
    """Fan too high-dimensional to enumerate; use the sampled verifier."""

    def __init__(self, dim: int, guard: int):
        super().__init__(
            f"subspace dimension {dim} exceeds guard {guard}; "
            "use verify_representation_sampled"
        )
        self.dim = dim
        self.guard = guard


class HypothesisUnverifiedError(RuntimeError):
    """Neither exact cell enumeration nor the degree criterion applies."""


class FanSanityError(AssertionError):
    """Structural property of broken cones failed."""


@dataclass(frozen=True)
class SignCell:
    pattern: tuple[int, ...]
    dim: int
    witness: tuple[FieldScalar, ...]

    @property
    def supp_plus(self) -> frozenset[int]:
        return frozenset(v for v, s in enumerate(self.pattern) if s > 0)

    @property
    def supp_minus(self) -> frozenset[int]:
        return frozenset(v for v, s in enumerate(self.pattern) if s < 0)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(v for v, s in enumerate(self.pattern) if s != 0)

    def is_zero(self) -> bool:
        return not self.support

    def pattern_string(self) -> str:
        return "".join({1: "+", 0: "0", -1: "-"}[s] for s in self.pattern)


def _is_face(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """Sign condition for cone a lying in the boundary of cone b."""
    strict = False
    for sa, sb in zip(a, b):
        if sa != 0 and sa != sb:
            return False
        if sa != sb:
            strict = True
    return strict


@dataclass(frozen=True)
class FanPL:
    """Fan of sign-pattern cones of a subspace, optionally graph-classified."""

    subspace: Subspace
    cells: tuple[SignCell, ...]
    broken: frozenset[int] | None = None  # indices into cells

    def cell_index(self) -> dict[tuple[int, ...], int]:
        return {c.pattern: i for i, c in enumerate(self.cells)}

    def face_pairs(self) -> list[tuple[int, int]]:
        """(i, j) whenever cells[i] lies in the boundary of cells[j]."""
        out = []
        for i, a in enumerate(self.cells):
            for j, b in enumerate(self.cells):
                if i != j and _is_face(a.pattern, b.pattern):
                    out.append((i, j))
        return out

    def boundary_of(self, idx: int) -> list[int]:
        b = self.cells[idx].pattern
        return [i for i, a in enumerate(self.cells) if i != idx and _is_face(a.pattern, b)]

    def nonzero_cells(self):
        return [c for c in self.cells if not c.is_zero()]

    def one_cones(self) -> list[SignCell]:
        return [c for c in self.cells if c.dim == 1]


def _pattern_of(x) -> tuple[int, ...]:
    return tuple(FieldScalar.of(v).sign() for v in x)


def _cleared_pair_basis(L: Subspace):
    """Basis vectors as integer (a, b) pairs meaning a + b*sqrt(q).

    Scaling a basis vector by a positive integer keeps the span, so all
    sign structure is preserved.
    """
    q = 0
    for b in L.basis:
        for x in b:
            if x.q is not None:
                q = x.q
                break
        if q:
            break
    basis = []
    for b in L.basis:
        lcm = 1
        for x in b:
            for num in (x.a, x.b):
                if num.denominator != 1:
                    g = _gcd(lcm, num.denominator)
                    lcm = lcm // g * num.denominator
        basis.append(tuple((int(x.a * lcm), int(x.b * lcm)) for x in b))
    return tuple(basis), q


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _pair_to_scalar(x, q) -> FieldScalar:
    from fractions import Fraction

    return FieldScalar(Fraction(x[0]), Fraction(x[1]), q if x[1] else None)


def enumerate_cells(L: Subspace, dim_guard: int = DEFAULT_DIM_GUARD) -> FanPL:
    """All realizable sign-pattern cones of L, each with an exact witness.

    Breadth-first wall crossing from a generic seed cell.  Boundary cells
    are discovered by exact ray shooting toward each wall (which always
    lands on a genuine face), cells reflect across discovered boundary
    faces, and the remaining wall candidates are settled by the exact LP,
    whose infeasibility certificates are cached per stratum and reused.
    Antipodal cones come for free by negation.
    """
    d = L.dim
    if d > dim_guard:
        raise DimGuardExceededError(d, dim_guard)
    n = L.ambient_dim
    zero_cell = SignCell((0,) * n, 0, tuple([ZERO] * n))
    if d == 0:
        return FanPL(L, (zero_cell,))

    basis, q = _cleared_pair_basis(L)
    psign = _ff.psign
    top_sat = _ff.zero_coords(basis, n)
    strata: dict[frozenset, tuple] = {top_sat: basis}

    cells: dict[tuple[int, ...], SignCell] = {zero_cell.pattern: zero_cell}
    pair_witness: dict[tuple[int, ...], tuple] = {}
    failed: set[tuple[int, ...]] = set()
    circuits: dict[frozenset, list] = {}

    def pattern_of_point(x) -> tuple[int, ...]:
        return tuple(psign(c, q) for c in x)

    def add(pattern, point) -> None:
        zeros = frozenset(v for v, s in enumerate(pattern) if s == 0)
        if zeros not in strata:
            base = strata[top_sat]
            for v in sorted(zeros - top_sat):
                base = _ff.stratum_descend(base, v, q)
            strata[zeros] = base
        dim = len(strata[zeros])
        witness = tuple(_pair_to_scalar(x, q) for x in point)
        cells[pattern] = SignCell(pattern, dim, witness)
        neg = tuple(-s for s in pattern)
        cells[neg] = SignCell(neg, dim, tuple(-x for x in witness))
        pair_witness[pattern] = tuple(point)
        pair_witness[neg] = tuple(_ff.pneg(x) for x in point)

    # generic seed on the moment vector (1, t, t^2, ...)
    t = 1
    while True:
        point = [_ff.PZERO] * n
        coeff = 1
        for b in basis:
            for i in range(n):
                if b[i] != (0, 0):
                    point[i] = _ff.padd(point[i], (coeff * b[i][0], coeff * b[i][1]))
            coeff *= t
        seed_pattern = pattern_of_point(point)
        if all(seed_pattern[v] != 0 for v in range(n) if v not in top_sat):
            break
        t += 1
    add(seed_pattern, point)

    queue = deque([seed_pattern])
    processed: set[tuple[int, ...]] = set()
    while queue:
        sigma = queue.popleft()
        if sigma in processed:
            continue
        # candidates from the antipode are the negated candidates, and
        # every add mirrors, so one representative per pair suffices
        processed.add(sigma)
        processed.add(tuple(-s for s in sigma))
        w = pair_witness[sigma]
        sat_sigma = frozenset(v for v, s in enumerate(sigma) if s == 0)
        basis_sigma = strata[sat_sigma]
        supp = [v for v in range(n) if sigma[v] != 0]

        def try_boundary(point) -> tuple[int, ...] | None:
            """Register the boundary cell at an exact point, plus the
            reflection of sigma across it; returns its pattern."""
            hp = pattern_of_point(point)
            if all(s == 0 for s in hp):
                return hp
            if hp not in cells:
                add(hp, point)
                queue.append(hp)
            flipped = tuple(
                -sigma[u] if (hp[u] == 0 and sigma[u] != 0) else sigma[u]
                for u in range(n)
            )
            if flipped not in cells:
                off = [u for u in range(n) if hp[u] != 0]
                refl = _ff.reflect(point, w, off, q)
                rp = pattern_of_point(refl)
                assert rp == flipped
                add(flipped, refl)
                queue.append(flipped)
            elif flipped not in processed:
                queue.append(flipped)
            return hp

        for v in supp:
            sub_basis = _ff.stratum_descend(basis_sigma, v, q)
            sub_sat = _ff.zero_coords(sub_basis, n)
            if sub_sat not in strata:
                strata[sub_sat] = sub_basis
            tau = tuple(0 if u in sub_sat else sigma[u] for u in range(n))
            if all(s == 0 for s in tau):
                continue  # wall collapses to the origin; zero cell exists
            if tau in failed:
                continue
            known = tau in cells
            if not known:
                # exact ray shot toward the v-wall: the target is the
                # positively scaled projection g_v w - w_v g onto x_v = 0
                g = next(b for b in basis_sigma if b[v] != (0, 0))
                flip = _ff.PONE if _ff.psign(g[v], q) > 0 else (-1, 0)
                target = tuple(
                    _ff.pmul(
                        flip,
                        _ff.psub(_ff.pmul(g[v], x, q), _ff.pmul(w[v], gx, q)),
                        q,
                    )
                    for x, gx in zip(w, g)
                )
                hit = _ff.shoot(w, target, supp, q)
                if hit is not None and try_boundary(hit) == tau:
                    continue
                if tau in cells:
                    known = True
            if not known:
                lib = circuits.get(sub_sat)
                if lib and any(
                    all(tau[u] == s for u, s in circuit) for circuit in lib
                ):
                    failed.add(tau)
                    failed.add(tuple(-s for s in tau))
                    continue
                stratum_basis = strata[sub_sat]
                coords = [u for u in range(n) if u not in sub_sat]
                rows = [
                    [
                        b[u] if tau[u] > 0 else _ff.pneg(b[u])
                        for b in stratum_basis
                    ]
                    for u in coords
                ]
                witness_coeffs, farkas = _ff.lp_strict(rows, q)
                if witness_coeffs is None:
                    failed.add(tau)
                    failed.add(tuple(-s for s in tau))
                    if farkas is not None:
                        circuit = tuple(
                            (u, tau[u])
                            for u, y in zip(coords, farkas)
                            if psign(y, q) > 0
                        )
                        if circuit and all(psign(y, q) >= 0 for y in farkas):
                            total = [_ff.PZERO] * len(stratum_basis)
                            for (u, s), y in zip(
                                ((u, tau[u]) for u in coords), farkas
                            ):
                                row = [
                                    b[u] if s > 0 else _ff.pneg(b[u])
                                    for b in stratum_basis
                                ]
                                total = [
                                    _ff.padd(tval, _ff.pmul(y, r, q))
                                    for tval, r in zip(total, row)
                                ]
                            if all(_ff.pis_zero(x) for x in total):
                                circuits.setdefault(sub_sat, []).append(circuit)
                    continue
                point = [_ff.PZERO] * n
                for c, b in zip(witness_coeffs, stratum_basis):
                    if _ff.pis_zero(c):
                        continue
                    for i in range(n):
                        if b[i][0] or b[i][1]:
                            point[i] = _ff.padd(point[i], _ff.pmul(c, b[i], q))
                assert pattern_of_point(point) == tau
                add(tau, point)
                queue.append(tau)
                known = True
            if known:
                # reflect across the (already known) facet toward the
                # neighbor on the other side
                try_boundary(pair_witness[tau])

    ordered = sorted(cells.values(), key=lambda c: (c.dim, c.pattern))
    return FanPL(L, tuple(ordered))


# -- classification and verdicts --------------------------------------------


def _component_count(G: Graph, S) -> int:
    return len(induced_components(G, S))


def classify_cells(fan: FanPL, G: Graph) -> FanPL:
    """Mark cones whose positive support induces a disconnected subgraph."""
    if fan.subspace.ambient_dim != G.n:
        raise ValueError("fan ambient dimension must equal the vertex count")
    broken = frozenset(
        i
        for i, c in enumerate(fan.cells)
        if not c.is_zero() and _component_count(G, c.supp_plus) >= 2
    )
    return replace(fan, broken=broken)


@dataclass(frozen=True)
class Violation:
    pattern: str
    clause: str
    detail: str = ""


@dataclass(frozen=True)
class RepresentationVerdict:
    kind: str  # "valid" | "semivalid"
    holds: bool
    violations: tuple[Violation, ...]
    broken_cells: tuple[str, ...]
    exhaustive: bool = True
    cells_checked: int = 0


def _semivalid_clauses(G: Graph, prof, minimal: bool) -> list[tuple[str, str]]:
    """Violated (clause, detail) pairs for one support profile."""
    out = []
    plus, minus = prof.supp_plus, prof.supp_minus
    if not plus or not minus:
        out.append(("i", "a support side is empty"))
        return out
    cc_plus = _component_count(G, plus)
    cc_minus = _component_count(G, minus)
    if cc_plus > 2 or (cc_plus == 2 and cc_minus != 1):
        out.append(("ii", f"supp+ has {cc_plus} components, supp- has {cc_minus}"))
    if minimal and (cc_plus != 1 or cc_minus != 1):
        out.append(("iii", "minimal-support vector with disconnected side"))
    if cc_plus >= 2:
        if any(G.has_edge(u, v) for u in plus for v in minus):
            out.append(("iv", "edge between supp+ and supp-"))
        supp = plus | minus
        n_supp = G.neighborhood_of_set(supp)
        for comp in induced_components(G, supp):
            if G.neighborhood_of_set(comp) != n_supp:
                out.append(("iv", f"component {sorted(comp)} sees a smaller neighborhood"))
                break
    return out


def _valid_clause(G: Graph, prof) -> list[tuple[str, str]]:
    plus = prof.supp_plus
    if not plus or _component_count(G, plus) != 1:
        return [("valid", "supp+ empty or disconnected")]
    return []


def verify_representation(
    L: Subspace, G: Graph, kind: str = "semivalid", dim_guard: int = DEFAULT_DIM_GUARD
) -> RepresentationVerdict:
    """Exhaustive per-cone verification of the representation clauses."""
    if kind not in ("valid", "semivalid"):
        raise ValueError(f"unknown representation kind {kind!r}")
    fan = classify_cells(enumerate_cells(L, dim_guard), G)
    nonzero = [c for c in fan.cells if not c.is_zero()]
    supports = [c.support for c in nonzero]
    violations: list[Violation] = []
    for c in nonzero:
        prof = support_profile(G, c.witness)
        if kind == "valid":
            probs = _valid_clause(G, prof)
        else:
            minimal = not any(s < c.support for s in supports)
            probs = _semivalid_clauses(G, prof, minimal)
        violations.extend(
            Violation(c.pattern_string(), clause, detail) for clause, detail in probs
        )
    broken = tuple(fan.cells[i].pattern_string() for i in sorted(fan.broken or ()))
    return RepresentationVerdict(
        kind, not violations, tuple(violations), broken, True, len(nonzero)
    )


def verify_representation_sampled(
    L: Subspace,
    G: Graph,
    kind: str = "semivalid",
    samples: int = 10_000,
    seed: int = 0,
    coeff_bound: int = 1000,
) -> RepresentationVerdict:
    """Clause check on pseudorandom integer combinations of the basis.

    Non-exhaustive: inclusion-minimality (clause iii) needs the full fan
    and is not triggered by generic samples.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    violations: list[Violation] = []
    broken: set[str] = set()
    checked = 0
    if L.dim == 0:
        return RepresentationVerdict(kind, True, (), (), False, 0)
    for _ in range(samples):
        coeffs = [rng.randint(-coeff_bound, coeff_bound) for _ in range(L.dim)]
        if all(c == 0 for c in coeffs):
            continue
        x = L.vector_from_coefficients(coeffs)
        prof = support_profile(G, x)
        if not prof.supp:
            continue
        checked += 1
        pattern = "".join(
            "+" if v in prof.supp_plus else "-" if v in prof.supp_minus else "0"
            for v in range(G.n)
        )
        if _component_count(G, prof.supp_plus) >= 2:
            broken.add(pattern)
        if kind == "valid":
            probs = _valid_clause(G, prof)
        else:
            probs = _semivalid_clauses(G, prof, minimal=False)
        violations.extend(Violation(pattern, clause, detail) for clause, detail in probs)
    return RepresentationVerdict(
        kind, not violations, tuple(violations), tuple(sorted(broken)), False, checked
    )


# -- certified lower bounds ---------------------------------------------------


@dataclass(frozen=True)
class EtaCertificate:
    bound: int
    subspace: Subspace
    method: str  # "exact-fan" | "degree"
    edge_set: tuple[tuple[int, int], ...]


def eta_lower_bound(G: Graph, S, F, dim_guard: int = DEFAULT_DIM_GUARD) -> EtaCertificate:
    """Certified eta(G) lower bound from a matrix kernel and edge set F.

    Hypothesis: every broken kernel vector inducing more than three
    components on its support meets an edge of F.  Maximum degree <= 3
    (any F) or <= 4 with F nonempty settles it outright; otherwise the
    kernel fan is checked exactly when enumerable.
    """
    from .schrodinger import SchrodingerMatrix

    if not isinstance(S, SchrodingerMatrix):
        raise TypeError("expected a validated matrix")
    if not G.is_connected():
        raise DisconnectedError("eta certificate requires a connected graph")
    F = [tuple(sorted(e)) for e in F]
    for e in F:
        if not G.has_edge(*e):
            raise ValueError(f"edge {e} not in graph")
    kernel = S.kernel()
    f_vertices = {v for e in F for v in e}

    d = G.max_degree()
    if d <= 3 or (d <= 4 and F):
        method = "degree"
    elif kernel.dim <= dim_guard:
        fan = classify_cells(enumerate_cells(kernel, dim_guard), G)
        for i in sorted(fan.broken or ()):
            cell = fan.cells[i]
            if _component_count(G, cell.support) > 3 and not (cell.support & f_vertices):
                raise HypothesisUnverifiedError(
                    f"broken cone {cell.pattern_string()} misses F"
                )
        method = "exact-fan"
    else:
        raise HypothesisUnverifiedError(
            f"kernel dim {kernel.dim} over guard and max degree {d} too large"
        )
    constraints = []
    for u, v in F:
        row = [0] * G.n
        row[u] = 1
        row[v] = 1
        constraints.append(row)
    L = constrain_subspace(kernel, constraints)
    return EtaCertificate(L.dim, L, method, tuple(F))


def lambda_lower_bound(G: Graph, S) -> int:
    """corank - maxdeg + 1, clamped at 0 (valid-representation bound)."""
    from .schrodinger import SchrodingerMatrix

    if not isinstance(S, SchrodingerMatrix):
        raise TypeError("expected a validated matrix")
    if not G.is_connected():
        raise DisconnectedError("lambda bound requires a connected graph")
    return max(S.corank() - G.max_degree() + 1, 0)


# -- structural sanity of broken cones ---------------------------------------


@dataclass(frozen=True)
class FanSanityReport:
    broken_count: int
    checked_pairs: int
    ok: bool = True


def fan_sanity(fan: FanPL, G: Graph) -> FanSanityReport:
    """Assert the structure theory of broken cones on an enumerated fan.

    Per broken cone: dimension 2; boundary exactly two 1-cones whose
    negative support equals the cone's and whose positive supports are
    the two components.  Every 1-cone bounds at most one broken cone.
    """
    if fan.broken is None:
        fan = classify_cells(fan, G)
    adjacency: dict[int, list[int]] = {}
    checked = 0
    for bi in sorted(fan.broken):
        beta = fan.cells[bi]
        if beta.dim != 2:
            raise FanSanityError(
                f"broken cone {beta.pattern_string()} has dimension {beta.dim}"
            )
        comps = [frozenset(c) for c in induced_components(G, beta.supp_plus)]
        if len(comps) != 2:
            raise FanSanityError(
                f"broken cone {beta.pattern_string()} has {len(comps)} components"
            )
        bd = [i for i in fan.boundary_of(bi) if not fan.cells[i].is_zero()]
        if len(bd) != 2:
            raise FanSanityError(
                f"broken cone {beta.pattern_string()} has {len(bd)} boundary cones"
            )
        seen_comps = set()
        for ai in bd:
            alpha = fan.cells[ai]
            checked += 1
            if alpha.dim != 1:
                raise FanSanityError(f"boundary cone {alpha.pattern_string()} not a ray")
            if alpha.supp_minus != beta.supp_minus:
                raise FanSanityError("boundary ray changes the negative support")
            if alpha.supp_plus not in comps:
                raise FanSanityError("boundary ray support is not a single component")
            seen_comps.add(alpha.supp_plus)
            adjacency.setdefault(ai, []).append(bi)
        if len(seen_comps) != 2:
            raise FanSanityError("boundary rays do not split the two components")
    for ai, betas in adjacency.items():
        if len(betas) > 1:
            raise FanSanityError(
                f"1-cone {fan.cells[ai].pattern_string()} bounds {len(betas)} broken cones"
            )
    return FanSanityReport(len(fan.broken or ()), checked)


# -- JSON ---------------------------------------------------------------------


def fan_to_json(fan: FanPL) -> dict:
    return {
        "ambientDim": fan.subspace.ambient_dim,
        "dim": fan.subspace.dim,
        "cells": [
            {
                "pattern": c.pattern_string(),
                "dim": c.dim,
                "broken": (fan.broken is not None and i in fan.broken) or False,
            }
            for i, c in enumerate(fan.cells)
        ],
    }


def verdict_to_json(verdict: RepresentationVerdict) -> dict:
    return {
        "kind": verdict.kind,
        "holds": verdict.holds,
        "exhaustive": verdict.exhaustive,
        "cellsChecked": verdict.cells_checked,
        "violations": [
            {"pattern": v.pattern, "clause": v.clause, "detail": v.detail}
            for v in verdict.violations
        ],
        "brokenCells": list(verdict.broken_cells),
    }
