"""Centrally symmetric simplicial polytopes subdividing a sign fan, and
the cellular map of their 1-skeleton into the graph.

The combinatorics of the crosspolytope section is read directly off the
fan (cones are the faces), then stellar subdivisions simplicialize it and
two barycentric passes provide the locality property for broken edges.
Coordinates stay exact: every vertex sits on its cone's ray, normalized
to unit 1-norm, so cone membership is a sign computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import Graph, induced_components
from .linalg import Subspace
from .scalars import ZERO, FieldScalar
from .signcells import (
    DimGuardExceededError,
    FanPL,
    SignCell,
    classify_cells,
    enumerate_cells,
    verify_representation,
    _is_face,
)

DEFAULT_POLYTOPE_DIM_GUARD = 4


class NotSemivalidError(ValueError):
    """The input subspace is not a semivalid representation."""


class LatticeError(AssertionError):
    """The face lattice stopped being a polytopal sphere."""


class ConeFitError(AssertionError):
    """A face's relative interior does not lie in a single cone."""


class NoAllowedNodeError(RuntimeError):
    """No node available for a vertex image; contradicts the theory."""


Face = frozenset


def _l1_normalize(x) -> tuple[FieldScalar, ...]:
    norm = ZERO
    for v in x:
        norm = norm + abs(v)
    if norm.sign() <= 0:
        raise ValueError("cannot normalize the zero vector")
    inv = norm.inverse()
    return tuple(v * inv for v in x)


@dataclass
class _Lattice:
    """Mutable face lattice during construction; faces keyed by vertex set."""

    coords: dict[int, tuple[FieldScalar, ...]] = field(default_factory=dict)
    dims: dict[Face, int] = field(default_factory=dict)
    incident: dict[int, set[Face]] = field(default_factory=dict)
    next_vertex: int = 0

    def add_vertex(self, coord) -> int:
        vid = self.next_vertex
        self.next_vertex += 1
        self.coords[vid] = tuple(coord)
        self.incident[vid] = set()
        return vid

    def add_face(self, verts: Face, dim: int):
        self.dims[verts] = dim
        for v in verts:
            self.incident[v].add(verts)

    def remove_face(self, verts: Face):
        del self.dims[verts]
        for v in verts:
            self.incident[v].discard(verts)

    def cofaces(self, F: Face) -> list[Face]:
        it = iter(F)
        acc = set(self.incident[next(it)])
        for v in it:
            acc &= self.incident[v]
        return [G for G in acc if F <= G]

    def subfaces_within(self, G: Face) -> list[Face]:
        if self.dims[G] + 1 == len(G):  # simplex: faces are the subsets
            out = []
            members = sorted(G)
            for mask in range(1, 1 << len(members)):
                sub = frozenset(members[i] for i in range(len(members)) if mask >> i & 1)
                if sub in self.dims:
                    out.append(sub)
            return out
        return [H for H in self.dims if H <= G]

    def is_simplex(self, F: Face) -> bool:
        return len(F) == self.dims[F] + 1

    def stellar_subdivide(self, F: Face):
        """Replace the star of F with pyramids over the new barycenter."""
        bary = [ZERO] * len(next(iter(self.coords.values())))
        for v in F:
            for i, x in enumerate(self.coords[v]):
                bary[i] = bary[i] + x
        k = FieldScalar.of(len(F)).inverse()
        a = self.add_vertex(_l1_normalize([x * k for x in bary]))
        cofaces = self.cofaces(F)
        new_faces: dict[Face, int] = {frozenset((a,)): 0}
        for G in cofaces:
            for H in self.subfaces_within(G):
                if F <= H:
                    continue
                new_faces[H | {a}] = self.dims[H] + 1
        for G in cofaces:
            self.remove_face(G)
        for H, dim in new_faces.items():
            self.add_face(H, dim)
        return a

    def faces_sorted(self) -> list[Face]:
        return sorted(self.dims, key=lambda f: (-self.dims[f], sorted(f)))

    def validate_sphere(self, boundary_dim: int):
        """Every ridge in exactly two facets; Euler characteristic of a sphere."""
        facets = [f for f, d in self.dims.items() if d == boundary_dim]
        ridges = {f: 0 for f, d in self.dims.items() if d == boundary_dim - 1}
        for facet in facets:
            for ridge in self.subfaces_within(facet):
                if self.dims[ridge] == boundary_dim - 1:
                    ridges[ridge] += 1
        for ridge, count in ridges.items():
            if count != 2:
                raise LatticeError(f"ridge {sorted(ridge)} lies in {count} facets")
        euler = sum((-1) ** d for d in self.dims.values())
        want = 1 + (-1) ** boundary_dim
        if euler != want:
            raise LatticeError(f"Euler characteristic {euler}, want {want}")


@dataclass(frozen=True)
class PolytopeComplex:
    subspace: Subspace
    fan: FanPL  # classified
    vertex_coords: dict[int, tuple[FieldScalar, ...]]
    faces: dict[Face, int]  # face -> dimension
    cone_of: dict[Face, tuple[int, ...]]  # gamma, as fan patterns
    dim: int

    def vertices(self) -> list[int]:
        return sorted(self.vertex_coords)

    def faces_of_dim(self, d: int) -> list[Face]:
        return sorted((f for f, fd in self.faces.items() if fd == d), key=sorted)

    def negate_vertex(self, vid: int) -> int:
        key = tuple(-x for x in self.vertex_coords[vid])
        return self._coord_index()[key]

    def _coord_index(self) -> dict:
        if not hasattr(self, "_coord_cache"):
            object.__setattr__(
                self, "_coord_cache", {c: v for v, c in self.vertex_coords.items()}
            )
        return self._coord_cache

    def negate_face(self, F: Face) -> Face:
        return frozenset(self.negate_vertex(v) for v in F)

    def edges_in_star(self, vid: int) -> list[Face]:
        """Edges lying in a common face with the vertex (its closed star)."""
        out = set()
        for G in self.faces:
            if vid in G:
                for e in _edge_subsets(G, self.faces):
                    out.add(e)
        return sorted(out, key=sorted)

    def pattern_of_face(self, F: Face) -> tuple[int, ...]:
        return self.cone_of[F]


def _edge_subsets(G: Face, faces) -> list[Face]:
    mem = sorted(G)
    out = []
    for i in range(len(mem)):
        for j in range(i + 1, len(mem)):
            e = frozenset((mem[i], mem[j]))
            if e in faces:
                out.append(e)
    return out


def _dominant_pattern(patterns: list[tuple[int, ...]], face: Face) -> tuple[int, ...]:
    n = len(patterns[0])
    out = []
    for v in range(n):
        signs = {p[v] for p in patterns} - {0}
        if len(signs) > 1:
            raise ConeFitError(f"face {sorted(face)} crosses the hyperplane of {v}")
        out.append(signs.pop() if signs else 0)
    return tuple(out)


def build_polytopal_representation(
    L: Subspace,
    G: Graph,
    dim_guard: int = DEFAULT_POLYTOPE_DIM_GUARD,
    check_each_step: bool = False,
) -> PolytopeComplex:
    """Construct and fully verify a polytopal representation of G from L.

    Pipeline: crosspolytope-section lattice from the fan; stellar
    subdivision of every non-simplex face (nonincreasing dimension,
    lexicographic ties); two barycentric subdivisions via stellars; then
    assert central symmetry, cone fit, simpliciality, cone nesting along
    faces, and broken-edge locality.
    """
    d = L.dim
    if d > dim_guard:
        raise DimGuardExceededError(d, dim_guard)
    if d == 0:
        raise ValueError("0-dimensional subspace has no boundary complex")
    verdict = verify_representation(L, G, "semivalid", dim_guard=max(dim_guard, 6))
    if not verdict.holds:
        raise NotSemivalidError(
            f"{len(verdict.violations)} clause violations, first: {verdict.violations[0]}"
        )
    fan = classify_cells(enumerate_cells(L, max(dim_guard, 6)), G)

    lat = _Lattice()
    one_cones = [c for c in fan.cells if c.dim == 1]
    vid_of = {}
    for cone in sorted(one_cones, key=lambda c: c.pattern):
        vid_of[cone.pattern] = lat.add_vertex(_l1_normalize(cone.witness))
    for cone in fan.cells:
        if cone.is_zero():
            continue
        members = frozenset(
            vid_of[k.pattern]
            for k in one_cones
            if k.pattern == cone.pattern or _is_face(k.pattern, cone.pattern)
        )
        lat.add_face(members, cone.dim - 1)
    lat.validate_sphere(d - 1)

    # simplicialization: subdivide non-simplex faces, large dimensions first
    for F in [f for f in lat.faces_sorted() if not lat.is_simplex(f)]:
        lat.stellar_subdivide(F)
        if check_each_step:
            lat.validate_sphere(d - 1)
    lat.validate_sphere(d - 1)

    # two barycentric passes: stellar-subdivide every face of dim >= 1
    for _ in range(2):
        for F in [f for f in lat.faces_sorted() if lat.dims[f] >= 1]:
            lat.stellar_subdivide(F)
            if check_each_step:
                lat.validate_sphere(d - 1)
        lat.validate_sphere(d - 1)

    vertex_pattern = {
        vid: tuple(x.sign() for x in coord) for vid, coord in lat.coords.items()
    }
    cone_of = {}
    cell_index = fan.cell_index()
    for F in lat.dims:
        pat = _dominant_pattern([vertex_pattern[v] for v in sorted(F)], F)
        if pat not in cell_index:
            raise ConeFitError(f"face {sorted(F)} maps to unknown pattern")
        cone_of[F] = pat

    P = PolytopeComplex(L, fan, dict(lat.coords), dict(lat.dims), cone_of, d)
    _assert_representation_properties(P)
    return P


def _assert_representation_properties(P: PolytopeComplex):
    # (i) centrally symmetric vertex set and lattice
    for vid in P.vertex_coords:
        nv = P.negate_vertex(vid)  # KeyError would mean asymmetry
        if nv == vid:
            raise LatticeError("vertex equal to its own antipode")
    for F in P.faces:
        if P.negate_face(F) not in P.faces:
            raise LatticeError(f"face {sorted(F)} has no antipodal face")
    # (ii) was enforced while computing cone_of (ConeFitError)
    # (iii) simplicial
    for F, dim in P.faces.items():
        if len(F) != dim + 1:
            raise LatticeError(f"face {sorted(F)} of dim {dim} is not a simplex")
    # (iv) cone nesting within every facet
    top = max(P.faces.values())
    for D in P.faces_of_dim(top):
        subs = [F for F in _all_subsets(D) if F in P.faces]
        for i, E in enumerate(subs):
            for F in subs[i + 1:]:
                ge, gf = P.cone_of[E], P.cone_of[F]
                if ge != gf and not (_is_face(ge, gf) or _is_face(gf, ge)):
                    raise ConeFitError(
                        f"cones of {sorted(E)} and {sorted(F)} are not nested"
                    )
    # (v) broken edges around any vertex share one broken cone
    broken_patterns = {P.fan.cells[i].pattern for i in (P.fan.broken or ())}
    for vid in P.vertex_coords:
        seen = {
            P.cone_of[e]
            for e in P.edges_in_star(vid)
            if P.cone_of[e] in broken_patterns
        }
        if len(seen) > 1:
            raise LatticeError(f"vertex {vid} stars {len(seen)} broken cones")


def _all_subsets(F: Face) -> list[Face]:
    mem = sorted(F)
    out = []
    for mask in range(1, 1 << len(mem)):
        out.append(frozenset(mem[i] for i in range(len(mem)) if mask >> i & 1))
    return out


# -- antipodality -------------------------------------------------------------


def antipodal_pairs(P: PolytopeComplex) -> set[tuple[Face, Face]]:
    """Unordered pairs (F, F') with F and -F' inside a common proper face."""
    top = max(P.faces.values())
    pairs: set[tuple[Face, Face]] = set()
    for D in P.faces_of_dim(top):
        subs = [F for F in _all_subsets(D) if F in P.faces]
        for E in subs:
            for H in subs:
                Fp = P.negate_face(H)
                key = tuple(sorted((E, Fp), key=sorted))
                pairs.add(key)
    return pairs


# -- cellular map -------------------------------------------------------------


@dataclass(frozen=True)
class CellularMap:
    vertex_image: dict[int, int]
    edge_walks: dict[Face, tuple[int, ...]]
    w_sets: dict[Face, frozenset[int]]
    broken_anchors: dict[tuple[int, ...], int]  # broken cone pattern -> v(beta)


def _lex_bfs_path(G: Graph, allowed: frozenset[int], a: int, b: int) -> tuple[int, ...]:
    """Shortest a-b path inside G[allowed]; smallest-neighbor tie-break."""
    if a not in allowed or b not in allowed:
        raise NoAllowedNodeError(f"endpoint {a} or {b} outside walk set")
    if a == b:
        return (a,)
    src, dst = min(a, b), max(a, b)
    adj = {v: [w for w in G.neighbors(v) if w in allowed] for v in allowed}
    parent: dict[int, int] = {src: -1}
    frontier = [src]
    while frontier and dst not in parent:
        nxt = []
        for v in frontier:  # frontier kept sorted: parents chosen smallest-first
            for w in adj[v]:
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = sorted(set(nxt))
    if dst not in parent:
        raise NoAllowedNodeError(f"no path {src}-{dst} inside {sorted(allowed)}")
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    path.reverse()
    if path[0] != a:
        path.reverse()
    return tuple(path)


def build_cellular_map(P: PolytopeComplex, G: Graph) -> CellularMap:
    """Vertex and edge images avoiding each broken cone's anchor node.

    Anchors v(beta) are the minimal separator nodes; vertex images are the
    minimal allowed support nodes; non-broken edges route by shortest path
    in their positive support (minus the anchor when a broken edge is
    antipodal), broken edges through their anchor.
    """
    fan = P.fan
    broken_cells = {fan.cells[i].pattern: fan.cells[i] for i in (fan.broken or ())}
    anchors: dict[tuple[int, ...], int] = {}
    remotes: dict[tuple[int, ...], frozenset[int]] = {}
    for pat, cell in broken_cells.items():
        supp = set(cell.support)
        sep = G.neighborhood_of_set(supp)
        if not sep:
            raise NoAllowedNodeError(f"broken cone {cell.pattern_string()} has empty separator")
        anchors[pat] = min(sep)
        remotes[pat] = frozenset(range(G.n)) - supp - sep

    pairs = antipodal_pairs(P)
    antip: dict[Face, set[Face]] = {}
    for E, F in pairs:
        antip.setdefault(E, set()).add(F)
        antip.setdefault(F, set()).add(E)

    edges = P.faces_of_dim(1)
    broken_edges = [e for e in edges if P.cone_of[e] in broken_cells]
    broken_edge_set = set(broken_edges)

    def antipodal_broken_cone(F: Face):
        """The unique broken cone among broken edges antipodal to F."""
        cones = {P.cone_of[b] for b in antip.get(F, ()) if b in broken_edge_set}
        if len(cones) > 1:
            raise NoAllowedNodeError(
                f"face {sorted(F)} antipodal to {len(cones)} broken cones"
            )
        return cones.pop() if cones else None

    def supp_plus(F: Face) -> frozenset[int]:
        return frozenset(v for v, s in enumerate(P.cone_of[F]) if s > 0)

    vertex_image: dict[int, int] = {}
    for vid in P.vertices():
        u = frozenset((vid,))
        beta = antipodal_broken_cone(u)
        allowed = set(supp_plus(u))
        if beta is not None:
            allowed -= remotes[beta]
            allowed.discard(anchors[beta])
        if not allowed:
            raise NoAllowedNodeError(f"vertex {vid} has no allowed node")
        vertex_image[vid] = min(allowed)

    edge_walks: dict[Face, tuple[int, ...]] = {}
    w_sets: dict[Face, frozenset[int]] = {}
    for vid in P.vertices():
        w_sets[frozenset((vid,))] = frozenset((vertex_image[vid],))
    for e in edges:
        u, w = sorted(e)
        if e in broken_edge_set:
            W = supp_plus(e) | {anchors[P.cone_of[e]]}
        else:
            beta = antipodal_broken_cone(e)
            W = supp_plus(e)
            if beta is not None:
                W = W - {anchors[beta]}
        walk = _lex_bfs_path(G, frozenset(W), vertex_image[u], vertex_image[w])
        edge_walks[e] = walk
        w_sets[e] = frozenset(W)
    for F, dim in sorted(P.faces.items(), key=lambda kv: kv[1]):
        if dim < 2:
            continue
        union: set[int] = set()
        for e in _edge_subsets(F, P.faces):
            union |= w_sets[e]
        w_sets[F] = frozenset(union)
    return CellularMap(vertex_image, edge_walks, w_sets, anchors)


# -- antipodal disjointness ----------------------------------------------------


@dataclass(frozen=True)
class DisjointnessReport:
    pairs_checked: int
    failures: tuple[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]], ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_disjointness(P: PolytopeComplex, cmap: CellularMap) -> DisjointnessReport:
    """W(F) and W(F') must be node-disjoint for every antipodal pair."""
    failures = []
    pairs = antipodal_pairs(P)
    for E, F in pairs:
        common = cmap.w_sets[E] & cmap.w_sets[F]
        if common:
            failures.append((tuple(sorted(E)), tuple(sorted(F)), tuple(sorted(common))))
    return DisjointnessReport(len(pairs), tuple(failures))


# -- JSON dumps -----------------------------------------------------------------


def lattice_to_json(P: PolytopeComplex) -> dict:
    pattern_str = lambda pat: "".join({1: "+", 0: "0", -1: "-"}[s] for s in pat)
    return {
        "dim": P.dim,
        "vertices": {
            str(v): [str(x) for x in coord] for v, coord in sorted(P.vertex_coords.items())
        },
        "faces": [
            {"verts": sorted(F), "dim": d, "cone": pattern_str(P.cone_of[F])}
            for F, d in sorted(P.faces.items(), key=lambda kv: (kv[1], sorted(kv[0])))
        ],
    }


def map_to_json(P: PolytopeComplex, cmap: CellularMap) -> dict:
    pattern_str = lambda pat: "".join({1: "+", 0: "0", -1: "-"}[s] for s in pat)
    return {
        "vertexImage": {str(v): n for v, n in sorted(cmap.vertex_image.items())},
        "edgeWalks": [
            {"edge": sorted(e), "walk": list(walk)}
            for e, walk in sorted(cmap.edge_walks.items(), key=lambda kv: sorted(kv[0]))
        ],
        "wSets": [
            {"face": sorted(F), "nodes": sorted(W)}
            for F, W in sorted(cmap.w_sets.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        ],
        "brokenAnchors": {pattern_str(p): v for p, v in cmap.broken_anchors.items()},
    }
