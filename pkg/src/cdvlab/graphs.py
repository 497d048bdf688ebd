"""Undirected simple graphs: constructors, queries, cycles, minors.

Vertices are dense ids 0..n-1 throughout; edges are unordered pairs.
Everything is immutable and pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .scalars import FieldScalar


class CapExceededError(RuntimeError):
    """More objects exist than the caller's cap allows."""

    def __init__(self, cap: int, what: str = "cycles"):
        super().__init__(f"more than {cap} {what}")
        self.cap = cap


class DisconnectedError(ValueError):
    """Operation requires a connected graph."""


DEFAULT_CYCLE_CAP = 100_000


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[frozenset[int]]

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            es.add(frozenset((u, v)))
        return Graph(n, frozenset(es))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return frozenset((u, v)) in self.edges

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edge_list():
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    def neighbors(self, v: int) -> list[int]:
        return sorted(w for e in self.edges if v in e for w in e if w != v)

    def neighborhood_of_set(self, S) -> set[int]:
        """N(S): vertices outside S adjacent to S."""
        S = set(S)
        out = set()
        for u, v in self.edge_list():
            if u in S and v not in S:
                out.add(v)
            elif v in S and u not in S:
                out.add(u)
        return out

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return len(induced_components(self, range(self.n))) <= 1


def induced_components(G: Graph, S) -> list[set[int]]:
    """Connected components of G[S], ordered by minimal vertex."""
    S = set(S)
    if not S <= set(range(G.n)):
        raise ValueError("S contains vertices outside G")
    adj = {v: [] for v in S}
    for u, v in G.edge_list():
        if u in S and v in S:
            adj[u].append(v)
            adj[v].append(u)
    seen: set[int] = set()
    comps = []
    for start in sorted(S):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


# -- named constructors ----------------------------------------------------


def build_named_graph(name: str, *params: int) -> Graph:
    """Standard test-corpus graphs with deterministic labelings."""
    name = name.lower()
    if name == "k_n":
        (n,) = params
        if n < 1:
            raise ValueError("n must be positive")
        return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if name == "k_mn":
        m, n = params
        if m < 1 or n < 1:
            raise ValueError("part sizes must be positive")
        return Graph.from_edges(m + n, [(i, m + j) for i in range(m) for j in range(n)])
    if name == "path":
        (n,) = params
        if n < 1:
            raise ValueError("n must be positive")
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if name == "cycle":
        (n,) = params
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if name == "star":
        (k,) = params
        if k < 1:
            raise ValueError("star needs k >= 1 leaves")
        return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])
    if name == "petersen":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        return Graph.from_edges(10, outer + inner + spokes)
    if name == "heawood":
        # LCF [5,-5]^7: 14-cycle plus chords {i, i+5} for even i
        cyc = [(i, (i + 1) % 14) for i in range(14)]
        chords = [(i, (i + 5) % 14) for i in range(0, 14, 2)]
        return Graph.from_edges(14, cyc + chords)
    raise ValueError(f"unknown graph name {name!r}")


# -- support profiles -------------------------------------------------------


@dataclass(frozen=True)
class SupportProfile:
    supp_plus: frozenset[int]
    supp_minus: frozenset[int]
    separator: frozenset[int]
    remote: frozenset[int]

    @property
    def supp(self) -> frozenset[int]:
        return self.supp_plus | self.supp_minus


def support_profile(G: Graph, x) -> SupportProfile:
    """Exact signs per coordinate; separator S(x)=N(supp), remote the rest."""
    if len(x) != G.n:
        raise ValueError("vector length must equal vertex count")
    plus, minus = set(), set()
    for v, val in enumerate(x):
        s = FieldScalar.of(val).sign()
        if s > 0:
            plus.add(v)
        elif s < 0:
            minus.add(v)
    supp = plus | minus
    sep = G.neighborhood_of_set(supp)
    remote = set(range(G.n)) - supp - sep
    return SupportProfile(frozenset(plus), frozenset(minus), frozenset(sep), frozenset(remote))


# -- simple cycles ----------------------------------------------------------


@dataclass(frozen=True)
class CycleId:
    """Simple cycle in canonical form: minimal vertex first, then the
    smaller of its two cycle-neighbors."""

    vertex_sequence: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertex_sequence) < 3:
            raise ValueError("cycle needs at least 3 vertices")

    @staticmethod
    def canonical(seq) -> "CycleId":
        seq = list(seq)
        if len(set(seq)) != len(seq):
            raise ValueError("repeated vertex in cycle")
        k = seq.index(min(seq))
        seq = seq[k:] + seq[:k]
        if seq[-1] < seq[1]:
            seq = [seq[0]] + seq[:0:-1]
        return CycleId(tuple(seq))

    def edges(self) -> list[frozenset[int]]:
        s = self.vertex_sequence
        return [frozenset((s[i], s[(i + 1) % len(s)])) for i in range(len(s))]

    def vertices(self) -> frozenset[int]:
        return frozenset(self.vertex_sequence)

    def __len__(self):
        return len(self.vertex_sequence)


def enumerate_cycles(G: Graph, cap: int = DEFAULT_CYCLE_CAP) -> list[CycleId]:
    """All simple cycles, canonical and sorted; CapExceededError past cap.

    DFS rooted at each minimal vertex, extending only through larger
    vertices; requiring second vertex < last vertex emits each cycle
    exactly once, already in canonical form.
    """
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    adj = G.adjacency()
    found: list[CycleId] = []

    def extend(root: int, path: list[int], in_path: set[int]):
        for w in adj[path[-1]]:
            if w <= root or w in in_path:
                continue
            path.append(w)
            in_path.add(w)
            if len(path) >= 3 and G.has_edge(w, root) and path[1] < w:
                if len(found) >= cap:
                    raise CapExceededError(cap)
                found.append(CycleId(tuple(path)))
            extend(root, path, in_path)
            in_path.discard(w)
            path.pop()

    for root in range(G.n):
        extend(root, [root], {root})
    found.sort(key=lambda c: (len(c), c.vertex_sequence))
    return found


# -- modification (deletion / contraction) ----------------------------------


@dataclass(frozen=True)
class ModifyResult:
    graph: Graph
    vertex_map: dict[int, int] = field(hash=False, compare=False, default_factory=dict)


def _relabel(n: int, keep: list[int], edges) -> ModifyResult:
    mapping = {old: new for new, old in enumerate(keep)}
    new_edges = {
        (mapping[u], mapping[v])
        for u, v in edges
        if u in mapping and v in mapping and mapping[u] != mapping[v]
    }
    return ModifyResult(Graph.from_edges(len(keep), new_edges), mapping)


def modify(G: Graph, op: str, args) -> ModifyResult:
    """delete_vertices / delete_edges / contract_edges with dense relabeling.

    Contractions must form a forest; merged duplicate edges collapse and
    loops drop, as usual for minors.
    """
    if op == "delete_vertices":
        doomed = set(args)
        if not doomed <= set(range(G.n)):
            raise ValueError("unknown vertex in deletion set")
        keep = [v for v in range(G.n) if v not in doomed]
        edges = [e for e in G.edge_list() if doomed.isdisjoint(e)]
        return _relabel(G.n, keep, edges)

    if op == "delete_edges":
        doomed = {frozenset(e) for e in args}
        for e in doomed:
            if e not in G.edges:
                raise ValueError(f"edge {sorted(e)} not in graph")
        edges = [e for e in G.edge_list() if frozenset(e) not in doomed]
        return _relabel(G.n, list(range(G.n)), edges)

    if op == "contract_edges":
        contract = [tuple(sorted(e)) for e in args]
        for u, v in contract:
            if not G.has_edge(u, v):
                raise ValueError(f"edge ({u},{v}) not in graph")
        parent = list(range(G.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in contract:
            ru, rv = find(u), find(v)
            if ru == rv:
                raise ValueError("contraction set contains a cycle (not a forest)")
            parent[max(ru, rv)] = min(ru, rv)
        roots = sorted({find(v) for v in range(G.n)})
        root_index = {r: i for i, r in enumerate(roots)}
        mapping = {v: root_index[find(v)] for v in range(G.n)}
        new_edges = {
            (mapping[u], mapping[v])
            for u, v in G.edge_list()
            if mapping[u] != mapping[v]
        }
        return ModifyResult(Graph.from_edges(len(roots), new_edges), mapping)

    raise ValueError(f"unknown modification {op!r}")


# -- text interchange --------------------------------------------------------


def graph_to_text(G: Graph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines.extend(f"{u} {v}" for u, v in G.edge_list())
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("graph text needs at least 'n m'")
    n, m = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != 2 * m:
        raise ValueError(f"expected {2*m} endpoints, got {len(body)}")
    edges = [(int(body[2 * i]), int(body[2 * i + 1])) for i in range(m)]
    G = Graph.from_edges(n, edges)
    if G.m != m:
        raise ValueError("duplicate edges in graph text")
    return G


def graph_from_graph6(line: str) -> Graph:
    """Decode a graph6 string (headerless, n < 63 is enough here)."""
    line = line.strip()
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<"):]
    data = [ord(c) - 63 for c in line]
    if any(not 0 <= d < 64 for d in data):
        raise ValueError("invalid graph6 characters")
    if data[0] < 63:
        n, bits = data[0], data[1:]
    else:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        bits = data[4:]
    stream = []
    for d in bits:
        stream.extend((d >> s) & 1 for s in range(5, -1, -1))
    edges = []
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if idx < len(stream) and stream[idx]:
                edges.append((u, v))
            idx += 1
    return Graph.from_edges(n, edges)
