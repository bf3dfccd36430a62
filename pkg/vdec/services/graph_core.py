"""
Graph Core Service

Simple undirected graphs, edge-list I/O, degree statistics, the k(G) lower
bound and the structural queries shared by every other service.
"""

import logging
from collections import Counter, deque
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InputError, PreconditionFailed

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class GraphParseError(InputError):
    """Raised when an edge-list document is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class NotVdecError(PreconditionFailed):
    """Raised when a graph has two isolated vertices or an isolated edge."""
    pass


class PartitionError(PreconditionFailed):
    """Raised when a component partition does not match the graph."""
    pass


def edge_key(u: int, v: int) -> Edge:
    """Canonical (smaller, larger) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


class Graph:
    """
    Immutable simple undirected graph on vertices 0..n-1.

    Adjacency lists are sorted so every downstream tie-break is reproducible.
    Input labels are kept in `labels` for reporting.
    """

    __slots__ = ("vertex_count", "edges", "adjacency", "labels", "_edge_set")

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[Tuple[int, int]],
        labels: Optional[Sequence[str]] = None,
    ):
        if vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        edge_set = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            key = edge_key(u, v)
            if key in edge_set:
                raise ValueError(f"duplicate edge {key}")
            edge_set.add(key)

        neighbors: List[List[int]] = [[] for _ in range(vertex_count)]
        for u, v in edge_set:
            neighbors[u].append(v)
            neighbors[v].append(u)

        self.vertex_count = vertex_count
        self.edges: Tuple[Edge, ...] = tuple(sorted(edge_set))
        self.adjacency: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(nb)) for nb in neighbors)
        self.labels: Tuple[str, ...] = (
            tuple(labels) if labels is not None else tuple(str(v) for v in range(vertex_count))
        )
        if len(self.labels) != vertex_count:
            raise ValueError("one label per vertex is required")
        self._edge_set = frozenset(edge_set)

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.vertex_count)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._edge_set

    @property
    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adjacency), default=0)

    @property
    def min_degree(self) -> int:
        return min((len(nb) for nb in self.adjacency), default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={len(self.edges)})"


class Multigraph:
    """
    Undirected multigraph given by pair multiplicities.

    Degrees count multiplicity. `origin` maps a vertex back to the graph
    vertex it stands for, or None for contracted vertices.
    """

    def __init__(
        self,
        vertex_count: int,
        multiplicity: Dict[Edge, int],
        origin: Optional[Sequence[Optional[int]]] = None,
    ):
        neighbors: List[set] = [set() for _ in range(vertex_count)]
        cleaned: Dict[Edge, int] = {}
        for (u, v), count in multiplicity.items():
            if count < 1:
                raise ValueError(f"multiplicity of {(u, v)} must be positive")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            key = edge_key(u, v)
            cleaned[key] = cleaned.get(key, 0) + count
            neighbors[u].add(v)
            neighbors[v].add(u)
        self.vertex_count = vertex_count
        self.multiplicity = cleaned
        self.adjacency: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(nb)) for nb in neighbors)
        self.origin: Tuple[Optional[int], ...] = (
            tuple(origin) if origin is not None else tuple(range(vertex_count))
        )

    def degree(self, v: int) -> int:
        return sum(self.multiplicity[edge_key(v, u)] for u in self.adjacency[v])

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    @property
    def edge_count(self) -> int:
        return sum(self.multiplicity.values())

    def is_bipartite(self) -> bool:
        side: List[Optional[int]] = [None] * self.vertex_count
        for start in range(self.vertex_count):
            if side[start] is not None:
                continue
            side[start] = 0
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for u in self.adjacency[v]:
                    if side[u] is None:
                        side[u] = 1 - side[v]  # type: ignore[operator]
                        queue.append(u)
                    elif side[u] == side[v]:
                        return False
        return True


class DegreeProfile:
    """Counts n_d of vertices of each degree d in [δ, Δ]."""

    def __init__(self, counts: Dict[int, int]):
        self.counts = dict(sorted(counts.items()))

    @property
    def min_degree(self) -> int:
        return min(self.counts, default=0)

    @property
    def max_degree(self) -> int:
        return max(self.counts, default=0)

    def __getitem__(self, degree: int) -> int:
        return self.counts.get(degree, 0)

    def items(self):
        return self.counts.items()

    @property
    def total(self) -> int:
        return sum(self.counts.values())


# ---------------------------------------------------------------------------
# Edge-list I/O
# ---------------------------------------------------------------------------

def load_graph(text: str) -> Graph:
    """
    Parse an edge-list document.

    Format: one "u v" pair per line, `#` comments and blank lines ignored.
    A "vertices: N" header declares labels 0..N-1; a single-token line
    declares one (possibly isolated) vertex. Vertex ids follow first
    appearance.

    Raises:
        GraphParseError: malformed line, loop or duplicate edge.
    """
    ids: Dict[str, int] = {}
    labels: List[str] = []
    edges: List[Edge] = []
    seen = set()

    def vertex(label: str) -> int:
        if label not in ids:
            ids[label] = len(labels)
            labels.append(label)
        return ids[label]

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("vertices:"):
            value = line.split(":", 1)[1].strip()
            if not value.isdigit():
                raise GraphParseError(f"bad vertex count {value!r}", number)
            for v in range(int(value)):
                vertex(str(v))
            continue
        tokens = line.split()
        if len(tokens) == 1:
            vertex(tokens[0])
            continue
        if len(tokens) != 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", number)
        a, b = tokens
        if a == b:
            raise GraphParseError(f"loop at vertex {a!r}", number)
        u, v = vertex(a), vertex(b)
        key = edge_key(u, v)
        if key in seen:
            raise GraphParseError(f"duplicate edge {a} {b}", number)
        seen.add(key)
        edges.append(key)

    graph = Graph(len(labels), edges, labels)
    logger.debug(f"Loaded graph with {graph.n} vertices and {graph.m} edges")
    return graph


def read_graph(path: str) -> Graph:
    """Load a graph file, wrapping I/O failures as input errors."""
    try:
        with open(path, encoding="utf-8") as handle:
            return load_graph(handle.read())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e


def save_graph(g: Graph) -> str:
    """Serialize a graph so that load_graph(save_graph(g)) == g."""
    lines: List[str] = []
    if g.labels == tuple(str(v) for v in range(g.n)):
        lines.append(f"vertices: {g.n}")
    else:
        lines.extend(g.labels)
    lines.extend(f"{g.labels[u]} {g.labels[v]}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------

def degree_profile(g: Graph) -> DegreeProfile:
    return DegreeProfile(Counter(g.degree(v) for v in g.vertices()))


def is_regular(g: Graph) -> Optional[int]:
    """The common degree if g is regular and nonempty, else None."""
    degrees = {g.degree(v) for v in g.vertices()}
    return degrees.pop() if len(degrees) == 1 else None


def components(g: Graph) -> List[List[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    seen = [False] * g.n
    result: List[List[int]] = []
    for start in g.vertices():
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        comp = [start]
        while queue:
            v = queue.popleft()
            for u in g.adjacency[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        result.append(sorted(comp))
    return result


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def is_vdec(g: Graph) -> bool:
    """At most one isolated vertex and no isolated edge."""
    isolated = 0
    for comp in components(g):
        if len(comp) == 1:
            isolated += 1
        elif len(comp) == 2:
            return False
    return isolated <= 1


def k_lower_bound(g: Graph) -> int:
    """
    Smallest k with C(k, d) >= n_d for every degree class d.

    Binomials are exact integers; C(k, d) = 0 for d > k and C(k, 0) = 1.

    Raises:
        NotVdecError: if g is not vdec.
    """
    if not is_vdec(g):
        raise NotVdecError("graph has two isolated vertices or an isolated edge")
    profile = degree_profile(g)
    k = max(1, profile.max_degree)
    while any(comb(k, d) < count for d, count in profile.items()):
        k += 1
    return k


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Tuple[Graph, List[int]]:
    """
    Subgraph induced by `vertices`, relabelled 0..len-1 in sorted order.

    Returns:
        The subgraph and the list mapping each new id to its id in g.
    """
    back = sorted(set(vertices))
    index = {v: i for i, v in enumerate(back)}
    edges = [
        (index[u], index[v])
        for u in back
        for v in g.adjacency[u]
        if u < v and v in index
    ]
    return Graph(len(back), edges, [g.labels[v] for v in back]), back


def remove_edges(g: Graph, edges: Iterable[Edge]) -> Graph:
    """Spanning subgraph g - edges (same vertices and labels)."""
    removed = {edge_key(u, v) for u, v in edges}
    return Graph(g.n, [e for e in g.edges if e not in removed], g.labels)


def contract_components(
    g: Graph,
    s: Iterable[int],
    comps: Sequence[Sequence[int]],
) -> Tuple[Multigraph, Dict[int, int]]:
    """
    Contract every component of g - s to one vertex.

    The result is bipartite on S (ids 0..|S|-1, sorted) and W (one vertex
    per component, ids |S|.. in the order of `comps`). Each g-edge between
    s and a component becomes one parallel s-w edge; edges within S and
    within components are dropped.

    Returns:
        The multigraph and the map component index -> contracted vertex.

    Raises:
        PartitionError: if comps is not the component partition of g - s.
    """
    s_sorted = sorted(set(s))
    if any(not 0 <= v < g.n for v in s_sorted):
        raise PartitionError("S contains a vertex outside the graph")
    owner: Dict[int, int] = {}
    for index, comp in enumerate(comps):
        if not comp:
            raise PartitionError(f"component {index} is empty")
        for v in comp:
            if v in owner or v in s_sorted:
                raise PartitionError(f"vertex {v} appears twice in the partition")
            owner[v] = index
    if len(owner) + len(s_sorted) != g.n:
        raise PartitionError("partition does not cover V(G) - S")

    s_set = set(s_sorted)
    rest, back = induced_subgraph(g, owner)
    expected = {tuple(back[v] for v in comp) for comp in components(rest)}
    if expected != {tuple(sorted(comp)) for comp in comps}:
        raise PartitionError("comps are not the components of G - S")

    s_index = {v: i for i, v in enumerate(s_sorted)}
    multiplicity: Dict[Edge, int] = {}
    for u, v in g.edges:
        if u in s_set and v in owner:
            key = (s_index[u], len(s_sorted) + owner[v])
        elif v in s_set and u in owner:
            key = (s_index[v], len(s_sorted) + owner[u])
        else:
            continue
        multiplicity[key] = multiplicity.get(key, 0) + 1

    origin: List[Optional[int]] = list(s_sorted) + [None] * len(comps)
    contracted = Multigraph(len(s_sorted) + len(comps), multiplicity, origin)
    return contracted, {index: len(s_sorted) + index for index in range(len(comps))}
