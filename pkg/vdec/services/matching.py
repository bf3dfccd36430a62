"""
Matching Service

Maximum-cardinality matching in general graphs (Edmonds' blossom method),
near-perfect matchings and the factor-criticality test used by sun
recognition.
"""

import logging
from collections import deque
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import StageFailure
from .graph_core import Edge, Graph, edge_key, induced_subgraph, is_connected

logger = logging.getLogger(__name__)


class NoPerfectMatching(StageFailure):
    """Raised when g - x has no perfect matching."""
    pass


class Matching:
    """Vertex-disjoint host edges with a mate lookup."""

    def __init__(self, edges: Iterable[Tuple[int, int]]):
        self.edges: Tuple[Edge, ...] = tuple(sorted(edge_key(u, v) for u, v in edges))
        self._mate: Dict[int, int] = {}
        for u, v in self.edges:
            if u in self._mate or v in self._mate:
                raise ValueError(f"edge {(u, v)} shares a vertex with another matching edge")
            self._mate[u] = v
            self._mate[v] = u

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def mate(self, v: int) -> Optional[int]:
        return self._mate.get(v)

    def covers(self, v: int) -> bool:
        return v in self._mate

    @property
    def covered(self) -> frozenset:
        return frozenset(self._mate)

    def __repr__(self) -> str:
        return f"Matching({list(self.edges)})"


class _Blossom:
    """One augmenting-path search state over array-indexed vertices."""

    def __init__(self, g: Graph, mate: List[int]):
        self.g = g
        self.mate = mate
        n = g.n
        self.parent = [-1] * n
        self.base = list(range(n))
        self.used = [False] * n
        self.in_blossom = [False] * n

    def _lca(self, a: int, b: int) -> int:
        seen = [False] * self.g.n
        while True:
            a = self.base[a]
            seen[a] = True
            if self.mate[a] == -1:
                break
            a = self.parent[self.mate[a]]
        while True:
            b = self.base[b]
            if seen[b]:
                return b
            b = self.parent[self.mate[b]]

    def _mark_path(self, v: int, b: int, child: int) -> None:
        while self.base[v] != b:
            self.in_blossom[self.base[v]] = True
            self.in_blossom[self.base[self.mate[v]]] = True
            self.parent[v] = child
            child = self.mate[v]
            v = self.parent[self.mate[v]]

    def find_exposed(self, root: int) -> int:
        """BFS for an augmenting path from `root`; returns its far end or -1."""
        self.used[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in self.g.adjacency[v]:
                if self.base[v] == self.base[to] or self.mate[v] == to:
                    continue
                if to == root or (self.mate[to] != -1 and self.parent[self.mate[to]] != -1):
                    current = self._lca(v, to)
                    self.in_blossom = [False] * self.g.n
                    self._mark_path(v, current, to)
                    self._mark_path(to, current, v)
                    for i in range(self.g.n):
                        if self.in_blossom[self.base[i]]:
                            self.base[i] = current
                            if not self.used[i]:
                                self.used[i] = True
                                queue.append(i)
                elif self.parent[to] == -1:
                    self.parent[to] = v
                    if self.mate[to] == -1:
                        return to
                    self.used[self.mate[to]] = True
                    queue.append(self.mate[to])
        return -1

    def augment(self, end: int) -> None:
        v = end
        while v != -1:
            pv = self.parent[v]
            ppv = self.mate[pv]
            self.mate[v] = pv
            self.mate[pv] = v
            v = ppv


def max_matching(g: Graph) -> Matching:
    """
    Maximum-cardinality matching by Edmonds' blossom algorithm.

    Starts from a greedy matching in vertex order and augments from every
    exposed vertex once; O(V^3).
    """
    mate = [-1] * g.n
    for u, v in g.edges:
        if mate[u] == -1 and mate[v] == -1:
            mate[u] = v
            mate[v] = u
    for root in g.vertices():
        if mate[root] != -1 or not g.adjacency[root]:
            continue
        search = _Blossom(g, mate)
        end = search.find_exposed(root)
        if end != -1:
            search.augment(end)
    return Matching((v, mate[v]) for v in g.vertices() if mate[v] > v)


def near_perfect_matching(g: Graph, x: int) -> Matching:
    """
    Perfect matching of g - x, in g's vertex ids.

    Raises:
        NoPerfectMatching: if g - x has none.
    """
    rest, back = induced_subgraph(g, (v for v in g.vertices() if v != x))
    m = max_matching(rest)
    if 2 * len(m) != rest.n:
        raise NoPerfectMatching(
            f"G - {x} has no perfect matching ({len(m)} of {rest.n // 2} edges)"
        )
    return Matching((back[u], back[v]) for u, v in m)


def has_perfect_matching(g: Graph) -> bool:
    return g.n % 2 == 0 and 2 * len(max_matching(g)) == g.n


def is_factor_critical(g: Graph) -> bool:
    """True iff g is connected and g - x has a perfect matching for every x."""
    if g.n % 2 == 0 or not is_connected(g):
        return False
    for x in g.vertices():
        rest, _ = induced_subgraph(g, (v for v in g.vertices() if v != x))
        if not has_perfect_matching(rest):
            return False
    return True
