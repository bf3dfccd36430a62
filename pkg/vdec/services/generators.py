"""
Graph Generators

Deterministic test-graph families: G(n, p), random regular graphs by the
pairing model, cycles, paths, stars and random trees. Every generator is a
pure function of its parameters and seed.
"""

import logging
import random
from collections import defaultdict
from typing import Dict, List, Optional, Set

from .errors import PreconditionFailed
from .graph_core import Edge, Graph, edge_key

logger = logging.getLogger(__name__)


class InfeasibleParameters(PreconditionFailed):
    """Raised when no graph of the requested family exists."""
    pass


GENERATOR_KINDS = ("gnp", "regular", "cycle", "path", "star", "tree")


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    """Erdős–Rényi G(n, p): each pair becomes an edge independently with probability p."""
    if n < 1:
        raise InfeasibleParameters(f"gnp needs n >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InfeasibleParameters(f"gnp needs 0 <= p <= 1, got {p}")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def _pairing_attempt(n: int, d: int, rng: random.Random) -> Optional[Set[Edge]]:
    # Pair stubs; clashing stubs are re-shuffled among themselves until none
    # remain or no simple pair is left.
    edges: Set[Edge] = set()
    stubs = [v for v in range(n) for _ in range(d)]
    while stubs:
        leftover: Dict[int, int] = defaultdict(int)
        rng.shuffle(stubs)
        it = iter(stubs)
        for a, b in zip(it, it):
            key = edge_key(a, b)
            if a != b and key not in edges:
                edges.add(key)
            else:
                leftover[a] += 1
                leftover[b] += 1
        if leftover and not _has_free_pair(edges, leftover):
            return None
        stubs = [v for v, count in sorted(leftover.items()) for _ in range(count)]
    return edges


def _has_free_pair(edges: Set[Edge], leftover: Dict[int, int]) -> bool:
    vertices = sorted(leftover)
    for i, a in enumerate(vertices):
        for b in vertices[i + 1:]:
            if (a, b) not in edges:
                return True
    return False


def random_regular(n: int, d: int, seed: int = 0, max_attempts: int = 1000) -> Graph:
    """
    Random d-regular simple graph on n vertices by the pairing model.

    Stuck pairings are discarded and retried with the same generator state,
    so the result depends only on (n, d, seed).

    Raises:
        InfeasibleParameters: odd n*d, d >= n, negative d, or n < 1.
    """
    if n < 1 or d < 0:
        raise InfeasibleParameters(f"regular needs n >= 1 and d >= 0, got n={n}, d={d}")
    if d >= n:
        raise InfeasibleParameters(f"regular needs d < n, got n={n}, d={d}")
    if (n * d) % 2:
        raise InfeasibleParameters(f"n*d must be even, got n={n}, d={d}")
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        edges = _pairing_attempt(n, d, rng)
        if edges is not None:
            logger.debug(f"Pairing model succeeded after {attempt} attempt(s) for n={n}, d={d}")
            return Graph(n, edges)
    raise InfeasibleParameters(f"pairing model stuck {max_attempts} times for n={n}, d={d}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise InfeasibleParameters(f"cycle needs n >= 3, got {n}")
    return Graph(n, [(v, (v + 1) % n) for v in range(n)])


def path(n: int) -> Graph:
    """Path on n vertices (n - 1 edges)."""
    if n < 1:
        raise InfeasibleParameters(f"path needs n >= 1, got {n}")
    return Graph(n, [(v, v + 1) for v in range(n - 1)])


def star(leaves: int) -> Graph:
    """K_{1,leaves} with center 0."""
    if leaves < 1:
        raise InfeasibleParameters(f"star needs at least one leaf, got {leaves}")
    return Graph(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


def random_tree(n: int, seed: int = 0) -> Graph:
    """Uniform random labelled tree on n vertices by Prüfer decoding."""
    if n < 1:
        raise InfeasibleParameters(f"tree needs n >= 1, got {n}")
    if n <= 2:
        return path(n)
    rng = random.Random(seed)
    code = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in code:
        degree[v] += 1
    edges: List[Edge] = []
    for v in code:
        leaf = next(u for u in range(n) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(n) if degree[x] == 1)
    edges.append((u, w))
    return Graph(n, edges)


def generate(kind: str, n: int, seed: int = 0, p: float = 0.3, d: int = 3) -> Graph:
    """
    Dispatch on a generator kind name.

    `n` is the vertex count for every kind except `star`, where it is the
    number of leaves.
    """
    if kind == "gnp":
        return gnp(n, p, seed)
    if kind == "regular":
        return random_regular(n, d, seed)
    if kind == "cycle":
        return cycle(n)
    if kind == "path":
        return path(n)
    if kind == "star":
        return star(n)
    if kind == "tree":
        return random_tree(n, seed)
    raise InfeasibleParameters(
        f"unknown generator kind {kind!r}; expected one of {GENERATOR_KINDS}"
    )
