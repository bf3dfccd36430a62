"""
Oracle and Verification Service

Brute-force oracles for desk-scale cross-checks (exact vertex-distinguishing
chromatic index, matching size, path factors) and the verifiers used as
postconditions. Verifiers only read the graph and the artifact handed to
them; they recompute color-sets and degrees from scratch.
"""

import logging
import random
from collections import defaultdict
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Protocol, Sequence, Tuple

from vdec.schemas.report import VerificationReport, Violation

from .edge_coloring import EdgeColoring
from .graph_core import Graph, NotVdecError, edge_key, is_vdec, k_lower_bound

logger = logging.getLogger(__name__)


class ColoringLike(Protocol):
    """Anything listing (edge, color) entries over a declared palette."""

    palette: int

    def items(self) -> Iterable[Tuple[Tuple[int, int], int]]: ...


Finding = Tuple[str, Sequence[int], Sequence[Tuple[int, int]]]


def _report(g: Graph, found: Iterable[Finding]) -> VerificationReport:
    violations = sorted(
        (
            Violation(
                check=check,
                vertices=[g.labels[v] for v in sorted(vertices)],
                edges=[
                    [g.labels[u], g.labels[v]] for u, v in sorted(edge_key(*e) for e in edges)
                ],
            )
            for check, vertices, edges in found
        ),
        key=lambda item: (item.check, item.vertices, item.edges),
    )
    return VerificationReport(passed=not violations, violations=violations)


def _color_sets(g: Graph, c: ColoringLike) -> List[FrozenSet[int]]:
    sets: List[set] = [set() for _ in g.vertices()]
    for (u, v), color in c.items():
        sets[u].add(color)
        sets[v].add(color)
    return [frozenset(s) for s in sets]


# ---------------------------------------------------------------------------
# Verifiers
# ---------------------------------------------------------------------------

def _proper_violations(g: Graph, c: ColoringLike):
    seen: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for (u, v), color in c.items():
        if not g.has_edge(u, v):
            yield ("proper", [u, v], [(u, v)])
            continue
        for x in (u, v):
            other = seen.get((x, color))
            if other is not None:
                yield ("proper", [x], [other, (u, v)])
            else:
                seen[(x, color)] = (u, v)


def verify_proper(g: Graph, c: ColoringLike) -> VerificationReport:
    """Adjacent edges never share a color."""
    return _report(g, _proper_violations(g, c))


def verify_vd(g: Graph, c: ColoringLike, bound: Optional[int] = None) -> VerificationReport:
    """
    Total, proper and vertex-distinguishing, with every color in 1..bound.

    Checks: "total" (uncolored edges), "proper", "palette" (colors outside
    1..bound, or 1..palette when no bound is given) and "distinct" (one
    violation per pair of vertices with equal color-sets).
    """
    found: List[Finding] = []
    colored = {e for e, _ in c.items()}
    for e in g.edges:
        if e not in colored:
            found.append(("total", [], [e]))
    found.extend(_proper_violations(g, c))
    limit = c.palette if bound is None else bound
    for e, color in c.items():
        if not 1 <= color <= limit:
            found.append(("palette", [], [e]))
    groups: Dict[FrozenSet[int], List[int]] = defaultdict(list)
    for v, colors in enumerate(_color_sets(g, c)):
        groups[colors].append(v)
    for members in groups.values():
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                found.append(("distinct", [u, v], []))
    return _report(g, found)


def verify_semi_vd(g: Graph, c: ColoringLike) -> VerificationReport:
    """No color-set occurs on three or more vertices."""
    groups: Dict[FrozenSet[int], List[int]] = defaultdict(list)
    for v, colors in enumerate(_color_sets(g, c)):
        groups[colors].append(v)
    return _report(
        g, (("semi_vd", members, []) for members in groups.values() if len(members) >= 3)
    )


def _path_violations(g: Graph, paths: Sequence[Sequence[int]], allowed: FrozenSet[int]):
    owner: Dict[int, int] = {}
    for index, p in enumerate(paths):
        if len(p) - 1 not in allowed:
            yield ("path_shape", list(p), [])
        for v in p:
            if v in owner:
                yield ("path_shape", [v], [])
            owner[v] = index
        for a, b in zip(p, p[1:]):
            if not g.has_edge(a, b):
                yield ("path_shape", [a, b], [(a, b)])


def verify_packing(
    g: Graph,
    paths: Sequence[Sequence[int]],
    allowed: Iterable[int] = (2, 3, 4),
) -> VerificationReport:
    """Paths are vertex-disjoint, follow host edges and have allowed edge counts."""
    return _report(g, _path_violations(g, paths, frozenset(allowed)))


def verify_forest(g: Graph, paths: Sequence[Sequence[int]]) -> VerificationReport:
    """
    The three linear forest properties.

    Checks: "path_shape" (2 to 4 edges, disjoint, host edges),
    "uncovered_structure" (uncovered vertices induce only isolated
    vertices and edges), "uncovered_degree" (2·deg <= Δ+1) and
    "neighbor_degree" (covered neighbors of uncovered vertices are interior).
    """
    found = list(_path_violations(g, paths, frozenset({2, 3, 4})))
    forest_degree: Dict[int, int] = {}
    for p in paths:
        for a, b in zip(p, p[1:]):
            forest_degree[a] = forest_degree.get(a, 0) + 1
            forest_degree[b] = forest_degree.get(b, 0) + 1
    uncovered = [v for v in g.vertices() if v not in forest_degree]
    loose = set(uncovered)
    delta = g.max_degree
    for v in uncovered:
        inner = [u for u in g.adjacency[v] if u in loose]
        if len(inner) > 1:
            found.append(("uncovered_structure", [v] + inner, []))
        if 2 * g.degree(v) > delta + 1:
            found.append(("uncovered_degree", [v], []))
        for u in g.adjacency[v]:
            if u in forest_degree and forest_degree[u] != 2:
                found.append(("neighbor_degree", [v, u], [(v, u)]))
    return _report(g, found)


# ---------------------------------------------------------------------------
# Exact chromatic index
# ---------------------------------------------------------------------------

def exact_vd_coloring(g: Graph, k: int) -> Optional[EdgeColoring]:
    """
    A proper vertex-distinguishing coloring with colors 1..k, or None.

    Edges are colored in (larger endpoint, smaller endpoint) order, so a
    vertex's set is final once its last edge is colored and is checked
    against the finished sets right away. A fresh color may only be the
    next unused one.
    """
    order = sorted(g.edges, key=lambda e: (e[1], e[0]))
    last: Dict[int, int] = {}
    for index, (u, v) in enumerate(order):
        last[u] = index
        last[v] = index
    finished_at: Dict[int, List[int]] = defaultdict(list)
    for v, index in last.items():
        finished_at[index].append(v)
    isolated = [v for v in g.vertices() if v not in last]
    if len(isolated) > 1:
        return None

    at: List[int] = [0] * g.n
    colors: List[int] = [0] * len(order)
    finished = {0} if isolated else set()

    def place(index: int, highest: int) -> bool:
        if index == len(order):
            return True
        u, v = order[index]
        for color in range(1, min(k, highest + 1) + 1):
            bit = 1 << color
            if at[u] & bit or at[v] & bit:
                continue
            at[u] |= bit
            at[v] |= bit
            colors[index] = color
            closed = []
            ok = True
            for x in finished_at.get(index, ()):
                if at[x] in finished:
                    ok = False
                    break
                finished.add(at[x])
                closed.append(at[x])
            if ok and place(index + 1, max(highest, color)):
                return True
            for mask in closed:
                finished.discard(mask)
            at[u] &= ~bit
            at[v] &= ~bit
        return False

    if not place(0, 0):
        return None
    return EdgeColoring(g, k, {e: colors[i] for i, e in enumerate(order)})


def exact_chi_vd(g: Graph, k_max: Optional[int] = None) -> Optional[int]:
    """
    Least k in [k(G), k_max] admitting a proper vd coloring, or None.

    None means no k up to k_max works, not that none exists.

    Raises:
        NotVdecError: if g is not vdec.
    """
    lower = k_lower_bound(g)
    top = lower + 3 if k_max is None else k_max
    for k in range(lower, top + 1):
        if exact_vd_coloring(g, k) is not None:
            return k
    return None


def random_vd_upper_bound(
    g: Graph,
    k_max: int,
    seed: int = 0,
    restarts: int = 30,
    steps: int = 2000,
) -> Optional[int]:
    """
    Least k <= k_max for which randomized min-conflict search finds a vd coloring.

    An upper-bound oracle coded independently of the exact search: random
    proper colorings are repaired by recoloring edges at vertices that
    share their color-set.
    """
    if not is_vdec(g):
        raise NotVdecError("graph has two isolated vertices or an isolated edge")
    rng = random.Random(seed)
    for k in range(k_lower_bound(g), k_max + 1):
        for _ in range(restarts):
            colors = _random_proper(g, k, rng)
            if colors is not None and _min_conflict(g, k, colors, rng, steps):
                return k
    return None


def _random_proper(g: Graph, k: int, rng: random.Random) -> Optional[Dict[Tuple[int, int], int]]:
    edges = list(g.edges)
    rng.shuffle(edges)
    used: List[set] = [set() for _ in g.vertices()]
    colors: Dict[Tuple[int, int], int] = {}
    for u, v in edges:
        options = [c for c in range(1, k + 1) if c not in used[u] and c not in used[v]]
        if not options:
            return None
        c = rng.choice(options)
        colors[(u, v)] = c
        used[u].add(c)
        used[v].add(c)
    return colors


def _min_conflict(
    g: Graph,
    k: int,
    colors: Dict[Tuple[int, int], int],
    rng: random.Random,
    steps: int,
) -> bool:
    used: List[set] = [set() for _ in g.vertices()]
    for (u, v), c in colors.items():
        used[u].add(c)
        used[v].add(c)
    for _ in range(steps):
        groups: Dict[FrozenSet[int], List[int]] = defaultdict(list)
        for v in g.vertices():
            groups[frozenset(used[v])].append(v)
        clashing = [v for members in groups.values() if len(members) > 1 for v in members]
        if not clashing:
            return True
        v = rng.choice(clashing)
        if not g.adjacency[v]:
            continue
        u = rng.choice(g.adjacency[v])
        e = edge_key(u, v)
        old = colors[e]
        options = [
            c for c in range(1, k + 1)
            if c != old and c not in used[u] and c not in used[v]
        ]
        if not options:
            continue
        new = rng.choice(options)
        for x in (u, v):
            used[x].discard(old)
            used[x].add(new)
        colors[e] = new
    return False


# ---------------------------------------------------------------------------
# Exhaustive matching and factor oracles
# ---------------------------------------------------------------------------

def brute_force_matching_size(g: Graph) -> int:
    """Maximum matching size by exhaustive search over vertex subsets."""

    @lru_cache(maxsize=None)
    def best(free: int) -> int:
        if not free:
            return 0
        v = (free & -free).bit_length() - 1
        rest = free & ~(1 << v)
        result = best(rest)
        for u in g.adjacency[v]:
            if rest >> u & 1:
                result = max(result, 1 + best(rest & ~(1 << u)))
        return result

    return best((1 << g.n) - 1)


def brute_force_has_factor(g: Graph) -> bool:
    """Whether V(g) splits into paths of 3, 4 or 5 vertices, by plain enumeration."""

    def simple_paths(start: int, free: FrozenSet[int]) -> List[Tuple[int, ...]]:
        found = []
        stack = [(start,)]
        while stack:
            p = stack.pop()
            if 3 <= len(p) <= 5:
                found.append(p)
            if len(p) == 5:
                continue
            for u in g.adjacency[p[-1]]:
                if u in free and u not in p:
                    stack.append(p + (u,))
        return found

    def cover(free: FrozenSet[int]) -> bool:
        if not free:
            return True
        v = min(free)
        for start in sorted(free):
            for p in simple_paths(start, free):
                if v in p and cover(free - set(p)):
                    return True
        return False

    return cover(frozenset(g.vertices()))
