"""
Path Factor Service

Sun components, the deficiency of a graph, the {P3, P4, P5}-factor
condition, constructive packings and the linear forest used by the
coloring pipelines: vertex-disjoint paths of 2 to 4 edges such that

1. every component of the forest is such a path,
2. the uncovered vertices induce isolated vertices and isolated edges, each
   uncovered vertex having degree at most (Δ+1)/2, and
3. every covered neighbor of an uncovered vertex is interior to its path.
"""

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from .errors import PreconditionFailed, StageFailure
from .graph_core import (
    Edge,
    Graph,
    Multigraph,
    components,
    contract_components,
    edge_key,
    induced_subgraph,
    is_connected,
)
from .matching import NoPerfectMatching, is_factor_critical, near_perfect_matching

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]

# Allowed path lengths, counted in edges.
FOREST_LENGTHS: FrozenSet[int] = frozenset({2, 3, 4})


class SizeExceeded(PreconditionFailed):
    """Raised when an exact search is asked for a graph above its size limit."""
    pass


class SunPackingError(PreconditionFailed):
    """Raised when a sun packing is requested with invalid arguments."""
    pass


class HallViolated(StageFailure):
    """Raised when a star packing or its U-covering cannot be completed."""
    pass


class ForestFailed(StageFailure):
    """Raised when no linear forest could be built; `stage` names the failing step."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


class SunKind(str, Enum):
    K1 = "K1"
    K2 = "K2"
    BIG = "big"


class PackingMode(str, Enum):
    UNCOVER_LEAF = "uncover-leaf"
    UNCOVER_CORE_VERTEX = "uncover-core-vertex"


@dataclass(frozen=True)
class SunDecomposition:
    """Certificate that `graph` is a sun; core and pendants use graph's ids."""

    kind: SunKind
    graph: Graph
    core: Tuple[int, ...]
    pendant_of: Mapping[int, int] = field(default_factory=dict, hash=False)

    def owner_of(self, pendant: int) -> int:
        for core_vertex, leaf in self.pendant_of.items():
            if leaf == pendant:
                return core_vertex
        raise KeyError(pendant)


@dataclass(frozen=True)
class DeficiencyCertificate:
    s: Tuple[int, ...]
    value: int


class PathPacking:
    """Vertex-disjoint paths given as vertex sequences."""

    def __init__(self, paths: Iterable[Sequence[int]], allowed: Iterable[int] = FOREST_LENGTHS):
        self.paths: Tuple[Path, ...] = tuple(tuple(p) for p in paths)
        self.allowed: FrozenSet[int] = frozenset(allowed)
        self._degree: Dict[int, int] = {}
        for p in self.paths:
            for i, v in enumerate(p):
                self._degree[v] = int(i > 0) + int(i < len(p) - 1)

    def __iter__(self) -> Iterator[Path]:
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)

    @property
    def covered(self) -> FrozenSet[int]:
        return frozenset(self._degree)

    def degree(self, v: int) -> int:
        """Degree of v in the packing (0 when uncovered)."""
        return self._degree.get(v, 0)

    def edges(self) -> List[Edge]:
        return sorted(edge_key(p[i], p[i + 1]) for p in self.paths for i in range(len(p) - 1))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({[list(p) for p in self.paths]})"


class LinearForest(PathPacking):
    """Paths of 2 to 4 edges inside a host graph, plus the uncovered vertices."""

    def __init__(self, host: Graph, paths: Iterable[Sequence[int]]):
        super().__init__(paths, FOREST_LENGTHS)
        self.host = host

    @property
    def uncovered(self) -> Tuple[int, ...]:
        covered = self.covered
        return tuple(v for v in self.host.vertices() if v not in covered)

    def as_graph(self) -> Graph:
        """The forest as a spanning subgraph of the host."""
        return Graph(self.host.n, self.edges(), self.host.labels)


# ---------------------------------------------------------------------------
# Suns and deficiency
# ---------------------------------------------------------------------------

def is_sun(component: Graph) -> Optional[SunDecomposition]:
    """
    Recognize K1, K2 or a factor-critical core with one pendant per core vertex.

    Pendants are exactly the degree-1 vertices.
    """
    n = component.n
    if n == 0 or not is_connected(component):
        return None
    if n == 1:
        return SunDecomposition(SunKind.K1, component, (0,))
    if n == 2:
        return SunDecomposition(SunKind.K2, component, (0, 1))
    if n % 2 or n < 6:
        return None
    leaves = [v for v in component.vertices() if component.degree(v) == 1]
    if 2 * len(leaves) != n:
        return None
    pendant_of: Dict[int, int] = {}
    for leaf in leaves:
        owner = component.adjacency[leaf][0]
        if component.degree(owner) == 1 or owner in pendant_of:
            return None
        pendant_of[owner] = leaf
    core = tuple(sorted(pendant_of))
    core_graph, _ = induced_subgraph(component, core)
    if not is_factor_critical(core_graph):
        return None
    return SunDecomposition(SunKind.BIG, component, core, dict(sorted(pendant_of.items())))


def _sun_count_without(g: Graph, removed: Set[int]) -> int:
    """sun(g - removed) without materializing the subgraph unless a big sun is possible."""
    seen = set(removed)
    count = 0
    for start in g.vertices():
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in g.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        if len(comp) <= 2:
            count += 1
            continue
        if len(comp) % 2 or len(comp) < 6:
            continue
        members = set(comp)
        leaves = sum(1 for v in comp if sum(1 for u in g.adjacency[v] if u in members) == 1)
        if 2 * leaves != len(comp):
            continue
        sub, _ = induced_subgraph(g, comp)
        if is_sun(sub) is not None:
            count += 1
    return count


def sun_count(g: Graph) -> int:
    """Number of components of g that are suns."""
    return _sun_count_without(g, set())


def deficiency(g: Graph, exact_limit: int = 20) -> DeficiencyCertificate:
    """
    max over S of sun(g - S) - 2|S|, by subset enumeration.

    Sizes are tried in increasing order and subsets in lexicographic order;
    only strict improvements replace the incumbent, so the certificate holds
    the least maximizer. Vertices of degree at most one never belong to a
    maximizer and are not enumerated. Enumeration stops once n - 3|S|, an
    upper bound on the value, cannot beat the incumbent.

    Raises:
        SizeExceeded: if g has more than exact_limit vertices.
    """
    if g.n > exact_limit:
        raise SizeExceeded(f"deficiency is exact only up to {exact_limit} vertices, got {g.n}")
    best_s: Tuple[int, ...] = ()
    best = _sun_count_without(g, set())
    candidates = [v for v in g.vertices() if g.degree(v) >= 2]
    size = 1
    while size <= len(candidates) and g.n - 3 * size > best:
        for s in combinations(candidates, size):
            value = _sun_count_without(g, set(s)) - 2 * size
            if value > best:
                best, best_s = value, s
        size += 1
    return DeficiencyCertificate(best_s, best)


def kaneko_condition(g: Graph, exact_limit: int = 20) -> bool:
    """True iff sun(g - S) <= 2|S| for every S, i.e. g has a {P3, P4, P5}-factor."""
    return deficiency(g, exact_limit).value <= 0


# ---------------------------------------------------------------------------
# Packings
# ---------------------------------------------------------------------------

def sun_packing(
    d: SunDecomposition,
    mode: Union[PackingMode, str],
    w: Optional[int] = None,
) -> PathPacking:
    """
    Pack a big sun with paths through a near-perfect matching of its core.

    UNCOVER_LEAF: x is the lowest core vertex, a the lowest core neighbor
    of x and b its mate; the 5-vertex path pendant(x) x a b pendant(b)
    plus pendant(a') a' b' pendant(b') for every other matched pair leave
    only pendant(a) uncovered.

    UNCOVER_CORE_VERTEX: 4-vertex paths over a perfect matching of
    core - w leave exactly w and its pendant uncovered.

    Raises:
        SunPackingError: for K1/K2 suns or a w outside the core.
    """
    mode = PackingMode(mode)
    if d.kind is not SunKind.BIG:
        raise SunPackingError(f"sun packing needs a big sun, got {d.kind.value}")
    core_graph, back = induced_subgraph(d.graph, d.core)
    index = {v: i for i, v in enumerate(back)}
    pend = d.pendant_of

    if mode is PackingMode.UNCOVER_CORE_VERTEX:
        if w is None or w not in index:
            raise SunPackingError(f"vertex {w} is not in the core")
        m = near_perfect_matching(core_graph, index[w])
        return PathPacking(
            [(pend[back[a]], back[a], back[b], pend[back[b]]) for a, b in m],
            allowed={3},
        )

    x = d.core[0]
    m = near_perfect_matching(core_graph, index[x])
    a_local = min(core_graph.neighbors(index[x]))
    b_local = m.mate(a_local)
    assert b_local is not None
    a_j, b_j = back[a_local], back[b_local]
    paths: List[Path] = [(pend[x], x, a_j, b_j, pend[b_j])]
    for a, b in m:
        if a_local in (a, b):
            continue
        paths.append((pend[back[a]], back[a], back[b], pend[back[b]]))
    return PathPacking(paths, allowed={3, 4})


def degree_constrained_subgraph(
    b: Multigraph,
    s_part: Iterable[int],
    f: Union[int, Mapping[int, int]],
    allowed: Optional[Iterable[int]] = None,
) -> Dict[int, List[int]]:
    """
    Give every s exactly f(s) distinct neighbors, each neighbor used once.

    Augmenting paths over the simple underlying bipartite graph, one copy
    of s per unit of demand.

    Returns:
        s -> sorted list of its assigned neighbors.

    Raises:
        HallViolated: if some s cannot be saturated.
    """
    s_list = sorted(set(s_part))
    s_set = set(s_list)
    pool = None if allowed is None else set(allowed)
    owner: Dict[int, int] = {}

    def demand(s: int) -> int:
        return f if isinstance(f, int) else f.get(s, 0)

    def augment(s: int, visited: Set[int]) -> bool:
        for w in b.neighbors(s):
            if w in s_set or (pool is not None and w not in pool):
                continue
            if w in visited or owner.get(w) == s:
                continue
            visited.add(w)
            holder = owner.get(w)
            if holder is None or augment(holder, visited):
                owner[w] = s
                return True
        return False

    for s in s_list:
        for _ in range(demand(s)):
            if not augment(s, set()):
                raise HallViolated(f"vertex {s} cannot get {demand(s)} distinct neighbors")

    assigned: Dict[int, List[int]] = {s: [] for s in s_list}
    for w, s in owner.items():
        assigned[s].append(w)
    return {s: sorted(ws) for s, ws in assigned.items()}


def _absorb(
    b: Multigraph,
    target: int,
    owner: Dict[int, int],
    s_set: Set[int],
    must_cover: Set[int],
) -> bool:
    # Alternating search target - s1 = w1 - s2 = w2 ... ending at a leaf outside must_cover.
    queue = deque([target])
    seen_w = {target}
    seen_s: Set[int] = set()
    prev: Dict[int, Tuple[int, int]] = {}
    leaves_of: Dict[int, List[int]] = {}
    for w, s in owner.items():
        leaves_of.setdefault(s, []).append(w)
    while queue:
        w = queue.popleft()
        for s in b.neighbors(w):
            if s not in s_set or s in seen_s or owner.get(w) == s:
                continue
            seen_s.add(s)
            for leaf in sorted(leaves_of.get(s, [])):
                if leaf in seen_w:
                    continue
                seen_w.add(leaf)
                prev[leaf] = (s, w)
                if leaf not in must_cover:
                    owner.pop(leaf)
                    current = leaf
                    while current != target:
                        s_step, w_step = prev[current]
                        owner[w_step] = s_step
                        current = w_step
                    return True
                queue.append(leaf)
    return False


def p3_packing_covering(
    b: Multigraph,
    s_part: Iterable[int],
    u: Iterable[int],
    allowed: Optional[Iterable[int]] = None,
) -> PathPacking:
    """
    Vertex-disjoint 3-vertex paths centered at S that cover S and U.

    Starts from a degree-2 star packing of S and absorbs each uncovered
    u in U along an alternating path that ends at a leaf outside U.

    Returns:
        Packing of (leaf, s, leaf) triples in b's vertex ids.

    Raises:
        HallViolated: if the star packing or an absorption fails.
    """
    s_set = set(s_part)
    must_cover = set(u)
    leaves = degree_constrained_subgraph(b, s_set, 2, allowed)
    owner = {w: s for s, ws in leaves.items() for w in ws}
    for target in sorted(must_cover):
        if target in owner:
            continue
        if not _absorb(b, target, owner, s_set, must_cover):
            raise HallViolated(f"cannot cover vertex {target} of U")
    grouped: Dict[int, List[int]] = {s: [] for s in s_set}
    for w, s in owner.items():
        grouped[s].append(w)
    return PathPacking(
        [(min(ws), s, max(ws)) for s, ws in sorted(grouped.items())],
        allowed={2},
    )


# ---------------------------------------------------------------------------
# Factor search
# ---------------------------------------------------------------------------

def _bits(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def _has_small_component(g: Graph, covered: int) -> bool:
    """True if the uncovered part has a component of at most two vertices."""
    seen = covered
    for start in g.vertices():
        if seen >> start & 1:
            continue
        seen |= 1 << start
        size = 1
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in g.adjacency[v]:
                if not seen >> u & 1:
                    seen |= 1 << u
                    size += 1
                    queue.append(u)
        if size <= 2:
            return True
    return False


def _arms(
    g: Graph, v: int, covered: int, limit: int, avoid: Tuple[int, ...] = ()
) -> Iterator[Path]:
    """Simple paths leaving v through uncovered vertices (v excluded), up to `limit` vertices."""
    yield ()
    if limit == 0:
        return
    stack: List[Path] = [()]
    while stack:
        arm = stack.pop()
        tip = arm[-1] if arm else v
        for u in g.adjacency[tip]:
            if u == v or u in arm or u in avoid or covered >> u & 1:
                continue
            longer = arm + (u,)
            yield longer
            if len(longer) < limit:
                stack.append(longer)


def _paths_through(g: Graph, v: int, covered: int) -> Iterator[Path]:
    """Every 3- to 5-vertex path through v in the uncovered part, each once."""
    for left in _arms(g, v, covered, 4):
        for right in _arms(g, v, covered, 4 - len(left), left):
            if len(left) + len(right) < 2:
                continue
            p = tuple(reversed(left)) + (v,) + right
            if p < p[::-1]:
                yield p


def exact_path_factor(g: Graph) -> Optional[List[Path]]:
    """
    {P3, P4, P5}-factor by backtracking, or None.

    Covers the lowest uncovered vertex first, prunes states that leave an
    uncovered component of order at most two and memoizes failed states.
    """
    full = (1 << g.n) - 1
    if g.n == 0:
        return []
    if _has_small_component(g, 0):
        return None
    failed: Set[int] = set()
    chosen: List[Path] = []

    def solve(covered: int) -> bool:
        if covered == full:
            return True
        if covered in failed:
            return False
        v = (~covered & (covered + 1)).bit_length() - 1
        for p in _paths_through(g, v, covered):
            after = covered | _bits(p)
            if after != full and _has_small_component(g, after):
                continue
            chosen.append(p)
            if solve(after):
                return True
            chosen.pop()
        failed.add(covered)
        return False

    return list(chosen) if solve(0) else None


def _chop(p: Sequence[int]) -> List[Path]:
    """Split a path of at least 3 vertices into pieces of 3 to 5 vertices."""
    pieces: List[Path] = []
    i = 0
    while len(p) - i > 5:
        rest = len(p) - i
        take = next(t for t in (5, 4, 3) if rest - t >= 3)
        pieces.append(tuple(p[i:i + take]))
        i += take
    pieces.append(tuple(p[i:]))
    return pieces


def _path_cover(g: Graph, rng: random.Random) -> List[List[int]]:
    """Greedy path cover growing each path toward the neighbor with fewest free neighbors."""
    free = set(g.vertices())

    def free_degree(v: int) -> int:
        return sum(1 for u in g.adjacency[v] if u in free)

    paths: List[List[int]] = []
    while free:
        start = min(free, key=lambda v: (free_degree(v), rng.random()))
        free.discard(start)
        walk = deque([start])
        for grow_left in (False, True):
            while True:
                tip = walk[0] if grow_left else walk[-1]
                options = [u for u in g.adjacency[tip] if u in free]
                if not options:
                    break
                nxt = min(options, key=lambda u: (free_degree(u), rng.random()))
                free.discard(nxt)
                if grow_left:
                    walk.appendleft(nxt)
                else:
                    walk.append(nxt)
        paths.append(list(walk))
    return paths


def _repair_cover(
    g: Graph,
    delta: int,
    rng: random.Random,
    spanning: bool,
) -> Optional[List[List[int]]]:
    """
    Turn a greedy path cover into long paths whose leftovers are admissible.

    Leftovers (paths of one or two vertices) are attached to path ends,
    regrouped into new paths when they form a component of three or more,
    and spliced into a neighbor's path when their degree is too high to stay
    uncovered. Returns None when the round budget runs out.
    """
    paths: Dict[int, List[int]] = {}
    for p in _path_cover(g, rng):
        if len(p) >= 3:
            paths[len(paths)] = p
    next_id = len(paths)

    for _ in range(4 * g.n + 10):
        where = {v: (pid, i) for pid, p in paths.items() for i, v in enumerate(p)}
        loose = [v for v in g.vertices() if v not in where]
        if not loose:
            return list(paths.values())

        progressed = False
        for v in loose:
            for u in g.adjacency[v]:
                if u not in where:
                    continue
                pid, i = where[u]
                p = paths[pid]
                if i == 0:
                    p.insert(0, v)
                elif i == len(p) - 1:
                    p.append(v)
                else:
                    continue
                progressed = True
                break
            if progressed:
                break
        if progressed:
            continue

        loose_set = set(loose)
        for v in loose:
            inner = [u for u in g.adjacency[v] if u in loose_set]
            if len(inner) >= 2:
                paths[next_id] = [inner[0], v, inner[1]]
                next_id += 1
                progressed = True
                break
        if progressed:
            continue

        for v in loose:
            if not spanning and 2 * g.degree(v) <= delta + 1:
                continue
            options = []
            for u in g.adjacency[v]:
                if u not in where:
                    continue
                pid, i = where[u]
                p = paths[pid]
                for kept, rest in ((p[:i + 1] + [v], p[i + 1:]), ([v] + p[i:], p[:i])):
                    cost = 0 if len(rest) == 0 or len(rest) >= 3 else len(rest)
                    options.append((cost, rng.random(), pid, kept, rest))
            if not options:
                continue
            cost, _, pid, kept, rest = min(options, key=lambda o: (o[0], o[1]))
            paths[pid] = kept
            if len(rest) >= 3:
                paths[next_id] = rest
                next_id += 1
            progressed = True
            break
        if not progressed:
            return list(paths.values())
    return None


def find_path_factor(
    g: Graph,
    seed: int = 0,
    exact_limit: int = 20,
    restarts: int = 200,
) -> Optional[PathPacking]:
    """
    A spanning {P3, P4, P5}-packing, or None.

    Exact backtracking up to exact_limit vertices; above it, randomized
    path covers with repair, where None only means the restarts ran out.
    """
    if g.n <= exact_limit:
        factor = exact_path_factor(g)
        return None if factor is None else PathPacking(factor)
    rng = random.Random(seed)
    for _ in range(restarts):
        long_paths = _repair_cover(g, g.max_degree, rng, spanning=True)
        if long_paths is not None and sum(len(p) for p in long_paths) == g.n:
            return PathPacking(piece for p in long_paths for piece in _chop(p))
    return None


# ---------------------------------------------------------------------------
# Linear forest
# ---------------------------------------------------------------------------

def extend_forest(g: Graph, packing: PathPacking) -> LinearForest:
    """
    Attach uncovered vertices to path ends until no uncovered vertex touches one.

    A path that grows to six vertices is split into two 3-vertex paths; an
    uncovered 3-vertex path becomes a new path.
    """
    paths: List[List[int]] = [list(p) for p in packing.paths]
    changed = True
    while changed:
        changed = False
        where = {v: (pid, i) for pid, p in enumerate(paths) for i, v in enumerate(p)}
        for v in g.vertices():
            if v in where:
                continue
            for u in g.adjacency[v]:
                if u not in where:
                    continue
                pid, i = where[u]
                p = paths[pid]
                if i == 0:
                    p.insert(0, v)
                elif i == len(p) - 1:
                    p.append(v)
                else:
                    continue
                if len(p) == 6:
                    paths[pid] = p[:3]
                    paths.append(p[3:])
                changed = True
                break
            if changed:
                break
        if changed:
            continue
        for v in g.vertices():
            if v in where:
                continue
            inner = [u for u in g.adjacency[v] if u not in where]
            if len(inner) >= 2:
                paths.append([inner[0], v, inner[1]])
                changed = True
                break
    return LinearForest(g, paths)


def _sun_leaf_extension(
    sub: Graph,
    s_vertex: int,
    decomposition: SunDecomposition,
    back: List[int],
    extra: List[Path],
) -> List[int]:
    """Vertices that continue a star edge s - D into the sun D, away from s."""
    x = min(v for v in decomposition.graph.vertices() if sub.has_edge(s_vertex, back[v]))
    if decomposition.kind is SunKind.K1:
        return [back[x]]
    if decomposition.kind is SunKind.K2:
        return [back[x], back[1 - x]]
    if x in decomposition.pendant_of:
        core_vertex = x
        tail = [x, decomposition.pendant_of[x]]
    else:
        core_vertex = decomposition.owner_of(x)
        tail = [x, core_vertex]
    packing = sun_packing(decomposition, PackingMode.UNCOVER_CORE_VERTEX, core_vertex)
    extra.extend(tuple(back[v] for v in p) for p in packing)
    return [back[v] for v in tail]


def _deficiency_paths(sub: Graph, delta: int, exact_limit: int) -> List[Path]:
    """
    Forest for a connected graph without a factor, from a maximizing set S.

    Components of sub - S are contracted; a star packing centered at S
    covers every sun component whose contracted degree is at least
    ceil(Δ/2). Each star edge s - D is continued inside D, leftover big
    suns lose one pendant, and non-sun components get exact factors.
    """
    cert = deficiency(sub, exact_limit)
    s_vertices = set(cert.s)
    rest, back = induced_subgraph(sub, (v for v in sub.vertices() if v not in s_vertices))
    comps = [[back[v] for v in comp] for comp in components(rest)]
    b, w_of = contract_components(sub, cert.s, comps)

    decompositions: Dict[int, Tuple[Optional[SunDecomposition], List[int]]] = {}
    for i, comp in enumerate(comps):
        comp_graph, comp_back = induced_subgraph(sub, comp)
        decompositions[i] = (is_sun(comp_graph), comp_back)

    s_size = len(cert.s)
    sun_w = [w_of[i] for i, (d, _) in decompositions.items() if d is not None]
    threshold = (delta + 1) // 2
    must_cover = [w for w in sun_w if b.degree(w) >= threshold]
    stars = p3_packing_covering(b, range(s_size), must_cover, allowed=sun_w)

    paths: List[Path] = []
    used: Set[int] = set()
    for w_left, s_b, w_right in stars:
        s_vertex = b.origin[s_b]
        assert s_vertex is not None
        arms = []
        for w in (w_left, w_right):
            index = w - s_size
            d, comp_back = decompositions[index]
            assert d is not None
            arms.append(_sun_leaf_extension(sub, s_vertex, d, comp_back, paths))
            used.add(index)
        paths.append(tuple(reversed(arms[0])) + (s_vertex,) + tuple(arms[1]))

    for index, (d, comp_back) in decompositions.items():
        if index in used:
            continue
        if d is None:
            comp_graph, _ = induced_subgraph(sub, comp_back)
            factor = exact_path_factor(comp_graph)
            if factor is None:
                raise ForestFailed("non-sun-factor", f"component {comp_back} has no factor")
            paths.extend(tuple(comp_back[v] for v in p) for p in factor)
        elif d.kind is SunKind.BIG:
            packing = sun_packing(d, PackingMode.UNCOVER_LEAF)
            paths.extend(tuple(comp_back[v] for v in p) for p in packing)
    return paths


def _component_paths(
    sub: Graph,
    delta: int,
    rng: random.Random,
    exact_limit: int,
    restarts: int,
) -> List[Path]:
    if sub.n <= 2:
        return []
    sun = is_sun(sub)
    if sun is not None and sun.kind is SunKind.BIG:
        return list(sun_packing(sun, PackingMode.UNCOVER_LEAF).paths)

    if sub.n <= exact_limit:
        factor = exact_path_factor(sub)
        if factor is not None:
            return factor
        try:
            return _deficiency_paths(sub, delta, exact_limit)
        except (HallViolated, NoPerfectMatching, ForestFailed) as e:
            logger.warning(f"Deficiency construction failed on {sub}: {e}; trying path covers")

    for attempt in range(restarts):
        long_paths = _repair_cover(sub, delta, rng, spanning=False)
        if long_paths is not None:
            logger.debug(f"Path cover repaired after {attempt + 1} attempt(s) on {sub}")
            return [piece for p in long_paths for piece in _chop(p)]
    raise ForestFailed("path-cover", f"no admissible cover within {restarts} restarts on {sub}")


def forest_defects(g: Graph, forest: PathPacking) -> List[str]:
    """Names of the forest properties that fail, empty when all hold."""
    defects = []
    delta = g.max_degree
    seen: Set[int] = set()
    for p in forest:
        if len(p) - 1 not in FOREST_LENGTHS or seen & set(p) or len(set(p)) != len(p):
            defects.append("path_shape")
            break
        if any(not g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1)):
            defects.append("path_shape")
            break
        seen.update(p)
    loose = [v for v in g.vertices() if v not in seen]
    loose_set = set(loose)
    if any(sum(1 for u in g.adjacency[v] if u in loose_set) > 1 for v in loose):
        defects.append("uncovered_structure")
    if any(2 * g.degree(v) > delta + 1 for v in loose):
        defects.append("uncovered_degree")
    if any(forest.degree(u) != 2 for v in loose for u in g.adjacency[v] if u in seen):
        defects.append("neighbor_degree")
    return defects


def find_linear_forest(
    g: Graph,
    seed: int = 0,
    exact_limit: int = 20,
    restarts: int = 200,
) -> LinearForest:
    """
    Linear forest with the three forest properties.

    Components are handled in smallest-vertex order: components of at most
    two vertices stay uncovered, big suns lose one pendant, small
    components get an exact factor or the deficiency construction, large
    ones a repaired randomized path cover. A final extension pass attaches
    uncovered vertices to path ends. A forest failing the final check is
    rebuilt from the next seed, up to `restarts` times.

    Raises:
        ForestFailed: naming the stage that failed.
    """
    delta = g.max_degree
    defects: List[str] = []
    attempts = max(restarts, 1)
    for attempt in range(attempts):
        rng = random.Random(seed + attempt)
        paths: List[Path] = []
        for comp in components(g):
            sub, back = induced_subgraph(g, comp)
            local = _component_paths(sub, delta, rng, exact_limit, restarts)
            paths.extend(tuple(back[v] for v in p) for p in local)

        forest = extend_forest(g, PathPacking(paths))
        defects = forest_defects(g, forest)
        if not defects:
            logger.debug(
                f"Linear forest with {len(forest)} paths, "
                f"{len(forest.uncovered)} uncovered of {g.n}"
            )
            return forest
        logger.warning(f"Forest attempt {attempt + 1} violates {', '.join(defects)}; retrying")
    raise ForestFailed(
        "verify", f"forest violates {', '.join(defects)} after {attempts} attempt(s)"
    )
