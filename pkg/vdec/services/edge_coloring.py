"""
Edge Coloring Service

Proper edge colorings with color-sets kept as integer bitsets (bit c set iff
color c is present). Provides Vizing's (Δ+1)-coloring by fan rotation and
Kempe-path inversion, Kempe chain decomposition and swaps, the
sum-of-squares potential, and local-search refinement to a semi
vertex-distinguishing coloring.
"""

import logging
import random
from collections import Counter, deque
from dataclasses import dataclass
from math import comb
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple

from .constraints import PairConstraints
from .errors import PreconditionFailed, StageFailure
from .graph_core import Edge, Graph, degree_profile, edge_key

logger = logging.getLogger(__name__)

ColorSet = FrozenSet[int]


class ColoringError(PreconditionFailed):
    """Raised when an assignment would break properness or the palette."""
    pass


class PartialColoringError(ColoringError):
    """Raised when a color-set is requested at a vertex with uncolored edges."""
    pass


class SemiVdFailed(StageFailure):
    """Raised when refinement exhausts its restart budget."""
    pass


class SemiVdViolated(StageFailure):
    """Raised when a coloring expected to be semi-vd has a set on three vertices."""
    pass


def mask_of(colors: Iterable[int]) -> int:
    mask = 0
    for c in colors:
        mask |= 1 << c
    return mask


def colors_of(mask: int) -> ColorSet:
    result = []
    c = 0
    while mask:
        if mask & 1:
            result.append(c)
        mask >>= 1
        c += 1
    return frozenset(result)


class EdgeColoring:
    """
    Partial or total proper edge coloring of a host graph with colors 1..palette.

    Every mutation keeps the coloring proper; per-vertex bitsets and
    color -> neighbor maps are maintained incrementally.
    """

    def __init__(
        self,
        host: Graph,
        palette: int,
        colors: Optional[Mapping[Tuple[int, int], int]] = None,
    ):
        if palette < 1:
            raise ColoringError(f"palette must be positive, got {palette}")
        self.host = host
        self.palette = palette
        self._color: Dict[Edge, int] = {}
        self._at: List[Dict[int, int]] = [{} for _ in range(host.n)]
        self._mask: List[int] = [0] * host.n
        for (u, v), c in sorted((colors or {}).items()):
            self.assign(u, v, c)

    # -- queries -----------------------------------------------------------

    def color(self, u: int, v: int) -> Optional[int]:
        return self._color.get(edge_key(u, v))

    def items(self) -> Iterator[Tuple[Edge, int]]:
        return iter(sorted(self._color.items()))

    def __len__(self) -> int:
        return len(self._color)

    @property
    def is_total(self) -> bool:
        return len(self._color) == self.host.m

    def mask(self, v: int) -> int:
        return self._mask[v]

    def is_free(self, v: int, c: int) -> bool:
        return c not in self._at[v]

    def neighbor_via(self, v: int, c: int) -> Optional[int]:
        return self._at[v].get(c)

    def free_color(self, v: int) -> int:
        """Lowest palette color missing at v."""
        for c in range(1, self.palette + 1):
            if c not in self._at[v]:
                return c
        raise ColoringError(f"no free color at vertex {v} with palette {self.palette}")

    def colors_used(self) -> FrozenSet[int]:
        return frozenset(self._color.values())

    @property
    def max_color(self) -> int:
        return max(self._color.values(), default=0)

    # -- mutation ----------------------------------------------------------

    def assign(self, u: int, v: int, c: int) -> None:
        """Color edge uv with c, replacing any previous color."""
        key = edge_key(u, v)
        if not self.host.has_edge(u, v):
            raise ColoringError(f"({u}, {v}) is not an edge of the host")
        if not 1 <= c <= self.palette:
            raise ColoringError(f"color {c} outside palette 1..{self.palette}")
        if self._color.get(key) == c:
            return
        for x, y in ((u, v), (v, u)):
            other = self._at[x].get(c)
            if other is not None and other != y:
                raise ColoringError(f"color {c} already used at vertex {x}")
        self.uncolor(u, v)
        self._color[key] = c
        for x, y in ((u, v), (v, u)):
            self._at[x][c] = y
            self._mask[x] |= 1 << c

    def uncolor(self, u: int, v: int) -> None:
        key = edge_key(u, v)
        c = self._color.pop(key, None)
        if c is None:
            return
        for x in (u, v):
            del self._at[x][c]
            self._mask[x] &= ~(1 << c)

    def copy(self) -> "EdgeColoring":
        clone = EdgeColoring(self.host, self.palette)
        clone._color = dict(self._color)
        clone._at = [dict(at) for at in self._at]
        clone._mask = list(self._mask)
        return clone

    def __repr__(self) -> str:
        return f"EdgeColoring(palette={self.palette}, colored={len(self._color)}/{self.host.m})"


@dataclass(frozen=True)
class KempeChain:
    """Maximal component of the a/b-colored subgraph, vertices in walk order."""

    a: int
    b: int
    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    is_cycle: bool

    @property
    def endpoints(self) -> Tuple[int, ...]:
        if self.is_cycle:
            return ()
        return (self.vertices[0], self.vertices[-1])


# ---------------------------------------------------------------------------
# Vizing
# ---------------------------------------------------------------------------

def _cd_path(c: EdgeColoring, start: int, first: int, second: int) -> List[Edge]:
    """Edges of the path from `start` alternating colors first, second, first, ..."""
    edges: List[Edge] = []
    current, color = start, first
    while True:
        nxt = c.neighbor_via(current, color)
        if nxt is None:
            return edges
        edges.append(edge_key(current, nxt))
        current = nxt
        color = second if color == first else first


def _swap_edges(c: EdgeColoring, edges: List[Edge], a: int, b: int) -> None:
    swapped = [(e, b if c.color(*e) == a else a) for e in edges]
    for e, _ in swapped:
        c.uncolor(*e)
    for (u, v), color in swapped:
        c.assign(u, v, color)


def _color_edge(c: EdgeColoring, u: int, v: int) -> None:
    # Maximal fan at u starting with the uncolored edge uv.
    fan = [v]
    in_fan = {v}
    extended = True
    while extended:
        extended = False
        last = fan[-1]
        for color in range(1, c.palette + 1):
            if not c.is_free(last, color):
                continue
            w = c.neighbor_via(u, color)
            if w is not None and w not in in_fan:
                fan.append(w)
                in_fan.add(w)
                extended = True
                break

    free_u = c.free_color(u)
    free_last = c.free_color(fan[-1])
    if free_u != free_last:
        _swap_edges(c, _cd_path(c, u, free_last, free_u), free_u, free_last)

    # First fan prefix whose last vertex misses free_last.
    stop = len(fan) - 1
    for i, w in enumerate(fan):
        if i > 0 and not c.is_free(fan[i - 1], c.color(u, w) or 0):
            stop = i - 1
            break
        if c.is_free(w, free_last):
            stop = i
            break

    for j in range(stop):
        shifted = c.color(u, fan[j + 1])
        assert shifted is not None
        c.uncolor(u, fan[j + 1])
        c.assign(u, fan[j], shifted)
    c.assign(u, fan[stop], free_last)


def vizing_color(g: Graph) -> EdgeColoring:
    """
    Proper edge coloring with palette Δ+1 (Misra–Gries fan rotation).

    Edges are colored in canonical order; each uncolored edge uv builds a
    maximal fan at u, inverts one two-colored path from u and rotates a fan
    prefix.
    """
    c = EdgeColoring(g, max(1, g.max_degree + 1))
    for u, v in g.edges:
        _color_edge(c, u, v)
    logger.debug(f"Vizing colored {g.m} edges with {len(c.colors_used())} of {c.palette} colors")
    return c


# ---------------------------------------------------------------------------
# Color-sets and potential
# ---------------------------------------------------------------------------

def color_set(c: EdgeColoring, v: int) -> ColorSet:
    """
    Colors present at v.

    Raises:
        PartialColoringError: if an edge at v is uncolored.
    """
    for u in c.host.adjacency[v]:
        if c.color(u, v) is None:
            raise PartialColoringError(f"edge ({v}, {u}) is uncolored")
    return colors_of(c.mask(v))


def color_set_table(c: EdgeColoring) -> Dict[ColorSet, int]:
    """Occurring color-sets with the number of vertices carrying each."""
    counts = Counter(c.mask(v) for v in c.host.vertices())
    return {colors_of(mask): count for mask, count in counts.items()}


def potential(c: EdgeColoring) -> int:
    """Sum over occurring color-sets of the squared occurrence count."""
    return sum(count * count for count in Counter(c.mask(v) for v in c.host.vertices()).values())


def max_multiplicity(c: EdgeColoring) -> int:
    return max(Counter(c.mask(v) for v in c.host.vertices()).values(), default=0)


def colliding_pairs(c: EdgeColoring, vertices: Optional[Iterable[int]] = None) -> PairConstraints:
    """
    Pairs of vertices (within `vertices`) carrying equal color-sets.

    Raises:
        SemiVdViolated: if some color-set occurs on three or more of them.
    """
    groups: Dict[int, List[int]] = {}
    for v in sorted(vertices) if vertices is not None else c.host.vertices():
        groups.setdefault(c.mask(v), []).append(v)
    pairs = []
    for mask, members in groups.items():
        if len(members) >= 3:
            raise SemiVdViolated(
                f"color-set {sorted(colors_of(mask))} occurs on {len(members)} vertices {members}"
            )
        if len(members) == 2:
            pairs.append((members[0], members[1]))
    return PairConstraints(pairs)


# ---------------------------------------------------------------------------
# Kempe chains
# ---------------------------------------------------------------------------

def _chain_through(c: EdgeColoring, v: int, a: int, b: int) -> KempeChain:
    component = {v}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for color in (a, b):
            y = c.neighbor_via(x, color)
            if y is not None and y not in component:
                component.add(y)
                queue.append(y)
    ends = sorted(x for x in component if (c.is_free(x, a)) != (c.is_free(x, b)))
    is_cycle = not ends
    start = min(component) if is_cycle else ends[0]
    first = a if is_cycle or not c.is_free(start, a) else b
    order = [start]
    edges: List[Edge] = []
    current, color = start, first
    while True:
        nxt = c.neighbor_via(current, color)
        if nxt is None or (nxt == start and edges):
            if nxt == start:
                edges.append(edge_key(current, nxt))
            break
        edges.append(edge_key(current, nxt))
        order.append(nxt)
        current = nxt
        color = b if color == a else a
    return KempeChain(a, b, tuple(order), tuple(edges), is_cycle)


def kempe_chains(c: EdgeColoring, a: int, b: int) -> List[KempeChain]:
    """All maximal a/b chains, ordered by their lowest vertex."""
    if a == b:
        raise ValueError("Kempe chains need two distinct colors")
    seen = set()
    chains = []
    for v in c.host.vertices():
        if v in seen or (c.is_free(v, a) and c.is_free(v, b)):
            continue
        chain = _chain_through(c, v, a, b)
        seen.update(chain.vertices)
        chains.append(chain)
    return chains


def swap_chain(c: EdgeColoring, chain: KempeChain) -> None:
    """Exchange a and b along the chain (in place). Interior color-sets are unchanged."""
    _swap_edges(c, list(chain.edges), chain.a, chain.b)


# ---------------------------------------------------------------------------
# Derived colorings
# ---------------------------------------------------------------------------

def with_palette(c: EdgeColoring, palette: int) -> EdgeColoring:
    """Same coloring re-declared over a palette of the given size."""
    if palette < c.max_color:
        raise ColoringError(f"palette {palette} is smaller than the largest color {c.max_color}")
    result = c.copy()
    result.palette = palette
    return result


def shift_colors(c: EdgeColoring, edges: Iterable[Tuple[int, int]], offset: int) -> EdgeColoring:
    """Add `offset` to the color of every listed edge; the palette grows by `offset`."""
    targets = {edge_key(u, v) for u, v in edges}
    result = EdgeColoring(c.host, c.palette + offset)
    for e, color in c.items():
        result.assign(e[0], e[1], color + offset if e in targets else color)
    return result


def restrict(c: EdgeColoring, host: Graph, back: Optional[List[int]] = None) -> EdgeColoring:
    """
    The coloring seen on a subgraph.

    `back` maps subgraph ids to c.host ids; omitted when the subgraph is
    spanning.
    """
    result = EdgeColoring(host, c.palette)
    for u, v in host.edges:
        hu, hv = (back[u], back[v]) if back is not None else (u, v)
        color = c.color(hu, hv)
        if color is not None:
            result.assign(u, v, color)
    return result


def union(host: Graph, palette: int, parts: Iterable[EdgeColoring]) -> EdgeColoring:
    """Combine colorings of edge-disjoint spanning subgraphs of `host`."""
    result = EdgeColoring(host, palette)
    for part in parts:
        for (u, v), color in part.items():
            if result.color(u, v) is not None:
                raise ColoringError(f"edge ({u}, {v}) colored by two parts")
            result.assign(u, v, color)
    return result


# ---------------------------------------------------------------------------
# Semi-vd refinement
# ---------------------------------------------------------------------------

def _move_delta(counts: Counter, changes: List[Tuple[int, int]]) -> int:
    """Potential change when each (old, new) mask move is applied in order."""
    local: Counter = Counter()
    delta = 0
    for old, new in changes:
        if old == new:
            continue
        co = counts[old] + local[old]
        delta += -2 * co + 1
        local[old] -= 1
        cn = counts[new] + local[new]
        delta += 2 * cn + 1
        local[new] += 1
    return delta


def _chain_changes(c: EdgeColoring, chain: KempeChain) -> List[Tuple[int, int]]:
    flip = (1 << chain.a) | (1 << chain.b)
    return [(c.mask(x), c.mask(x) ^ flip) for x in chain.endpoints]


def _apply(c: EdgeColoring, counts: Counter, chain: KempeChain) -> None:
    for old, new in _chain_changes(c, chain):
        counts[old] -= 1
        counts[new] += 1
    swap_chain(c, chain)


class _Refiner:
    """Kempe-chain local search state for one coloring."""

    def __init__(self, c: EdgeColoring, rng: random.Random, uphill: int):
        self.c = c
        self.rng = rng
        self.uphill = uphill
        self.counts: Counter = Counter(c.mask(v) for v in c.host.vertices())
        self.potential = sum(n * n for n in self.counts.values())
        self.descent_log: List[int] = []
        self.moves = 0

    def worst(self) -> int:
        return max(self.counts.values(), default=0)

    def _improving_move_at(self, v: int) -> Optional[Tuple[KempeChain, int]]:
        c = self.c
        present = sorted(colors_of(c.mask(v)))
        for a in present:
            for b in range(1, c.palette + 1):
                if b == a or not c.is_free(v, b):
                    continue
                chain = _chain_through(c, v, a, b)
                if chain.is_cycle:
                    continue
                delta = _move_delta(self.counts, _chain_changes(c, chain))
                if delta < 0:
                    return chain, delta
        return None

    def descend(self) -> None:
        """
        First-improvement descent until no repeated class admits a move.

        The potential after every accepted move is appended to descent_log.
        """
        improved = True
        while improved and self.worst() > 2:
            improved = False
            for v in self.c.host.vertices():
                if self.counts[self.c.mask(v)] < 2:
                    continue
                move = self._improving_move_at(v)
                if move is not None:
                    chain, delta = move
                    _apply(self.c, self.counts, chain)
                    self.potential += delta
                    self.descent_log.append(self.potential)
                    self.moves += 1
                    improved = True

    def perturb(self, steps: int) -> None:
        c = self.c
        edges = c.host.edges
        if not edges or c.palette < 2:
            return
        for _ in range(steps):
            u, v = edges[self.rng.randrange(len(edges))]
            a = c.color(u, v)
            b = self.rng.randrange(1, c.palette + 1)
            if a is None or a == b:
                continue
            chain = _chain_through(c, u, a, b)
            if chain.is_cycle:
                continue
            delta = _move_delta(self.counts, _chain_changes(c, chain))
            if delta <= self.uphill:
                _apply(c, self.counts, chain)
                self.potential += delta


def semi_vd_refine(
    c: EdgeColoring,
    seed: int = 0,
    restarts: int = 50,
    uphill: int = 4,
) -> EdgeColoring:
    """
    Refine a proper total coloring until every color-set occurs on at most two vertices.

    Local search over single Kempe-chain swaps, accepting the first move
    that lowers the potential. Only chains ending at a vertex of a repeated
    class can lower it, so the scan is anchored at those vertices. On a
    stall the coloring is perturbed by 2|E| random swaps of bounded
    uphill cost and the descent restarts.

    Args:
        c: proper total coloring (left untouched)
        seed: perturbation seed
        restarts: perturbation budget
        uphill: largest potential increase accepted while perturbing

    Returns:
        A new semi-vd coloring over the same palette.

    Raises:
        PreconditionFailed: partial input or C(K, d) < n_d for some degree class.
        SemiVdFailed: restart budget exhausted.
    """
    if not c.is_total:
        raise PartialColoringError("semi-vd refinement needs a total coloring")
    for d, count in degree_profile(c.host).items():
        room = 2 if d == 0 else comb(c.palette, d)
        if room < count:
            raise PreconditionFailed(
                f"palette {c.palette} too small: C({c.palette}, {d}) < n_{d} = {count}"
            )

    refiner = _Refiner(c.copy(), random.Random(seed), uphill)
    for attempt in range(restarts + 1):
        refiner.descend()
        if refiner.worst() <= 2:
            logger.debug(
                f"Semi-vd refinement done after {refiner.moves} moves and {attempt} restart(s)"
            )
            return refiner.c
        logger.debug(f"Refinement stalled with worst class {refiner.worst()}; perturbing")
        refiner.perturb(2 * c.host.m)

    logger.warning(f"Semi-vd refinement exhausted {restarts} restarts")
    raise SemiVdFailed(f"no semi-vd coloring found within {restarts} restarts")
