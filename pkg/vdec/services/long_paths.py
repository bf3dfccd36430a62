"""
Long Path System Coloring

Three-colors a system of vertex-disjoint paths (each with at least three
vertices) so that the two vertices of every constrained pair end with
different color-sets.
"""

import logging
import random
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .constraints import PairConstraints
from .edge_coloring import EdgeColoring
from .errors import PreconditionFailed, StageFailure
from .graph_core import Graph
from .path_factor import PathPacking

logger = logging.getLogger(__name__)

Option = Tuple[int, ...]


class SearchExhausted(StageFailure):
    """Raised when every restart of the search runs out of nodes or options."""
    pass


def _options(edge_count: int) -> List[Option]:
    """Proper 3-colorings of a path with `edge_count` edges, lexicographic."""
    return [
        combo for combo in product((1, 2, 3), repeat=edge_count)
        if all(combo[i] != combo[i + 1] for i in range(edge_count - 1))
    ]


def _set_at(option: Option, position: int) -> FrozenSet[int]:
    return frozenset(option[j] for j in (position - 1, position) if 0 <= j < len(option))


class _Search:
    """Depth-first search over per-path options with forward checking."""

    def __init__(
        self,
        paths: Sequence[Tuple[int, ...]],
        pairs: PairConstraints,
        rng: Optional[random.Random],
        node_budget: int,
    ):
        self.paths = paths
        self.where: Dict[int, Tuple[int, int]] = {
            v: (pid, i) for pid, p in enumerate(paths) for i, v in enumerate(p)
        }
        self.links: Dict[int, List[Tuple[int, int, int]]] = {pid: [] for pid in range(len(paths))}
        self.domains: Dict[int, List[Option]] = {}
        for pid, p in enumerate(paths):
            options = _options(len(p) - 1)
            if rng is not None:
                rng.shuffle(options)
            self.domains[pid] = options
        for x, y in pairs:
            if x not in self.where or y not in self.where:
                continue
            px, ix = self.where[x]
            py, iy = self.where[y]
            if px == py:
                self.domains[px] = [
                    o for o in self.domains[px] if _set_at(o, ix) != _set_at(o, iy)
                ]
            else:
                self.links[px].append((ix, py, iy))
                self.links[py].append((iy, px, ix))
        self.assigned: Dict[int, Option] = {}
        self.budget = node_budget
        self.nodes = 0

    def _pick(self) -> int:
        free = [pid for pid in self.domains if pid not in self.assigned]
        return min(free, key=lambda pid: (len(self.domains[pid]), pid))

    def solve(self) -> Optional[Dict[int, Option]]:
        if any(not d for d in self.domains.values()):
            return None
        return self.assigned if self._extend() else None

    def _extend(self) -> bool:
        if len(self.assigned) == len(self.paths):
            return True
        self.nodes += 1
        if self.nodes > self.budget:
            return False
        pid = self._pick()
        for option in list(self.domains[pid]):
            self.assigned[pid] = option
            trail: List[Tuple[int, List[Option]]] = []
            consistent = True
            for mine, other, theirs in self.links[pid]:
                if other in self.assigned:
                    if _set_at(self.assigned[other], theirs) == _set_at(option, mine):
                        consistent = False
                        break
                    continue
                mine_set = _set_at(option, mine)
                kept = [o for o in self.domains[other] if _set_at(o, theirs) != mine_set]
                trail.append((other, self.domains[other]))
                self.domains[other] = kept
                if not kept:
                    consistent = False
                    break
            if consistent and self._extend():
                return True
            for other, saved in reversed(trail):
                self.domains[other] = saved
            del self.assigned[pid]
            if self.nodes > self.budget:
                return False
        return False


def long_path_3color(
    host: Graph,
    paths: PathPacking,
    pairs: PairConstraints,
    offset: int = 0,
    seed: int = 0,
    restarts: int = 20,
    node_budget: int = 100_000,
) -> EdgeColoring:
    """
    Proper 3-coloring of the path edges that separates every constrained pair.

    Paths are variables whose values are proper colorings; the
    most-constrained path is assigned first (lowest id on ties) and
    partners' options are filtered on assignment. The first attempt tries
    options in lexicographic order, later attempts in seeded random order.

    Returns:
        Coloring of `host` with palette offset+3 in which exactly the path
        edges are colored, using colors offset+1 .. offset+3.

    Raises:
        PreconditionFailed: a path with fewer than three vertices.
        SearchExhausted: no attempt succeeded.
    """
    ordered = sorted(paths.paths, key=min)
    for p in ordered:
        if len(p) < 3:
            raise PreconditionFailed(f"path {list(p)} has fewer than three vertices")
    rng = random.Random(seed)
    for attempt in range(restarts + 1):
        search = _Search(ordered, pairs, None if attempt == 0 else rng, node_budget)
        solution = search.solve()
        if solution is not None:
            coloring = EdgeColoring(host, offset + 3)
            for pid, option in sorted(solution.items()):
                p = ordered[pid]
                for i, color in enumerate(option):
                    coloring.assign(p[i], p[i + 1], offset + color)
            logger.debug(
                f"Long path system colored after {attempt} restart(s), {search.nodes} nodes"
            )
            return coloring
        logger.debug(f"Long path search attempt {attempt} failed after {search.nodes} nodes")
    raise SearchExhausted(f"no 3-coloring of {len(ordered)} paths within {restarts} restarts")
