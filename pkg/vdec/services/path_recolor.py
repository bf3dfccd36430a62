"""
Path Recoloring Service

Recolors a linear forest from a fresh palette of floor(3.5k + 1) colors so
that every constrained pair of forest vertices ends with different
color-sets. Paths are colored one at a time in smallest-vertex order; a
vertex is only compared against vertices of paths already colored, whose
color-sets are final.
"""

import logging
from typing import Dict, FrozenSet, List, Mapping, Sequence

from .constraints import ForbiddenSets, PairConstraints
from .edge_coloring import EdgeColoring
from .errors import PreconditionFailed, StageFailure
from .path_factor import LinearForest

logger = logging.getLogger(__name__)


class CandidateExhausted(StageFailure):
    """Raised when a candidate set or backward choice comes up empty."""
    pass


def recolor_palette(k: int) -> int:
    """floor(3.5k + 1) in exact integer arithmetic."""
    return (7 * k + 2) // 2


def _color_path(
    path: Sequence[int],
    palette: int,
    clashes: Mapping[int, List[FrozenSet[int]]],
) -> List[int]:
    """
    Distinct colors a_0..a_{t-1} for the edges v_i v_{i+1} of one path.

    Forward: S_0 holds the colors whose singleton avoids v_0's clashes;
    S_i the colors with at least four partners b in S_{i-1} such that
    {a, b} avoids v_i's clashes. Backward: a_{t-1} from S_{t-1} avoiding
    v_t's singleton clashes, then each a_i from S_i, distinct from the
    colors already chosen, with {a_i, a_{i+1}} avoiding v_{i+1}'s clashes.
    Lowest colors win every tie.
    """
    t = len(path) - 1
    colors = range(1, palette + 1)
    banned = [set(clashes.get(v, ())) for v in path]

    candidates: List[List[int]] = [[a for a in colors if frozenset({a}) not in banned[0]]]
    for i in range(1, t):
        previous = candidates[-1]
        layer = []
        for a in colors:
            partners = sum(
                1 for b in previous if b != a and frozenset({a, b}) not in banned[i]
            )
            if partners >= 4:
                layer.append(a)
        candidates.append(layer)
    for i, layer in enumerate(candidates):
        if not layer:
            raise CandidateExhausted(f"candidate set S_{i} is empty on path {list(path)}")

    chosen = [0] * t
    last = next((a for a in candidates[t - 1] if frozenset({a}) not in banned[t]), None)
    if last is None:
        raise CandidateExhausted(f"no color for the last edge of path {list(path)}")
    chosen[t - 1] = last
    for i in range(t - 2, -1, -1):
        pick = next(
            (
                a for a in candidates[i]
                if a not in chosen[i + 1:]
                and frozenset({a, chosen[i + 1]}) not in banned[i + 1]
            ),
            None,
        )
        if pick is None:
            raise CandidateExhausted(f"no color for edge {i} of path {list(path)}")
        chosen[i] = pick
    return chosen


def path_recolor(
    forest: LinearForest,
    k: int,
    forb: ForbiddenSets,
    pairs: PairConstraints,
    offset: int = 0,
) -> EdgeColoring:
    """
    Recolor every forest edge with colors offset+1 .. offset+floor(3.5k+1).

    Edges of one path get distinct colors. For every pair with both ends
    in the forest and every u in forb(v), the final color-sets differ.

    Args:
        forest: linear forest inside its host graph
        k: palette size of the coloring the forbidden sets were derived from
        forb: per-vertex forbidden sets (each u in forb(v) has v's forest degree)
        pairs: disjoint pairs; pairs leaving the forest are ignored
        offset: shift applied to the fresh colors

    Returns:
        Coloring of the host graph in which exactly the forest edges are colored.

    Raises:
        PreconditionFailed: k < 2 or constraint bounds violated.
        CandidateExhausted: a candidate set came up empty.
    """
    if k < 2:
        raise PreconditionFailed(f"path recoloring needs k >= 2, got {k}")
    covered = forest.covered
    in_forest = pairs.restricted_to(covered)
    degree = {v: forest.degree(v) for v in covered}
    forb.check_bounds(k, degree, in_forest)
    relations = forb.with_partners(in_forest)

    palette = recolor_palette(k)
    result = EdgeColoring(forest.host, offset + palette)
    current: Dict[int, FrozenSet[int]] = {}

    for path in sorted(forest.paths, key=min):
        clashes: Dict[int, List[FrozenSet[int]]] = {}
        for v in path:
            clashes[v] = [
                current[u] for u in sorted(relations[v])
                if u in current and degree.get(u) == degree[v]
            ]
        chosen = _color_path(path, palette, clashes)
        for i, color in enumerate(chosen):
            result.assign(path[i], path[i + 1], offset + color)
        for i, v in enumerate(path):
            current[v] = frozenset(chosen[j] for j in (i - 1, i) if 0 <= j < len(chosen))

    logger.debug(
        f"Recolored {len(forest)} paths with {len(result.colors_used())} of {palette} fresh colors"
    )
    return result
