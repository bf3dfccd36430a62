"""
Coloring Pipelines

End-to-end vertex-distinguishing edge colorings:

- general_vdec: any vdec graph, at most floor(5.5k(G) + 6.5) colors, via a
  semi-vd base coloring, a conflict-edge shift and forest recoloring.
- regular_vdec: large sparse regular graphs, at most k(G) + 3 colors, via a
  spanning forest, a semi-vd coloring of the rest and a 3-coloring of the
  forest.
- exact_vdec: the brute-force optimum for small graphs.

Each run returns the final coloring with a trace of its stages.
"""

import logging
import random
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, List, Optional, Tuple

from vdec.schemas.report import VerificationReport
from vdec.schemas.run import RunConfig
from vdec.schemas.trace import StageRecord, TraceDocument

from .constraints import ForbiddenSets, PairConstraints
from .edge_coloring import (
    EdgeColoring,
    colliding_pairs,
    semi_vd_refine,
    shift_colors,
    union,
    vizing_color,
    with_palette,
)
from .errors import PreconditionFailed, StageFailure, VerificationFailed
from .graph_core import (
    Edge,
    Graph,
    NotVdecError,
    degree_profile,
    edge_key,
    is_regular,
    is_vdec,
    k_lower_bound,
    remove_edges,
)
from .long_paths import long_path_3color
from .oracle import exact_vd_coloring, verify_vd
from .path_factor import ForestFailed, LinearForest, SizeExceeded, find_linear_forest
from .path_recolor import path_recolor, recolor_palette

logger = logging.getLogger(__name__)


class ShiftFailed(StageFailure):
    """Raised when the conflict-edge shift misses its degree pattern or merges color-sets."""
    pass


class OracleExhausted(StageFailure):
    """Raised when the exact search finds no coloring up to its k limit."""
    pass


class VdVerificationFailed(VerificationFailed):
    """Raised when a final coloring is rejected by the independent checker."""

    def __init__(self, report: VerificationReport, message: str):
        self.report = report
        super().__init__(message)


def general_bound(k_graph: int) -> int:
    """floor(5.5k + 6.5) in exact integer arithmetic."""
    return (11 * k_graph + 13) // 2


def regular_bound(k_graph: int) -> int:
    return k_graph + 3


@dataclass
class PipelineResult:
    """Final coloring, serialisable trace and the intermediate artifacts."""
    coloring: EdgeColoring
    trace: TraceDocument
    artifacts: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ConflictSelection:
    """Colliding pairs among uncovered vertices and the edges chosen to separate them."""
    pairs: PairConstraints
    edges: Tuple[Edge, ...]
    h: Graph


class _Stages:
    """Collects stage records with wall-clock timings."""

    def __init__(self):
        self.records: List[StageRecord] = []
        self._started = time.perf_counter()

    def record(self, name: str, palette: Tuple[int, int], vertices: int, edges: int,
               seed: Optional[int] = None, **details: int) -> None:
        now = time.perf_counter()
        self.records.append(
            StageRecord(
                name=name,
                palette_lo=palette[0],
                palette_hi=palette[1],
                vertices=vertices,
                edges=edges,
                elapsed_ms=(now - self._started) * 1000.0,
                seed=seed,
                details=details,
            )
        )
        logger.info(
            f"Stage {name}: colors {palette[0]}..{palette[1]}, "
            f"{vertices} vertices, {edges} edges"
        )
        self._started = now


def _derive_seeds(seed: int, count: int) -> List[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(count)]


def _verified(g: Graph, coloring: EdgeColoring, bound: int, method: str) -> VerificationReport:
    report = verify_vd(g, coloring, bound)
    if not report.passed:
        first = report.violations[0]
        raise VdVerificationFailed(
            report,
            f"{method} coloring rejected: {len(report.violations)} violation(s), "
            f"first {first.check} at {first.vertices or first.edges}",
        )
    return report


# ---------------------------------------------------------------------------
# Conflict-edge shift
# ---------------------------------------------------------------------------

def select_conflict_edges(g: Graph, forest: LinearForest, base: EdgeColoring) -> ConflictSelection:
    """
    Choose one edge per colliding pair of uncovered vertices.

    For a pair u < v with equal color-sets: an edge from u to a covered
    vertex if u has one, else an edge from v to a covered vertex, else u's
    only edge. A pair whose u-edge would leave both ends with one selected
    edge instead reuses the already selected edge at v. Covered neighbors
    are taken lowest id first.

    Returns:
        The pairs, the selected edges and H, the spanning subgraph they form.
        Every pair ends with H-degrees {1, 0}, {2, 0} or {2, 1}.

    Raises:
        SemiVdViolated: if base has a color-set on three or more vertices.
        ShiftFailed: if a pair misses the degree pattern.
    """
    colliding_pairs(base)
    uncovered = set(forest.uncovered)
    pairs = colliding_pairs(base, uncovered)

    def outside(x: int) -> List[int]:
        return [y for y in g.adjacency[x] if y not in uncovered]

    chosen: Dict[Tuple[int, int], Edge] = {}
    case_a: List[Tuple[int, int]] = []
    for u, v in pairs:
        out_u, out_v = outside(u), outside(v)
        if out_u:
            chosen[(u, v)] = edge_key(u, out_u[0])
            case_a.append((u, v))
        elif out_v:
            chosen[(u, v)] = edge_key(v, out_v[0])
        else:
            chosen[(u, v)] = edge_key(u, g.adjacency[u][0])

    selected = set(chosen.values())
    h_degree: Counter = Counter(x for e in selected for x in e)
    for u, v in case_a:
        if h_degree[u] != 1 or h_degree[v] != 1:
            continue
        inner = [z for z in g.adjacency[v] if z in uncovered]
        if len(inner) == 1 and edge_key(inner[0], v) in selected:
            own = chosen[(u, v)]
            chosen[(u, v)] = edge_key(inner[0], v)
            selected.discard(own)
            h_degree[u] -= 1
            h_degree[own[0] if own[1] == u else own[1]] -= 1

    edges = tuple(sorted(selected))
    h = Graph(g.n, edges, g.labels)
    allowed = ({0, 1}, {0, 2}, {1, 2})
    for u, v in pairs:
        if {h.degree(u), h.degree(v)} not in allowed:
            raise ShiftFailed(
                f"pair ({g.labels[u]}, {g.labels[v]}) has H-degrees "
                f"{h.degree(u)} and {h.degree(v)}"
            )
    logger.debug(
        f"Selected {len(edges)} conflict edges for {len(pairs)} pairs, Δ(H) = {h.max_degree}"
    )
    return ConflictSelection(pairs, edges, h)


def _check_refines(base: EdgeColoring, shifted: EdgeColoring) -> None:
    """Vertices with distinct base color-sets keep distinct shifted color-sets."""
    origin: Dict[int, int] = {}
    for v in base.host.vertices():
        before = origin.setdefault(shifted.mask(v), base.mask(v))
        if before != base.mask(v):
            raise ShiftFailed(f"shift merged two color-sets at vertex {base.host.labels[v]}")


def conflict_forbidden_sets(g: Graph, forest: LinearForest, shifted: EdgeColoring) -> ForbiddenSets:
    """
    For each forest vertex v, the forest vertices u whose color-set outside
    the forest equals v's (same degree in g and in the forest) while their
    whole color-sets differ. Vertices with equal whole sets are pairs, not
    forbidden entries.
    """
    forest_mask: Dict[int, int] = defaultdict(int)
    for u, v in forest.edges():
        bit = 1 << shifted.color(u, v)
        forest_mask[u] |= bit
        forest_mask[v] |= bit
    groups: Dict[Tuple[int, int, int], List[int]] = defaultdict(list)
    for v in sorted(forest.covered):
        groups[(g.degree(v), forest.degree(v), shifted.mask(v) & ~forest_mask[v])].append(v)

    sets: Dict[int, List[int]] = {}
    for members in groups.values():
        for v in members:
            others = [u for u in members if shifted.mask(u) != shifted.mask(v)]
            if others:
                sets[v] = others
    return ForbiddenSets(sets)


# ---------------------------------------------------------------------------
# General graphs
# ---------------------------------------------------------------------------

def general_vdec(
    g: Graph,
    seed: int = 0,
    exact_limit: int = 20,
    semi_vd_restarts: int = 50,
    forest_restarts: int = 200,
    uphill: int = 4,
) -> PipelineResult:
    """
    Vertex-distinguishing coloring of any vdec graph with at most
    floor(5.5k(G) + 6.5) colors.

    With k = k(G) + 1: a linear forest F; a semi-vd k-coloring of g; the
    selected conflict edges shifted into k+1..2k; forest edges recolored
    from 2k+1 onwards so that forest vertices sharing a residual color-set
    end apart.

    Raises:
        NotVdecError: if g is not vdec.
        StageFailure: from any stage.
        VdVerificationFailed: if the final coloring is rejected.
    """
    k_graph = k_lower_bound(g)
    k = k_graph + 1
    bound = general_bound(k_graph)
    forest_seed, refine_seed = _derive_seeds(seed, 2)
    stages = _Stages()
    logger.info(f"General pipeline: n={g.n}, m={g.m}, k(G)={k_graph}, bound={bound}")

    forest = find_linear_forest(g, forest_seed, exact_limit, forest_restarts)
    stages.record("forest", (0, 0), len(forest.covered), len(forest.edges()), forest_seed,
                  paths=len(forest), uncovered=len(forest.uncovered))

    base = semi_vd_refine(
        with_palette(vizing_color(g), k), refine_seed, semi_vd_restarts, uphill
    )
    stages.record("base", (1, k), g.n, g.m, refine_seed, colors=len(base.colors_used()))

    selection = select_conflict_edges(g, forest, base)
    shifted = shift_colors(base, selection.edges, k)
    _check_refines(base, shifted)
    stages.record("shift", (k + 1, 2 * k), len(forest.uncovered), len(selection.edges),
                  pairs=len(selection.pairs), h_max_degree=selection.h.max_degree)

    pairs = colliding_pairs(shifted)
    forb = conflict_forbidden_sets(g, forest, shifted)
    palette = recolor_palette(k)
    recolored = path_recolor(forest, k, forb, pairs, offset=2 * k)
    stages.record("recolor", (2 * k + 1, 2 * k + palette), len(forest.covered),
                  len(forest.edges()), pairs=len(pairs.restricted_to(forest.covered)),
                  forbidden=sum(len(s) for _, s in forb.items()))

    forest_edges = set(forest.edges())
    rest = EdgeColoring(g, 2 * k)
    for (u, v), color in shifted.items():
        if (u, v) not in forest_edges:
            rest.assign(u, v, color)
    final = union(g, 2 * k + palette, [rest, recolored])
    _verified(g, final, bound, "general")
    used = len(final.colors_used())
    stages.record("verify", (1, bound), g.n, g.m, colors=used)

    trace = TraceDocument(
        method="general", k=k_graph, bound=bound, colors_used=used, seed=seed, stages=stages.records
    )
    logger.info(f"General pipeline used {used} of {bound} colors")
    return PipelineResult(
        final,
        trace,
        {
            "forest": forest,
            "base": base,
            "selection": selection,
            "shifted": shifted,
            "forbidden": forb,
            "recoloring": recolored,
        },
    )


# ---------------------------------------------------------------------------
# Regular graphs
# ---------------------------------------------------------------------------

def counting_room_exceeded(endpoints: int, interior: int, n: int) -> bool:
    """Whether a spanning forest has more than 2n/3 path ends or 3n/5 interior vertices."""
    return 3 * endpoints > 2 * n or 5 * interior > 3 * n


def regular_hypotheses(g: Graph) -> List[str]:
    """Violated inequalities of the regular method, in checking order."""
    d = is_regular(g)
    if d is None:
        return ["graph is not regular"]
    n = g.n
    violated = []
    if n < 256:
        violated.append(f"n >= 256 fails: n = {n}")
    if 2 ** d < n:
        violated.append(f"2^d >= n fails: 2^{d} < {n}")
    if d >= n - 1:
        violated.append(f"d < n - 1 fails: d = {d}, n = {n}")
    if (d - 4) ** 2 >= 2 * n:
        violated.append(f"(d - 4)^2 < 2n fails: ({d} - 4)^2 >= {2 * n}")
    return violated


def regular_vdec(
    g: Graph,
    seed: int = 0,
    exact_limit: int = 20,
    semi_vd_restarts: int = 50,
    forest_restarts: int = 200,
    long_path_restarts: int = 20,
    uphill: int = 4,
) -> PipelineResult:
    """
    Vertex-distinguishing coloring of a large sparse d-regular graph with at
    most k(G) + 3 colors.

    A spanning linear forest F is removed; H = g - E(F) gets a semi-vd
    k(G)-coloring and F a 3-coloring with colors k(G)+1..k(G)+3 that
    separates every pair H leaves equal.

    Raises:
        PreconditionFailed: naming the first violated hypothesis.
        StageFailure: from any stage.
        VdVerificationFailed: if the final coloring is rejected.
    """
    if not is_vdec(g):
        raise NotVdecError("graph has two isolated vertices or an isolated edge")
    violated = regular_hypotheses(g)
    if violated:
        raise PreconditionFailed(f"regular method refused: {violated[0]}")
    d = g.max_degree
    k_graph = k_lower_bound(g)
    bound = regular_bound(k_graph)
    forest_seed, refine_seed, path_seed = _derive_seeds(seed, 3)
    stages = _Stages()
    logger.info(f"Regular pipeline: n={g.n}, d={d}, k(G)={k_graph}, bound={bound}")

    forest = find_linear_forest(g, forest_seed, exact_limit, forest_restarts)
    if forest.uncovered:
        raise ForestFailed("spanning", f"{len(forest.uncovered)} vertices left uncovered")
    endpoints = sum(1 for v in g.vertices() if forest.degree(v) == 1)
    interior = g.n - endpoints
    stages.record("forest", (0, 0), g.n, len(forest.edges()), forest_seed,
                  paths=len(forest), endpoints=endpoints, interior=interior)
    if counting_room_exceeded(endpoints, interior, g.n):
        logger.warning(
            f"Forest exceeds the counting room: {endpoints} endpoints (limit 2n/3) and "
            f"{interior} interior vertices (limit 3n/5) of {g.n}"
        )

    h = remove_edges(g, forest.edges())
    for degree, count in degree_profile(h).items():
        if comb(k_graph, degree) < count:
            raise PreconditionFailed(
                f"C({k_graph}, {degree}) < {count} vertices of degree {degree} in g - F"
            )
    if k_graph < h.max_degree + 1:
        raise PreconditionFailed(f"k(G) = {k_graph} below Δ(H) + 1 = {h.max_degree + 1}")

    base = semi_vd_refine(
        with_palette(vizing_color(h), k_graph), refine_seed, semi_vd_restarts, uphill
    )
    stages.record("base", (1, k_graph), g.n, h.m, refine_seed, colors=len(base.colors_used()))

    pairs = colliding_pairs(base)
    paths = long_path_3color(g, forest, pairs, offset=k_graph, seed=path_seed,
                             restarts=long_path_restarts)
    stages.record("paths", (k_graph + 1, k_graph + 3), g.n, len(forest.edges()), path_seed,
                  pairs=len(pairs))

    final = union(g, bound, [with_palette(base, bound), paths])
    _verified(g, final, bound, "regular")
    used = len(final.colors_used())
    stages.record("verify", (1, bound), g.n, g.m, colors=used)

    trace = TraceDocument(
        method="regular", k=k_graph, bound=bound, colors_used=used, seed=seed, stages=stages.records
    )
    logger.info(f"Regular pipeline used {used} of {bound} colors")
    return PipelineResult(final, trace, {"forest": forest, "h": h, "base": base, "paths": paths})


# ---------------------------------------------------------------------------
# Exact optimum
# ---------------------------------------------------------------------------

def exact_vdec(g: Graph, slack: int = 3, edge_limit: int = 12) -> PipelineResult:
    """
    Optimal coloring by exhaustive search, trying k(G) .. k(G) + slack.

    Raises:
        NotVdecError: if g is not vdec.
        SizeExceeded: if g has more than `edge_limit` edges.
        OracleExhausted: if no k in range works.
    """
    k_graph = k_lower_bound(g)
    if g.m > edge_limit:
        raise SizeExceeded(f"exact search limited to {edge_limit} edges, graph has {g.m}")
    stages = _Stages()
    for k in range(k_graph, k_graph + slack + 1):
        coloring = exact_vd_coloring(g, k)
        if coloring is not None:
            _verified(g, coloring, k, "exact")
            stages.record("exact", (1, k), g.n, g.m, tried=k - k_graph + 1)
            trace = TraceDocument(
                method="exact", k=k_graph, bound=k, colors_used=len(coloring.colors_used()),
                stages=stages.records,
            )
            return PipelineResult(coloring, trace)
    raise OracleExhausted(f"no vd coloring with at most {k_graph + slack} colors")


def run_method(g: Graph, config: RunConfig) -> PipelineResult:
    """Dispatch to the pipeline named by config.method with its budgets."""
    if config.method == "regular":
        return regular_vdec(
            g,
            config.seed,
            config.exact_limit,
            config.semi_vd_restarts,
            config.forest_restarts,
            config.long_path_restarts,
            config.uphill_limit,
        )
    if config.method == "exact":
        return exact_vdec(g, config.oracle_slack, config.oracle_edge_limit)
    return general_vdec(
        g,
        config.seed,
        config.exact_limit,
        config.semi_vd_restarts,
        config.forest_restarts,
        config.uphill_limit,
    )
