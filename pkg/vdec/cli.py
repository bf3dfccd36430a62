"""
Command-Line Interface

Subcommands
-----------
kbound   print k(G) and the degree profile of a graph file
color    color a graph (general, regular or exact) and write the coloring JSON
gen      write a generated graph (gnp, regular, cycle, path, star, tree)
bench    run every applicable method over a corpus directory, CSV out
verify   check a coloring JSON against its graph
forest   write the linear forest JSON of a graph
summary  print the graph summary JSON

Exit codes: 0 ok, 2 input, 3 precondition, 4 stage failure, 5 verification.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from vdec.config import Settings, get_settings
from vdec.schemas.common import ErrorResponse
from vdec.schemas.run import RunConfig
from vdec.services.bench import render_csv, run_bench
from vdec.services.documents import (
    coloring_document,
    forest_document,
    graph_summary,
    read_coloring,
)
from vdec.services.errors import (
    InputError,
    VdecError,
    VerificationFailed,
    category_of,
    exit_code_for,
)
from vdec.services.generators import GENERATOR_KINDS, generate
from vdec.services.graph_core import degree_profile, k_lower_bound, read_graph, save_graph
from vdec.services.oracle import verify_vd
from vdec.services.path_factor import find_linear_forest
from vdec.services.pipeline import VdVerificationFailed, run_method

logger = logging.getLogger(__name__)


class ReportFailed(VerificationFailed):
    """Raised when `verify` finds violations; the report is already printed."""
    pass


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e}") from e


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e


def _run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    """Flags override settings; missing flags fall back to VDEC_* values."""
    restarts = getattr(args, "restarts", None)
    exact_limit = getattr(args, "exact_limit", None)
    seed = getattr(args, "seed", None)
    jobs = getattr(args, "jobs", None)
    try:
        return RunConfig(
            command=args.command,
            input_path=getattr(args, "graph", None),
            seed=settings.seed if seed is None else seed,
            method=getattr(args, "method", "general"),
            exact_limit=settings.exact_limit if exact_limit is None else exact_limit,
            semi_vd_restarts=settings.semi_vd_restarts if restarts is None else restarts,
            forest_restarts=settings.forest_restarts if restarts is None else restarts,
            long_path_restarts=settings.long_path_restarts if restarts is None else restarts,
            uphill_limit=settings.uphill_limit,
            oracle_slack=settings.oracle_slack,
            oracle_edge_limit=settings.oracle_edge_limit,
            jobs=settings.bench_jobs if jobs is None else jobs,
            out_path=getattr(args, "out", None),
            trace_path=getattr(args, "trace", None),
        )
    except ValidationError as e:
        raise InputError(f"invalid options: {e.errors()[0]['msg']}") from e


# ===================================================================
#  Subcommands
# ===================================================================

def cmd_kbound(args: argparse.Namespace, config: RunConfig) -> None:
    """Print k(G), then one "d: n_d" line per degree class."""
    g = read_graph(args.graph)
    k = k_lower_bound(g)
    lines = [str(k)]
    lines.extend(f"{d}: {count}" for d, count in degree_profile(g).items())
    print("\n".join(lines))


def cmd_color(args: argparse.Namespace, config: RunConfig) -> None:
    """Color, verify, write the coloring (and trace) and print "colors_used / bound"."""
    g = read_graph(args.graph)
    result = run_method(g, config)
    report = verify_vd(g, result.coloring, result.trace.bound)
    if not report.passed:
        raise VdVerificationFailed(
            report, f"{len(report.violations)} violation(s) in the {config.method} coloring"
        )
    _emit(coloring_document(result.coloring).model_dump_json(indent=2) + "\n", config.out_path)
    if config.trace_path is not None:
        _emit(result.trace.model_dump_json(indent=2) + "\n", config.trace_path)
    print(f"{result.trace.colors_used} / {result.trace.bound}")


def cmd_gen(args: argparse.Namespace, config: RunConfig) -> None:
    g = generate(args.kind, args.n, config.seed, args.p, args.d)
    _emit(save_graph(g), config.out_path)


def cmd_bench(args: argparse.Namespace, config: RunConfig) -> None:
    rows = run_bench(args.corpus, config)
    _emit(render_csv(rows), config.out_path)


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> None:
    """Print the VerificationReport; fail with exit 5 when it has violations."""
    g = read_graph(args.graph)
    table = read_coloring(g, _read_text(args.coloring))
    report = verify_vd(g, table, args.bound)
    print(report.model_dump_json(indent=2))
    if not report.passed:
        raise ReportFailed(f"{len(report.violations)} violation(s)")


def cmd_forest(args: argparse.Namespace, config: RunConfig) -> None:
    g = read_graph(args.graph)
    forest = find_linear_forest(g, config.seed, config.exact_limit, config.forest_restarts)
    _emit(forest_document(forest).model_dump_json(indent=2) + "\n", config.out_path)


def cmd_summary(args: argparse.Namespace, config: RunConfig) -> None:
    g = read_graph(args.graph)
    print(graph_summary(g).model_dump_json(indent=2))


COMMANDS = {
    "kbound": cmd_kbound,
    "color": cmd_color,
    "gen": cmd_gen,
    "bench": cmd_bench,
    "verify": cmd_verify,
    "forest": cmd_forest,
    "summary": cmd_summary,
}


# ===================================================================
#  Parser
# ===================================================================

def create_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="vdec",
        description="Vertex-distinguishing edge colorings with guaranteed palette bounds.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help="Logging level (default: VDEC_LOG_LEVEL or WARNING)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_kbound = subparsers.add_parser("kbound", help="Print the k(G) lower bound")
    p_kbound.add_argument("graph", help="Edge-list file")

    p_color = subparsers.add_parser("color", help="Compute a vertex-distinguishing coloring")
    p_color.add_argument("graph", help="Edge-list file")
    p_color.add_argument(
        "--method", choices=["general", "regular", "exact"], default="general",
        help="Pipeline to run (default: general)",
    )
    p_color.add_argument("--seed", type=int, default=None, help="Master seed (default: VDEC_SEED)")
    p_color.add_argument("--exact-limit", type=int, default=None,
                         help="Largest component solved exactly")
    p_color.add_argument("--restarts", type=int, default=None,
                         help="Override every restart budget")
    p_color.add_argument("--out", default=None, help="Coloring JSON path (default: stdout)")
    p_color.add_argument("--trace", default=None, help="Trace JSON path")

    p_gen = subparsers.add_parser("gen", help="Generate a graph")
    p_gen.add_argument("kind", choices=list(GENERATOR_KINDS))
    p_gen.add_argument("--n", type=int, required=True,
                       help="Vertex count (number of leaves for star)")
    p_gen.add_argument("--p", type=float, default=0.3, help="Edge probability for gnp")
    p_gen.add_argument("--d", type=int, default=3, help="Degree for regular")
    p_gen.add_argument("--seed", type=int, default=None, help="Seed (default: VDEC_SEED)")
    p_gen.add_argument("--out", default=None, help="Output path (default: stdout)")

    p_bench = subparsers.add_parser("bench", help="Benchmark a corpus directory")
    p_bench.add_argument("corpus", help="Directory of edge-list files")
    p_bench.add_argument("--seed", type=int, default=None, help="Master seed (default: VDEC_SEED)")
    p_bench.add_argument("--exact-limit", type=int, default=None)
    p_bench.add_argument("--restarts", type=int, default=None)
    p_bench.add_argument("--jobs", type=int, default=None, help="Worker processes")
    p_bench.add_argument("--out", default=None, help="CSV path (default: stdout)")

    p_verify = subparsers.add_parser("verify", help="Verify a coloring JSON")
    p_verify.add_argument("graph", help="Edge-list file")
    p_verify.add_argument("coloring", help="Coloring JSON file")
    p_verify.add_argument("--bound", type=int, default=None,
                          help="Largest allowed color (default: the document palette)")

    p_forest = subparsers.add_parser("forest", help="Compute the linear forest")
    p_forest.add_argument("graph", help="Edge-list file")
    p_forest.add_argument("--seed", type=int, default=None)
    p_forest.add_argument("--exact-limit", type=int, default=None)
    p_forest.add_argument("--restarts", type=int, default=None)
    p_forest.add_argument("--out", default=None, help="Forest JSON path (default: stdout)")

    p_summary = subparsers.add_parser("summary", help="Print size and degree statistics")
    p_summary.add_argument("graph", help="Edge-list file")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    args = create_parser().parse_args(argv)
    settings = get_settings()
    logging.basicConfig(
        level=args.log_level or settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = _run_config(args, settings)
        COMMANDS[args.command](args, config)
    except VdecError as e:
        code = exit_code_for(e)
        if not isinstance(e, ReportFailed):
            error = ErrorResponse(
                error=type(e).__name__, detail=str(e), code=category_of(e), exit_code=code
            )
            sys.stderr.write(error.model_dump_json() + "\n")
        logger.debug(f"{args.command} failed with exit code {code}")
        return code
    return 0
