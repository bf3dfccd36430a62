"""
Bench Service

Runs every applicable method over a corpus directory of graph files and
collects one verified CSV row per (graph, method).
"""

import csv
import io
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Tuple

from vdec.schemas.bench import BENCH_COLUMNS, BenchRow
from vdec.schemas.run import RunConfig

from .errors import InputError, VdecError
from .graph_core import Graph, NotVdecError, is_vdec, k_lower_bound, read_graph
from .oracle import verify_vd
from .pipeline import regular_hypotheses, run_method

logger = logging.getLogger(__name__)


def error_code(error: BaseException) -> str:
    """Short error label for the CSV error column."""
    if isinstance(error, NotVdecError):
        return "not-vdec"
    if isinstance(error, InputError):
        return f"parse: {error}"
    return f"{type(error).__name__}: {error}"


def applicable_methods(g: Graph, config: RunConfig) -> List[str]:
    """general always; regular inside its hypotheses; exact for small graphs."""
    methods = ["general"]
    if not regular_hypotheses(g):
        methods.append("regular")
    if g.m <= config.oracle_edge_limit:
        methods.append("exact")
    return methods


def bench_graph(name: str, g: Graph, config: RunConfig) -> List[BenchRow]:
    """Rows for one graph; stage failures become error rows."""
    if not is_vdec(g):
        return [BenchRow(name=name, n=g.n, m=g.m, method="general", error="not-vdec")]
    k = k_lower_bound(g)
    rows = []
    for method in applicable_methods(g, config):
        started = time.perf_counter()
        row = BenchRow(name=name, n=g.n, m=g.m, k=k, method=method)
        try:
            result = run_method(g, config.model_copy(update={"method": method}))
            row.colors_used = result.trace.colors_used
            row.bound = result.trace.bound
            row.verified = verify_vd(g, result.coloring, result.trace.bound).passed
        except VdecError as e:
            logger.warning(f"{name} / {method}: {e}")
            row.error = error_code(e)
        row.ms = (time.perf_counter() - started) * 1000.0
        rows.append(row)
    return rows


def _bench_file(job: Tuple[str, str, RunConfig]) -> List[BenchRow]:
    name, path, config = job
    try:
        g = read_graph(path)
    except InputError as e:
        return [BenchRow(name=name, n=0, m=0, method="general", error=error_code(e))]
    return bench_graph(name, g, config)


def corpus_files(directory: str) -> List[Tuple[str, str]]:
    """(name, path) of every visible regular file, sorted by name."""
    try:
        entries = sorted(os.listdir(directory))
    except OSError as e:
        raise InputError(f"cannot list corpus {directory}: {e}") from e
    return [
        (entry, os.path.join(directory, entry))
        for entry in entries
        if not entry.startswith(".") and os.path.isfile(os.path.join(directory, entry))
    ]


def run_bench(directory: str, config: RunConfig) -> List[BenchRow]:
    """
    Bench every corpus file, in parallel when config.jobs > 1.

    Rows come back ordered by file name regardless of completion order.
    """
    jobs = [(name, path, config) for name, path in corpus_files(directory)]
    logger.info(f"Benching {len(jobs)} graphs from {directory} with {config.jobs} job(s)")
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            batches = list(pool.map(_bench_file, jobs))
    else:
        batches = [_bench_file(job) for job in jobs]
    return [row for batch in batches for row in batch]


def render_csv(rows: List[BenchRow]) -> str:
    """Comma-separated rows under the fixed header; the header is always present."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    writer.writerows(row.csv_cells() for row in rows)
    return buffer.getvalue()
