"""
Bench Tests

Tests for corpus benchmarking and CSV rendering.
"""

import csv
import io

import pytest

from vdec.schemas.bench import BENCH_COLUMNS, BenchRow
from vdec.schemas.run import RunConfig
from vdec.services.bench import (
    applicable_methods,
    bench_graph,
    corpus_files,
    error_code,
    render_csv,
    run_bench,
)
from vdec.services.errors import InputError
from vdec.services.generators import cycle, path, random_regular
from vdec.services.graph_core import GraphParseError, NotVdecError, save_graph
from vdec.services.pipeline import ShiftFailed


def without_timings(rows):
    return [r.model_dump(exclude={"ms"}) for r in rows]


@pytest.fixture
def bench_config() -> RunConfig:
    return RunConfig(command="bench")


@pytest.fixture
def small_corpus_dir(tmp_path):
    """C5 and P3 as edge-list files."""
    (tmp_path / "c5.txt").write_text(save_graph(cycle(5)))
    (tmp_path / "p3.txt").write_text(save_graph(path(3)))
    return tmp_path


class TestErrorCodes:
    """Tests for error_code."""

    def test_labels(self):
        """Known errors map to short labels."""
        assert error_code(NotVdecError("x")) == "not-vdec"
        assert error_code(GraphParseError("bad line", line=2)).startswith("parse: ")
        assert error_code(ShiftFailed("degrees")) == "ShiftFailed: degrees"


class TestApplicableMethods:
    """Tests for applicable_methods."""

    def test_small_graph(self, c5, bench_config):
        """Small graphs get general and exact."""
        assert applicable_methods(c5, bench_config) == ["general", "exact"]

    def test_large_regular_graph(self, bench_config):
        """Large sparse regular graphs get general and regular."""
        g = random_regular(256, 8, seed=1)
        assert applicable_methods(g, bench_config) == ["general", "regular"]


class TestBench:
    """Tests for bench_graph and run_bench."""

    def test_corpus_rows(self, small_corpus_dir, bench_config):
        """One verified row per graph and method, ordered by file name."""
        rows = run_bench(str(small_corpus_dir), bench_config)
        assert [(r.name, r.method) for r in rows] == [
            ("c5.txt", "general"),
            ("c5.txt", "exact"),
            ("p3.txt", "general"),
            ("p3.txt", "exact"),
        ]
        assert all(r.verified for r in rows)
        assert all(r.error == "" for r in rows)
        assert rows[0].bound == 28
        assert rows[3].colors_used == 2

    def test_parallel_matches_serial(self, small_corpus_dir, bench_config):
        """Worker processes return the same rows in the same order."""
        serial = run_bench(str(small_corpus_dir), bench_config)
        parallel = run_bench(str(small_corpus_dir), bench_config.model_copy(update={"jobs": 2}))
        assert without_timings(serial) == without_timings(parallel)

    def test_not_vdec_row(self, k2, bench_config):
        """K2 yields a single not-vdec row."""
        rows = bench_graph("k2", k2, bench_config)
        assert len(rows) == 1
        assert rows[0].error == "not-vdec"
        assert not rows[0].verified

    def test_unreadable_file_row(self, tmp_path, bench_config):
        """A malformed file becomes a parse error row."""
        (tmp_path / "loop.txt").write_text("0 0\n")
        rows = run_bench(str(tmp_path), bench_config)
        assert len(rows) == 1
        assert rows[0].error.startswith("parse: ")

    def test_hidden_files_skipped(self, small_corpus_dir):
        """Dot files are not part of the corpus."""
        (small_corpus_dir / ".notes").write_text("0 1\n")
        assert [name for name, _ in corpus_files(str(small_corpus_dir))] == ["c5.txt", "p3.txt"]

    def test_missing_directory(self, tmp_path, bench_config):
        """A missing corpus is an input error."""
        with pytest.raises(InputError):
            run_bench(str(tmp_path / "nowhere"), bench_config)


class TestRenderCsv:
    """Tests for render_csv."""

    def test_empty_corpus_header_only(self, tmp_path, bench_config):
        """No files still produce the header."""
        assert render_csv(run_bench(str(tmp_path), bench_config)) == ",".join(BENCH_COLUMNS) + "\n"

    def test_row_cells(self, k2, bench_config):
        """Missing values render empty and booleans as true/false."""
        text = render_csv(bench_graph("k2", k2, bench_config))
        row = text.splitlines()[1].split(",")
        assert row[0] == "k2"
        assert row[BENCH_COLUMNS.index("k")] == ""
        assert row[BENCH_COLUMNS.index("verified")] == "false"
        assert row[BENCH_COLUMNS.index("error")] == "not-vdec"

    def test_commas_are_quoted(self):
        """Cells holding commas survive a CSV round trip."""
        row = BenchRow(name="a,b.txt", n=3, m=2, method="general",
                       error="ShiftFailed: pair (1, 2) has H-degrees 1 and 1")
        parsed = list(csv.reader(io.StringIO(render_csv([row]))))
        assert parsed[0] == BENCH_COLUMNS
        assert parsed[1][0] == "a,b.txt"
        assert parsed[1][BENCH_COLUMNS.index("error")] == row.error
