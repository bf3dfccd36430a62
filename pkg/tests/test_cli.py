"""
Command-Line Tests

End-to-end tests of the vdec subcommands through main().
"""

import json

import pytest

from vdec.cli import main
from vdec.config import get_settings
from vdec.schemas.coloring import ColoringDocument
from vdec.schemas.forest import ForestDocument
from vdec.schemas.trace import TraceDocument
from vdec.services.generators import cycle
from vdec.services.graph_core import Graph, load_graph, save_graph


@pytest.fixture
def c5_file(tmp_path):
    target = tmp_path / "c5.txt"
    target.write_text(save_graph(cycle(5)))
    return str(target)


@pytest.fixture
def fresh_settings():
    """Drop cached settings around tests that change VDEC_* variables."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def stderr_error(captured) -> dict:
    return json.loads(captured.err.strip().splitlines()[-1])


class TestKbound:
    """Tests for the kbound command."""

    def test_c5(self, c5_file, capsys):
        """C5 prints 4 and its single degree class."""
        assert main(["kbound", c5_file]) == 0
        assert capsys.readouterr().out.splitlines() == ["4", "2: 5"]

    def test_not_vdec(self, tmp_path, capsys):
        """K2 exits with the precondition code."""
        target = tmp_path / "k2.txt"
        target.write_text("0 1\n")
        assert main(["kbound", str(target)]) == 3
        error = stderr_error(capsys.readouterr())
        assert error["code"] == "precondition"
        assert error["exit_code"] == 3

    def test_parse_error(self, tmp_path, capsys):
        """A loop is an input error."""
        target = tmp_path / "loop.txt"
        target.write_text("0 0\n")
        assert main(["kbound", str(target)]) == 2
        assert stderr_error(capsys.readouterr())["code"] == "input"

    def test_missing_file(self, tmp_path):
        """A missing file is an input error."""
        assert main(["kbound", str(tmp_path / "none.txt")]) == 2


class TestGen:
    """Tests for the gen command."""

    def test_deterministic(self, tmp_path):
        """Equal seeds write identical files."""
        first, second = tmp_path / "a.txt", tmp_path / "b.txt"
        for target in (first, second):
            assert main(["gen", "gnp", "--n", "12", "--p", "0.4", "--seed", "3",
                         "--out", str(target)]) == 0
        assert first.read_text() == second.read_text()
        assert load_graph(first.read_text()).n == 12

    def test_infeasible_regular(self, capsys):
        """An odd degree sum is refused."""
        assert main(["gen", "regular", "--n", "5", "--d", "3"]) == 3
        assert stderr_error(capsys.readouterr())["code"] == "precondition"

    def test_stdout(self, capsys):
        """Without --out the graph goes to stdout."""
        assert main(["gen", "cycle", "--n", "4"]) == 0
        assert load_graph(capsys.readouterr().out) == cycle(4)

    def test_seed_from_environment(self, tmp_path, monkeypatch, fresh_settings):
        """VDEC_SEED stands in for a missing --seed."""
        monkeypatch.setenv("VDEC_SEED", "5")
        from_env, from_flag = tmp_path / "env.txt", tmp_path / "flag.txt"
        assert main(["gen", "tree", "--n", "15", "--out", str(from_env)]) == 0
        assert main(["gen", "tree", "--n", "15", "--seed", "5", "--out", str(from_flag)]) == 0
        assert from_env.read_text() == from_flag.read_text()


class TestColorAndVerify:
    """Tests for color and verify."""

    def test_color_c5(self, c5_file, tmp_path, capsys):
        """The coloring and trace are written and the summary printed."""
        out, trace = tmp_path / "c5.json", tmp_path / "c5.trace.json"
        assert main(["color", c5_file, "--out", str(out), "--trace", str(trace)]) == 0
        used, bound = capsys.readouterr().out.strip().split(" / ")
        assert int(bound) == 28
        assert int(used) <= 28
        document = ColoringDocument.model_validate_json(out.read_text())
        assert len(document.edges) == 5
        assert TraceDocument.model_validate_json(trace.read_text()).method == "general"

    def test_color_deterministic(self, c5_file, tmp_path):
        """Two runs with one seed write byte-identical colorings."""
        first, second = tmp_path / "1.json", tmp_path / "2.json"
        assert main(["color", c5_file, "--seed", "4", "--out", str(first)]) == 0
        assert main(["color", c5_file, "--seed", "4", "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_exact_method(self, c5_file, tmp_path, capsys):
        """The exact method stays within k(G) + 1 on C5."""
        out = tmp_path / "c5.json"
        assert main(["color", c5_file, "--method", "exact", "--out", str(out)]) == 0
        used, bound = capsys.readouterr().out.strip().split(" / ")
        assert int(bound) in (4, 5)

    def test_regular_refused(self, c5_file, capsys):
        """C5 is outside the regular method's hypotheses."""
        assert main(["color", c5_file, "--method", "regular"]) == 3

    def test_invalid_restarts(self, c5_file, capsys):
        """A zero restart budget is rejected as input."""
        assert main(["color", c5_file, "--restarts", "0"]) == 2

    def test_verify_round_trip(self, c5_file, tmp_path, capsys):
        """A written coloring verifies; a tampered one fails with exit 5."""
        out = tmp_path / "c5.json"
        assert main(["color", c5_file, "--out", str(out)]) == 0
        capsys.readouterr()
        assert main(["verify", c5_file, str(out)]) == 0
        assert json.loads(capsys.readouterr().out)["passed"] is True

        document = json.loads(out.read_text())
        for entry in document["edges"]:
            entry["color"] = 1
        out.write_text(json.dumps(document))
        assert main(["verify", c5_file, str(out)]) == 5
        captured = capsys.readouterr()
        report = json.loads(captured.out)
        assert report["passed"] is False
        assert captured.err == ""

    def test_verify_unknown_label(self, c5_file, tmp_path):
        """A coloring naming a missing vertex is an input error."""
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"palette": 2, "edges": [{"u": "0", "v": "9", "color": 1}]}))
        assert main(["verify", c5_file, str(bad)]) == 2

    def test_verify_bound(self, c5_file, tmp_path, capsys):
        """--bound tightens the palette check."""
        out = tmp_path / "c5.json"
        assert main(["color", c5_file, "--out", str(out)]) == 0
        assert main(["verify", c5_file, str(out), "--bound", "1"]) == 5


class TestForestAndSummary:
    """Tests for forest and summary."""

    def test_forest(self, c5_file, tmp_path):
        """C5 gives one path and no uncovered vertex."""
        out = tmp_path / "forest.json"
        assert main(["forest", c5_file, "--out", str(out)]) == 0
        document = ForestDocument.model_validate_json(out.read_text())
        assert len(document.paths) == 1
        assert document.uncovered == []

    def test_summary(self, tmp_path, capsys):
        """Summary reports size, degrees and k(G) with input labels."""
        target = tmp_path / "p3.txt"
        target.write_text(save_graph(Graph(3, [(0, 1), (1, 2)], labels=("x", "y", "z"))))
        assert main(["summary", str(target)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["n"] == 3
        assert summary["k"] == 2
        assert summary["labels"] == ["x", "y", "z"]

    def test_missing_command(self):
        """A subcommand is required."""
        with pytest.raises(SystemExit):
            main([])
