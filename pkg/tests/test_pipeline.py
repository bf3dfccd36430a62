"""
Pipeline Tests

Tests for the general, regular and exact coloring methods.
"""

import logging
from math import comb

import pytest

from vdec.schemas.run import RunConfig
from vdec.services import pipeline
from vdec.services.edge_coloring import (
    EdgeColoring,
    colliding_pairs,
    max_multiplicity,
    shift_colors,
)
from vdec.services.errors import PreconditionFailed
from vdec.services.generators import cycle, random_regular
from vdec.services.graph_core import Graph, NotVdecError, k_lower_bound
from vdec.services.oracle import verify_vd
from vdec.services.path_factor import LinearForest, SizeExceeded
from vdec.services.path_recolor import recolor_palette
from vdec.services.pipeline import (
    conflict_forbidden_sets,
    counting_room_exceeded,
    exact_vdec,
    general_bound,
    general_vdec,
    regular_bound,
    regular_hypotheses,
    regular_vdec,
    run_method,
    select_conflict_edges,
)

from .conftest import acceptance_corpus, small_corpus


def two_combs():
    """
    Paths 0-1-2 and 5-6-7 with pendants 3 (at 1) and 4 (at 6), colored so
    that the pendants, the path ends and the path middles collide pairwise.
    """
    g = Graph(8, [(0, 1), (1, 2), (1, 3), (5, 6), (6, 7), (4, 6)])
    forest = LinearForest(g, [(0, 1, 2), (5, 6, 7)])
    base = EdgeColoring(
        g, 3, {(0, 1): 1, (1, 2): 2, (1, 3): 3, (5, 6): 1, (6, 7): 2, (4, 6): 3}
    )
    return g, forest, base


class TestBounds:
    """Tests for the palette bounds."""

    def test_general_bound(self):
        """floor(5.5k + 6.5) in integers."""
        assert general_bound(2) == 17
        assert general_bound(4) == 28
        assert general_bound(5) == 34

    def test_general_bound_matches_palettes(self):
        """2(k+1) + floor(3.5(k+1) + 1) equals the bound."""
        for k_graph in range(1, 40):
            k = k_graph + 1
            assert 2 * k + recolor_palette(k) == general_bound(k_graph)

    def test_regular_bound(self):
        """k + 3."""
        assert regular_bound(12) == 15


class TestConflictEdges:
    """Tests for select_conflict_edges and conflict_forbidden_sets."""

    def test_spanning_forest_selects_nothing(self, c5):
        """No uncovered vertices means no pairs and no edges."""
        forest = LinearForest(c5, [(0, 1, 2, 3, 4)])
        base = EdgeColoring(c5, 4, {(0, 1): 1, (1, 2): 2, (2, 3): 3, (3, 4): 1, (0, 4): 4})
        assert max_multiplicity(base) == 2
        selection = select_conflict_edges(c5, forest, base)
        assert len(selection.pairs) == 0
        assert selection.edges == ()
        assert selection.h.m == 0

    def test_pendant_pair(self):
        """The lower pendant's edge into the forest is selected."""
        g, forest, base = two_combs()
        selection = select_conflict_edges(g, forest, base)
        assert list(selection.pairs) == [(3, 4)]
        assert selection.edges == ((1, 3),)
        assert selection.h.degree(3) == 1
        assert selection.h.degree(4) == 0

    def test_shift_separates_pair(self):
        """After the shift the pendants see {6} and {3}."""
        g, forest, base = two_combs()
        selection = select_conflict_edges(g, forest, base)
        shifted = shift_colors(base, selection.edges, 3)
        assert shifted.color(1, 3) == 6
        assert shifted.mask(3) != shifted.mask(4)

    def test_forbidden_sets(self):
        """Path ends with empty residual sets forbid the ends of other sets."""
        g, forest, base = two_combs()
        selection = select_conflict_edges(g, forest, base)
        shifted = shift_colors(base, selection.edges, 3)
        forb = conflict_forbidden_sets(g, forest, shifted)
        assert forb[0] == frozenset({2, 7})
        assert forb[5] == frozenset({2, 7})
        assert forb[1] == frozenset()
        assert forb[6] == frozenset()


class TestGeneral:
    """Tests for general_vdec."""

    def test_c5(self, c5):
        """C5: verified coloring within 28 colors."""
        result = general_vdec(c5)
        assert result.trace.bound == 28
        assert result.trace.k == 4
        assert result.trace.colors_used <= 28
        assert verify_vd(c5, result.coloring, 28).passed

    def test_p3(self, p3):
        """P3: bound 17."""
        result = general_vdec(p3)
        assert result.trace.bound == 17
        assert verify_vd(p3, result.coloring, 17).passed

    def test_not_vdec(self, k2):
        """K2 cannot be colored."""
        with pytest.raises(NotVdecError):
            general_vdec(k2)

    def test_stage_order_and_palettes(self, petersen):
        """Stages run in order over disjoint color ranges."""
        result = general_vdec(petersen)
        stages = {s.name: s for s in result.trace.stages}
        names = [s.name for s in result.trace.stages]
        assert names == ["forest", "base", "shift", "recolor", "verify"]
        k = k_lower_bound(petersen) + 1
        assert (stages["base"].palette_lo, stages["base"].palette_hi) == (1, k)
        assert (stages["shift"].palette_lo, stages["shift"].palette_hi) == (k + 1, 2 * k)
        assert stages["recolor"].palette_lo == 2 * k + 1
        assert stages["recolor"].palette_hi == general_bound(k - 1)

    def test_artifacts(self, petersen):
        """The base coloring is semi-vd and forest colors are fresh."""
        result = general_vdec(petersen, seed=3)
        assert max_multiplicity(result.artifacts["base"]) <= 2
        k = k_lower_bound(petersen) + 1
        for u, v in result.artifacts["forest"].edges():
            assert result.coloring.color(u, v) > 2 * k

    def test_stage_colors_disjoint(self):
        """Base, shifted and forest edges draw from disjoint color ranges."""
        for g in small_corpus(15, seed=37):
            result = general_vdec(g, seed=2)
            k = k_lower_bound(g) + 1
            forest_edges = set(result.artifacts["forest"].edges())
            shifted_edges = set(result.artifacts["selection"].edges)
            for edge, color in result.coloring.items():
                if edge in forest_edges:
                    assert 2 * k < color <= general_bound(k - 1)
                elif edge in shifted_edges:
                    assert k < color <= 2 * k
                else:
                    assert 1 <= color <= k
            spans = sorted(
                (s.palette_lo, s.palette_hi)
                for s in result.trace.stages
                if s.name in ("base", "shift", "recolor")
            )
            assert all(hi < lo for (_, hi), (lo, _) in zip(spans, spans[1:]))

    def test_forbidden_sets_within_capacity(self):
        """Each forest vertex has at most 2C(k, d_F) - 1 forbidden or paired partners."""
        for g in small_corpus(15, seed=37):
            result = general_vdec(g, seed=2)
            k = k_lower_bound(g) + 1
            forest = result.artifacts["forest"]
            forb = result.artifacts["forbidden"]
            pairs = colliding_pairs(result.artifacts["shifted"])
            for v in forest.covered:
                d = forest.degree(v)
                members = set(forb[v])
                assert all(forest.degree(u) == d for u in members)
                partner = pairs.partner(v)
                if partner in forest.covered and forest.degree(partner) == d:
                    members.add(partner)
                assert len(members) <= 2 * comb(k, d) - 1

    def test_seed_determinism(self, c5):
        """Equal seeds give byte-identical colorings."""
        first = general_vdec(c5, seed=9)
        second = general_vdec(c5, seed=9)
        assert dict(first.coloring.items()) == dict(second.coloring.items())

    def test_small_corpus(self):
        """Verified colorings within the bound on small graphs."""
        for g in small_corpus(15, seed=31):
            result = general_vdec(g, seed=1)
            assert result.trace.colors_used <= general_bound(k_lower_bound(g))
            assert verify_vd(g, result.coloring, result.trace.bound).passed

    @pytest.mark.slow
    def test_corpus_acceptance(self):
        """Every acceptance graph gets a verified coloring within floor(5.5k(G) + 6.5)."""
        graphs = acceptance_corpus()
        assert len(graphs) >= 200
        for g in graphs:
            result = general_vdec(g)
            assert result.trace.colors_used <= general_bound(k_lower_bound(g))
            assert verify_vd(g, result.coloring, general_bound(k_lower_bound(g))).passed


class TestRegular:
    """Tests for regular_hypotheses and regular_vdec."""

    def test_hypotheses_of_non_regular(self, p3):
        """A non-regular graph is refused first."""
        assert regular_hypotheses(p3) == ["graph is not regular"]

    def test_hypotheses_of_small_cycle(self):
        """C10 is too small and too sparse for its size."""
        violated = regular_hypotheses(cycle(10))
        assert violated[0].startswith("n >= 256")
        assert any(v.startswith("2^d >= n") for v in violated)

    def test_complete_graph_refused(self):
        """K9 violates n >= 256."""
        k9 = Graph(9, [(u, v) for u in range(9) for v in range(u + 1, 9)])
        with pytest.raises(PreconditionFailed) as info:
            regular_vdec(k9)
        assert "n >= 256" in str(info.value)

    def test_255_vertices_refused(self):
        """One vertex short of the size threshold."""
        g = random_regular(255, 8, seed=1)
        with pytest.raises(PreconditionFailed):
            regular_vdec(g)

    def test_not_vdec(self, k2):
        """K2 is rejected before the hypotheses."""
        with pytest.raises(NotVdecError):
            regular_vdec(k2)

    def test_hypotheses_hold(self):
        """An 8-regular graph on 256 vertices satisfies every inequality."""
        assert regular_hypotheses(random_regular(256, 8, seed=1)) == []

    def test_counting_room(self):
        """Spanning forests of 3 to 5 vertex paths fit; matchings and long paths do not."""
        assert not counting_room_exceeded(endpoints=170, interior=85, n=255)
        assert not counting_room_exceeded(endpoints=102, interior=153, n=255)
        assert counting_room_exceeded(endpoints=256, interior=0, n=256)
        assert counting_room_exceeded(endpoints=2, interior=254, n=256)

    @pytest.mark.slow
    def test_counting_room_warning(self, monkeypatch, caplog):
        """An overfull forest is reported at WARNING level."""
        monkeypatch.setattr(pipeline, "counting_room_exceeded", lambda *counts: True)
        with caplog.at_level(logging.WARNING, logger="vdec.services.pipeline"):
            regular_vdec(random_regular(256, 8, seed=1), seed=1)
        assert any("counting room" in r.message for r in caplog.records)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(1, 11))
    def test_eight_regular(self, seed):
        """At most k(G) + 3 colors on 8-regular graphs with 256 vertices."""
        g = random_regular(256, 8, seed=seed)
        result = regular_vdec(g, seed=seed)
        assert result.trace.bound == k_lower_bound(g) + 3
        assert verify_vd(g, result.coloring, result.trace.bound).passed
        assert [s.name for s in result.trace.stages] == ["forest", "base", "paths", "verify"]

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(1, 6))
    def test_ten_regular_large(self, seed):
        """At most k(G) + 3 colors on 10-regular graphs with 1024 vertices."""
        g = random_regular(1024, 10, seed=seed)
        assert regular_hypotheses(g) == []
        result = regular_vdec(g, seed=seed)
        assert result.trace.colors_used <= k_lower_bound(g) + 3
        assert verify_vd(g, result.coloring, result.trace.bound).passed


class TestExact:
    """Tests for exact_vdec and run_method."""

    def test_p3_optimum(self, p3):
        """P3 needs two colors."""
        result = exact_vdec(p3)
        assert result.trace.bound == 2
        assert result.trace.colors_used == 2

    def test_c5_optimum(self, c5):
        """C5 needs four or five colors."""
        result = exact_vdec(c5)
        assert result.trace.bound in (4, 5)
        assert verify_vd(c5, result.coloring, result.trace.bound).passed

    def test_size_limit(self):
        """Thirteen edges exceed the default limit."""
        with pytest.raises(SizeExceeded):
            exact_vdec(cycle(13))

    def test_run_method_dispatch(self, p3):
        """run_method follows config.method."""
        assert run_method(p3, RunConfig(command="color", method="exact")).trace.method == "exact"
        assert run_method(p3, RunConfig(command="color")).trace.method == "general"
