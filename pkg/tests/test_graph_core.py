"""
Graph Core Tests

Tests for graph construction, edge-list I/O, k(G) and contraction.
"""

import networkx as nx
import pytest

from vdec.services.errors import InputError
from vdec.services.generators import cycle, path, random_regular, star
from vdec.services.graph_core import (
    Graph,
    GraphParseError,
    NotVdecError,
    PartitionError,
    components,
    contract_components,
    degree_profile,
    induced_subgraph,
    is_connected,
    is_regular,
    is_vdec,
    k_lower_bound,
    load_graph,
    read_graph,
    remove_edges,
    save_graph,
)

from .conftest import small_corpus


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from(g.edges)
    return h


class TestGraph:
    """Tests for the Graph type."""

    def test_adjacency_is_sorted_and_symmetric(self):
        """Neighbor lists should be sorted and mirror the edge set."""
        g = Graph(4, [(3, 0), (0, 1), (2, 0)])
        assert g.adjacency[0] == (1, 2, 3)
        assert all(0 in g.adjacency[v] for v in (1, 2, 3))
        assert g.edges == ((0, 1), (0, 2), (0, 3))

    def test_loop_rejected(self):
        """Loops should raise ValueError."""
        with pytest.raises(ValueError):
            Graph(2, [(1, 1)])

    def test_parallel_edge_rejected(self):
        """A repeated edge in either orientation should raise ValueError."""
        with pytest.raises(ValueError):
            Graph(2, [(0, 1), (1, 0)])

    def test_out_of_range_rejected(self):
        """Endpoints must be valid vertex ids."""
        with pytest.raises(ValueError):
            Graph(2, [(0, 2)])

    def test_degrees(self, p3):
        """Degree statistics of P3."""
        assert [p3.degree(v) for v in p3.vertices()] == [1, 2, 1]
        assert p3.max_degree == 2
        assert p3.min_degree == 1


class TestLoadGraph:
    """Tests for load_graph and save_graph."""

    def test_edge_list(self):
        """Two edges give P3."""
        g = load_graph("0 1\n1 2")
        assert g.n == 3
        assert g.m == 2
        assert g.labels == ("0", "1", "2")

    def test_loop_is_parse_error(self):
        """A loop line should name its line number."""
        with pytest.raises(GraphParseError) as info:
            load_graph("0 0")
        assert info.value.line == 1

    def test_duplicate_edge_is_parse_error(self):
        """A duplicate edge after a comment should be reported on line 3."""
        with pytest.raises(GraphParseError) as info:
            load_graph("# c\n0 1\n0 1")
        assert info.value.line == 3

    def test_three_tokens_rejected(self):
        """Lines must hold one or two tokens."""
        with pytest.raises(GraphParseError):
            load_graph("a b c")

    def test_header_declares_isolated_vertices(self):
        """A vertices header should create isolated vertices."""
        g = load_graph("vertices: 4\n0 1\n1 2")
        assert g.n == 4
        assert g.degree(3) == 0

    def test_single_token_line_declares_vertex(self):
        """A lone label is an isolated vertex."""
        g = load_graph("x\na b\nb c")
        assert g.labels == ("x", "a", "b", "c")
        assert g.degree(0) == 0

    def test_bad_header(self):
        """A non-numeric vertex count is a parse error."""
        with pytest.raises(GraphParseError):
            load_graph("vertices: many")

    def test_comments_and_blank_lines(self):
        """Comments and blank lines are ignored."""
        g = load_graph("\n# header\n0 1  # trailing\n\n1 2\n")
        assert g.m == 2

    def test_round_trip_canonical(self):
        """load_graph(save_graph(g)) should equal g for generated graphs."""
        for g in (cycle(7), star(4), random_regular(12, 3, seed=5)):
            assert load_graph(save_graph(g)) == g

    def test_round_trip_keeps_labels(self):
        """Arbitrary labels survive a round trip."""
        g = load_graph("lonely\nu v\nv w")
        assert load_graph(save_graph(g)) == g

    def test_read_graph_missing_file(self, tmp_path):
        """A missing file should raise InputError."""
        with pytest.raises(InputError):
            read_graph(str(tmp_path / "missing.txt"))


class TestVdec:
    """Tests for is_vdec and k_lower_bound."""

    def test_p3_is_vdec(self, p3):
        """P3 has no isolated parts."""
        assert is_vdec(p3)

    def test_k2_is_not_vdec(self, k2):
        """K2 is an isolated edge."""
        assert not is_vdec(k2)

    def test_two_isolated_vertices(self):
        """Two isolated vertices plus a triangle are not vdec."""
        g = Graph(5, [(0, 1), (1, 2), (0, 2)])
        assert not is_vdec(g)

    def test_one_isolated_vertex_allowed(self):
        """A single isolated vertex is fine."""
        assert is_vdec(Graph(4, [(0, 1), (1, 2), (0, 2)]))

    def test_k_of_p3(self, p3):
        """C(2,1)=2 and C(2,2)=1 give k(P3)=2."""
        assert k_lower_bound(p3) == 2

    def test_k_of_c5(self, c5):
        """C(3,2)=3 < 5 <= C(4,2)=6 gives k(C5)=4."""
        assert k_lower_bound(c5) == 4

    def test_k_of_star(self):
        """K1,3 needs C(k,1) >= 3."""
        assert k_lower_bound(star(3)) == 3

    def test_k_rejects_non_vdec(self, k2):
        """k is undefined on non-vdec graphs."""
        with pytest.raises(NotVdecError):
            k_lower_bound(k2)

    def test_k_at_least_max_degree(self):
        """Δ <= k(G) on every corpus graph."""
        for g in small_corpus(30, seed=3):
            assert k_lower_bound(g) >= g.max_degree

    def test_k_of_regular_at_most_twice_degree(self):
        """d >= log2 n gives k(G) <= 2d."""
        g = random_regular(64, 6, seed=2)
        assert k_lower_bound(g) <= 12

    def test_k_monotone_in_class_size(self):
        """Adding a vertex to a degree class never lowers k."""
        assert k_lower_bound(cycle(6)) <= k_lower_bound(cycle(7))


class TestStructure:
    """Tests for components, profiles and subgraphs."""

    def test_components_match_networkx(self):
        """Component partition should agree with networkx."""
        for g in small_corpus(25, seed=11):
            ours = sorted(tuple(c) for c in components(g))
            theirs = sorted(tuple(sorted(c)) for c in nx.connected_components(to_nx(g)))
            assert ours == theirs
            assert is_connected(g) == nx.is_connected(to_nx(g))

    def test_components_of_p3_plus_k2(self):
        """P3 ∪ K2 has components of sizes 3 and 2."""
        g = Graph(5, [(0, 1), (1, 2), (3, 4)])
        assert [len(c) for c in components(g)] == [3, 2]

    def test_empty_graph_components(self):
        """Three isolated vertices are three singletons."""
        assert components(Graph(3, [])) == [[0], [1], [2]]

    def test_degree_profile_sums_to_n(self, petersen):
        """Σ n_d = n."""
        profile = degree_profile(petersen)
        assert profile.total == 10
        assert profile[3] == 10

    def test_is_regular(self, c5, p3):
        """Regular graphs report their degree."""
        assert is_regular(c5) == 2
        assert is_regular(p3) is None

    def test_induced_subgraph(self, c5):
        """Induced subgraph keeps labels and maps back."""
        sub, back = induced_subgraph(c5, [4, 0, 1])
        assert back == [0, 1, 4]
        assert sub.m == 2
        assert sub.labels == ("0", "1", "4")

    def test_remove_edges(self, c5):
        """Removing edges keeps every vertex."""
        h = remove_edges(c5, [(1, 0)])
        assert h.n == 5
        assert h.m == 4
        assert not h.has_edge(0, 1)


class TestContractComponents:
    """Tests for contract_components."""

    def test_star_center(self):
        """K1,3 around its center: three simple edges."""
        g = star(3)
        contracted, mapping = contract_components(g, [0], [[1], [2], [3]])
        assert contracted.vertex_count == 4
        assert contracted.edge_count == 3
        assert all(count == 1 for count in contracted.multiplicity.values())
        assert mapping == {0: 1, 1: 2, 2: 3}

    def test_c4_opposite_vertices(self):
        """C4 minus two opposite vertices: two W-vertices each joined to both."""
        g = cycle(4)
        contracted, _ = contract_components(g, [0, 2], [[1], [3]])
        assert contracted.edge_count == 4
        assert contracted.degree(2) == 2
        assert contracted.degree(3) == 2
        assert contracted.is_bipartite()

    def test_triangle_multiplicity(self):
        """Triangle minus one vertex: one W-vertex with multiplicity 2."""
        g = cycle(3)
        contracted, mapping = contract_components(g, [0], [[1, 2]])
        assert contracted.multiplicity == {(0, 1): 2}
        assert contracted.origin == (0, None)

    def test_multiplicities_sum_to_cut(self, petersen):
        """Σ multiplicity equals |E(S, V - S)|."""
        s = [0, 7]
        rest = [v for v in petersen.vertices() if v not in s]
        sub, back = induced_subgraph(petersen, rest)
        comps = [[back[v] for v in c] for c in components(sub)]
        contracted, _ = contract_components(petersen, s, comps)
        cut = sum(1 for u, v in petersen.edges if (u in s) != (v in s))
        assert contracted.edge_count == cut
        assert contracted.is_bipartite()

    def test_wrong_partition_rejected(self):
        """comps must be the components of g - s."""
        with pytest.raises(PartitionError):
            contract_components(path(4), [0], [[1], [2, 3]])
