"""Tests for the implicit Sierpinski graph: adjacency, neighborhoods, distances and exports."""

import json
import itertools

import networkx as nx
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from src.graph import (
    CapacityError,
    GraphParams,
    InvalidParamsError,
    InvalidWordError,
    are_adjacent,
    bridge_neighbor,
    closed_neighborhood,
    degree,
    distance,
    edge_count,
    edges,
    format_word,
    is_extreme,
    iter_words,
    neighbor_indices,
    neighbors,
    parse_word,
    to_dot,
    to_edgelist,
    to_json,
    to_json_dict,
    to_networkx,
    word_from_index,
    word_index,
)

PROPERTY_SETTINGS = settings(
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

SMALL_GRID = [(n, t) for n in range(2, 5) for t in range(1, 4)]


@st.composite
def graph_and_word(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    t = draw(st.integers(min_value=1, max_value=6))
    word = tuple(draw(st.lists(st.integers(min_value=1, max_value=n), min_size=t, max_size=t)))
    return GraphParams(n, t), word


class TestGraphParams:
    @pytest.mark.parametrize("n,t", [(1, 3), (0, 1), (2, 0), (3, -1)])
    def test_rejects_invalid_parameters(self, n, t):
        with pytest.raises(InvalidParamsError):
            GraphParams(n, t)

    def test_vertex_count_must_fit_64_bits(self):
        assert GraphParams(2, 63).vertex_count == 2 ** 63
        with pytest.raises(CapacityError):
            GraphParams(2, 64)

    @pytest.mark.parametrize("n,t", [(3, 10 ** 9), (2, 10 ** 12), (10 ** 30, 1), (3, 41)])
    def test_huge_instances_are_refused(self, n, t):
        with pytest.raises(CapacityError):
            GraphParams(n, t)

    def test_largest_fitting_power_of_three(self):
        assert GraphParams(3, 40).vertex_count == 3 ** 40

    def test_require_within_cap(self):
        g = GraphParams(10, 7)
        g.require_within(10 ** 7)
        with pytest.raises(CapacityError, match="vertex cap"):
            g.require_within(10 ** 6, "distance")

    @pytest.mark.parametrize("word", [(1, 2), (1, 2, 4), (0, 1, 1), (1, 2, 3, 1)])
    def test_validate_word_rejects_bad_words(self, word):
        with pytest.raises(InvalidWordError):
            GraphParams(3, 3).validate_word(word)


class TestWords:
    def test_format_and_parse(self):
        assert format_word((1, 2, 2)) == "1.2.2"
        assert parse_word("1.2.2") == (1, 2, 2)
        assert parse_word("10.1", GraphParams(10, 2)) == (10, 1)

    @pytest.mark.parametrize("text", ["1.x.2", "", "1..2"])
    def test_parse_rejects_garbage(self, text):
        with pytest.raises(InvalidWordError):
            parse_word(text)

    def test_parse_validates_against_graph(self):
        with pytest.raises(InvalidWordError):
            parse_word("1.4", GraphParams(3, 2))

    def test_extreme_vertices(self):
        assert is_extreme((2, 2, 2))
        assert not is_extreme((2, 2, 1))

    @pytest.mark.parametrize("word,expected", [
        ((1, 2, 2), (2, 1, 1)),
        ((1, 1, 2), (1, 2, 1)),
        ((2, 1, 1, 1), (1, 2, 2, 2)),
        ((3, 3), None),
    ])
    def test_bridge_neighbor(self, word, expected):
        assert bridge_neighbor(word) == expected

    @PROPERTY_SETTINGS
    @given(graph_and_word())
    def test_index_packing_is_lexicographic(self, gw):
        g, word = gw
        index = word_index(g, word)
        assert 0 <= index < g.vertex_count
        assert word_from_index(g, index) == word

    def test_iter_words_matches_index_order(self):
        g = GraphParams(3, 3)
        assert [word_index(g, w) for w in iter_words(g)] == list(range(27))


class TestAdjacency:
    @pytest.mark.parametrize("n,t,u,v,expected", [
        (3, 2, (1, 2), (2, 1), True),
        (3, 2, (1, 1), (1, 2), True),
        (3, 2, (1, 2), (2, 3), False),
        (2, 3, (1, 2, 2), (2, 1, 1), True),
    ])
    def test_examples(self, n, t, u, v, expected):
        assert are_adjacent(GraphParams(n, t), u, v) is expected

    def test_length_mismatch_is_invalid(self):
        with pytest.raises(InvalidWordError):
            are_adjacent(GraphParams(3, 2), (1, 2), (1, 2, 1))

    @pytest.mark.parametrize("n,t", SMALL_GRID)
    def test_symmetric_and_irreflexive(self, n, t):
        g = GraphParams(n, t)
        for u, v in itertools.product(iter_words(g), repeat=2):
            assert are_adjacent(g, u, v) == are_adjacent(g, v, u)
        assert not any(are_adjacent(g, v, v) for v in iter_words(g))

    @pytest.mark.parametrize("n,t", SMALL_GRID)
    def test_degree_law(self, n, t):
        g = GraphParams(n, t)
        for v in iter_words(g):
            expected = n - 1 if is_extreme(v) else n
            assert degree(g, v) == expected
            assert len(neighbors(g, v)) == expected

    @pytest.mark.parametrize("n,t", [(n, t) for n in range(2, 4) for t in range(1, 4)])
    def test_direct_neighbors_match_brute_force(self, n, t):
        g = GraphParams(n, t)
        for v in iter_words(g):
            assert neighbors(g, v) == [u for u in iter_words(g) if are_adjacent(g, v, u)]

    @pytest.mark.parametrize("n,t", SMALL_GRID)
    def test_matches_recursive_construction(self, n, t, reference_graph):
        g = GraphParams(n, t)
        expected = {frozenset(e) for e in reference_graph(n, t).edges}
        assert {frozenset(e) for e in edges(g)} == expected

    @PROPERTY_SETTINGS
    @given(graph_and_word())
    def test_every_neighbor_is_adjacent_and_indices_agree(self, gw):
        g, word = gw
        found = neighbors(g, word)
        assert all(are_adjacent(g, word, u) for u in found)
        assert sorted(neighbor_indices(g, word_index(g, word))) == [word_index(g, u) for u in found]


class TestNeighborhoods:
    @pytest.mark.parametrize("n,t,v,expected", [
        (3, 1, (1,), [(2,), (3,)]),
        (2, 2, (1, 2), [(1, 1), (2, 1)]),
        (3, 2, (1, 2), [(1, 1), (1, 3), (2, 1)]),
    ])
    def test_neighbors(self, n, t, v, expected):
        assert neighbors(GraphParams(n, t), v) == expected

    @pytest.mark.parametrize("n,t,v,expected", [
        (2, 1, (1,), [(1,), (2,)]),
        (3, 1, (2,), [(1,), (2,), (3,)]),
        (2, 2, (1, 1), [(1, 1), (1, 2)]),
    ])
    def test_closed_neighborhood(self, n, t, v, expected):
        assert closed_neighborhood(GraphParams(n, t), v) == expected

    def test_invalid_word(self):
        with pytest.raises(InvalidWordError):
            neighbors(GraphParams(3, 2), (1, 5))


class TestDistance:
    def test_path_endpoints(self):
        assert distance(GraphParams(2, 2), (1, 1), (2, 2)) == 3

    def test_same_vertex(self):
        assert distance(GraphParams(4, 3), (1, 2, 3), (1, 2, 3)) == 0

    def test_complete_graph(self):
        g = GraphParams(5, 1)
        for u, v in itertools.permutations(iter_words(g), 2):
            assert distance(g, u, v) == 1

    @pytest.mark.parametrize("n,t", [(2, 3), (3, 2), (3, 3), (4, 2)])
    def test_agrees_with_networkx(self, n, t, reference_graph):
        g = GraphParams(n, t)
        lengths = dict(nx.all_pairs_shortest_path_length(reference_graph(n, t)))
        for u, v in itertools.combinations(iter_words(g), 2):
            assert distance(g, u, v) == lengths[u][v]

    def test_refuses_beyond_cap(self):
        g = GraphParams(10, 7)
        with pytest.raises(CapacityError):
            distance(g, g.ones(), (2,) * 7)


class TestEdges:
    @pytest.mark.parametrize("n,t,expected", [(2, 2, 3), (3, 1, 3), (3, 2, 12)])
    def test_edge_count_examples(self, n, t, expected):
        assert edge_count(GraphParams(n, t)) == expected

    @pytest.mark.parametrize("n,t", SMALL_GRID)
    def test_edge_count_matches_enumeration(self, n, t):
        g = GraphParams(n, t)
        assert edge_count(g) == sum(1 for _ in edges(g))

    @pytest.mark.parametrize("t", range(1, 7))
    def test_base_two_is_a_path(self, t):
        graph = to_networkx(GraphParams(2, t))
        degrees = sorted(d for _, d in graph.degree())
        assert nx.is_connected(graph)
        if t == 1:
            assert degrees == [1, 1]
        else:
            assert degrees[:2] == [1, 1] and set(degrees[2:]) == {2}


class TestExports:
    def test_edgelist_of_path(self):
        assert to_edgelist(GraphParams(2, 2)) == "1.1 1.2\n1.2 2.1\n2.1 2.2\n"

    def test_dot_is_undirected(self):
        text = to_dot(GraphParams(3, 1))
        assert "digraph" not in text
        assert text.count("--") == 3

    def test_json_layout(self):
        data = to_json_dict(GraphParams(2, 2))
        assert data["n"] == 2 and data["t"] == 2
        assert data["vertices"] == ["1.1", "1.2", "2.1", "2.2"]
        assert data["edges"] == [["1.1", "1.2"], ["1.2", "2.1"], ["2.1", "2.2"]]
        assert json.loads(to_json(GraphParams(2, 2))) == data

    def test_networkx_node_names(self):
        graph = to_networkx(GraphParams(3, 2))
        assert graph.number_of_nodes() == 9
        assert graph.number_of_edges() == 12
        assert graph.has_edge("1.2", "2.1")

    def test_exports_respect_cap(self):
        with pytest.raises(CapacityError):
            to_edgelist(GraphParams(3, 5), vertex_cap=100)
