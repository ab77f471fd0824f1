"""Pattern graph parsing, constructors, and labeling enumeration."""

import random

import pytest

from critdens.errors import (
    DisconnectedGraph,
    ParseError,
    ValidationError,
    VertexNotInGraph,
)
from critdens.graphs import (
    PatternGraph,
    bow_tie_graph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    is_proper_labeling,
    is_subgraph,
    parse_graph,
    path_graph,
    proper_labelings,
    star_graph,
)


def test_parse_round_trip():
    H = parse_graph("3; 1-2 2-3")
    assert H.n == 3
    assert H.edges == ((1, 2), (2, 3))
    assert parse_graph(H.to_text()) == H


def test_parse_normalizes_edge_order():
    H = parse_graph("4; 3-1 4-2 2-1")
    assert H.edges == ((1, 2), (1, 3), (2, 4))


def test_parse_multiline():
    assert parse_graph("4;\n1-2 2-3\n3-4\n") == path_graph(4)


@pytest.mark.parametrize("text, fragment", [
    ("", "vertex count"),
    ("x; 1-2", "vertex count"),
    ("3 1-2", "missing ';'"),
    ("3; 1-2 2", "edge"),
    ("3; 1-2 2-x", "edge"),
])
def test_parse_syntax_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_graph(text)
    assert fragment in str(err.value)


@pytest.mark.parametrize("text, fragment", [
    ("3; 1-4", "range"),
    ("3; 0-2", "range"),
    ("3; 2-2", "loop"),
    ("3; 1-2 2-1", "duplicate"),
    ("0;", ">= 1"),
])
def test_parse_content_errors(text, fragment):
    with pytest.raises(ValidationError) as err:
        parse_graph(text)
    assert fragment in str(err.value)


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as err:
        parse_graph("4;\n1-2\n2-x\n")
    assert "line 3" in str(err.value)


def test_constructors():
    assert path_graph(4).edges == ((1, 2), (2, 3), (3, 4))
    assert cycle_graph(4).edges == ((1, 2), (1, 4), (2, 3), (3, 4))
    assert star_graph(4).edges == ((1, 2), (1, 3), (1, 4))
    assert complete_graph(3).edges == ((1, 2), (1, 3), (2, 3))
    assert complete_bipartite(2, 2).edges == ((1, 3), (1, 4), (2, 3), (2, 4))
    assert bow_tie_graph().edges == (
        (1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (4, 5))


def test_degrees_and_neighbors():
    H = bow_tie_graph()
    assert H.degree(1) == 4
    assert H.degree(2) == 2
    assert H.max_degree() == 4
    assert H.neighbors(2) == (1, 3)
    assert H.has_edge(4, 5) and H.has_edge(5, 4)
    assert not H.has_edge(2, 4)
    with pytest.raises(VertexNotInGraph):
        H.degree(6)


def test_tree_and_connectivity_predicates():
    assert path_graph(5).is_tree()
    assert star_graph(6).is_tree()
    assert not cycle_graph(4).is_tree()
    assert not PatternGraph(4, ((1, 2), (3, 4))).is_tree()
    assert cycle_graph(4).is_connected()
    assert not PatternGraph(3, ((1, 2),)).is_connected()
    assert PatternGraph(1, ()).is_connected()


def test_is_subgraph():
    assert is_subgraph(path_graph(3), complete_graph(3), (1, 2, 3))
    assert is_subgraph(star_graph(4), bow_tie_graph(), {1: 1, 2: 2, 3: 4, 4: 5})
    assert not is_subgraph(complete_graph(3), star_graph(4), (2, 1, 3))
    assert not is_subgraph(path_graph(3), complete_graph(3), (1, 1, 2))
    with pytest.raises(VertexNotInGraph):
        is_subgraph(path_graph(3), complete_graph(3), {1: 1, 2: 2})


def test_proper_labelings_triangle():
    assert sorted(proper_labelings(complete_graph(3))) == [
        (1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)]


def test_proper_labelings_path():
    # each prefix of the ordering must induce a connected subgraph
    assert sorted(proper_labelings(path_graph(3))) == [
        (1, 2, 3), (2, 1, 3), (2, 3, 1), (3, 2, 1)]


def test_proper_labelings_star_count():
    # start at the center (3! tails) or at a leaf forced through it
    labelings = list(proper_labelings(star_graph(4)))
    assert len(labelings) == 12
    assert all(is_proper_labeling(star_graph(4), f) for f in labelings)


def test_proper_labelings_match_brute_force():
    from itertools import permutations

    rng = random.Random(411)
    for _ in range(40):
        n = rng.randint(2, 6)
        edges = {(i + 1, rng.randint(1, i)) for i in range(1, n)}
        T = PatternGraph(n, tuple(sorted((min(e), max(e)) for e in edges)))
        expected = [
            f for f in permutations(T.vertices())
            if all(any(T.has_edge(f[j], f[k]) for j in range(k))
                   for k in range(1, n))
        ]
        assert list(proper_labelings(T)) == expected
        assert all(is_proper_labeling(T, f) for f in expected)


def test_proper_labelings_need_connectivity():
    with pytest.raises(DisconnectedGraph):
        next(proper_labelings(PatternGraph(3, ((1, 2),))))


def test_is_proper_labeling_rejects_non_bijection():
    assert not is_proper_labeling(path_graph(3), (1, 2, 2))
    assert not is_proper_labeling(path_graph(3), (1, 2))
    assert not is_proper_labeling(path_graph(3), (1, 3, 2))
    assert is_proper_labeling(path_graph(3), (2, 1, 3))
