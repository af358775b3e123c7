import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixcascade.graph import (
    GraphError,
    build_network,
    degree_assortativity,
    degree_stats,
    is_connected,
    largest_component,
    read_edge_list,
    validate_network,
    write_edge_list,
)


def star(n_leaves=4):
    return build_network([(0, i) for i in range(1, n_leaves + 1)], n_leaves + 1)


def test_path_graph_degrees():
    net = build_network([(0, 1), (1, 2)], 3)
    assert net.degrees.tolist() == [1, 2, 1]
    assert net.edge_count == 2
    validate_network(net)


def test_empty_graph():
    net = build_network([], 4)
    assert net.edge_count == 0
    assert net.degrees.tolist() == [0, 0, 0, 0]
    assert degree_stats(net).assortativity is None


@pytest.mark.parametrize(
    "edges, n, fragment",
    [
        ([(0, 1), (0, 1)], 2, "duplicate"),
        ([(0, 1), (1, 0)], 2, "duplicate"),
        ([(0, 0)], 2, "self-loop"),
        ([(0, 5)], 3, "outside"),
        ([(-1, 0)], 3, "outside"),
    ],
)
def test_build_rejects_bad_edges(edges, n, fragment):
    with pytest.raises(GraphError, match=fragment) as exc:
        build_network(edges, n)
    # the offending pair is named
    i, j = edges[-1]
    assert f"({i}, {j})" in str(exc.value)


def test_star_stats():
    s = degree_stats(star())
    assert s.mean_degree == pytest.approx(1.6)
    assert s.distribution == {1: pytest.approx(0.8), 4: pytest.approx(0.2)}
    assert s.degree_variance == pytest.approx(0.8 * 1 + 0.2 * 16 - 1.6**2)


def test_cycle_assortativity_undefined():
    net = build_network([(i, (i + 1) % 6) for i in range(6)], 6)
    assert degree_stats(net).assortativity is None


def test_path_assortativity_brute_force():
    # directed endpoint pairs of 0-1-2: (1,2),(2,1),(2,1),(1,2)
    x = np.array([1, 2, 2, 1], float)
    y = np.array([2, 1, 1, 2], float)
    expected = np.corrcoef(x, y)[0, 1]
    assert expected == pytest.approx(-1.0)
    assert degree_assortativity(build_network([(0, 1), (1, 2)], 3)) == pytest.approx(expected)


def test_assortativity_matches_networkx():
    g = nx.barabasi_albert_graph(300, 2, seed=4)
    net = build_network(list(g.edges()), 300)
    assert degree_assortativity(net) == pytest.approx(nx.degree_assortativity_coefficient(g), abs=1e-12)


def test_connectivity_examples():
    assert is_connected(build_network([(0, 1), (1, 2)], 3))
    two = build_network([(2, 3), (0, 1)], 4)
    assert not is_connected(two)
    assert largest_component(two) == {0, 1}
    plus_isolated = build_network([(0, i) for i in range(1, 5)], 6)
    assert len(largest_component(plus_isolated)) == 5


def test_edge_list_round_trip(tmp_path):
    net = build_network([(0, 3), (1, 2), (2, 3)], 5)
    path = tmp_path / "g.edges"
    write_edge_list(net, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# Z=5"
    assert lines[1] == "0\t3"
    assert read_edge_list(path) == net


def test_read_edge_list_requires_header(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("0\t1\n")
    with pytest.raises(GraphError, match="header"):
        read_edge_list(path)


@st.composite
def random_graphs(draw):
    n = draw(st.integers(1, 12))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, chosen


@settings(max_examples=200, deadline=None)
@given(random_graphs())
def test_invariants_and_component_agreement(graph):
    n, edges = graph
    net = build_network(edges, n)
    validate_network(net)
    assert int(net.degrees.sum()) == 2 * net.edge_count
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    assert is_connected(net) == nx.is_connected(g)
    assert (largest_component(net) == set(range(n))) == is_connected(net)
    biggest = max(len(c) for c in nx.connected_components(g))
    assert len(largest_component(net)) == biggest
    # purity
    assert degree_stats(net) == degree_stats(net)
