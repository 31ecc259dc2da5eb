import networkx as nx
from hypothesis import given, settings
from hypothesis import strategies as st

from omegasucc import graphs

edge_lists = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20))
)


def _succ(n, edges):
    out = {v: [] for v in range(n)}
    for a, b in edges:
        out[a].append(b)
    return lambda v: out[v]


@settings(max_examples=200)
@given(edge_lists)
def test_tarjan_matches_networkx(data):
    n, edges = data
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    ours = {frozenset(c) for c in graphs.tarjan_scc(range(n), _succ(n, edges))}
    assert ours == {frozenset(c) for c in nx.strongly_connected_components(g)}


@settings(max_examples=200)
@given(edge_lists)
def test_tarjan_order_is_reverse_topological(data):
    n, edges = data
    comps = graphs.tarjan_scc(range(n), _succ(n, edges))
    pos = {v: i for i, c in enumerate(comps) for v in c}
    assert all(pos[b] <= pos[a] for a, b in edges)


@settings(max_examples=200)
@given(edge_lists)
def test_reachable_matches_networkx(data):
    n, edges = data
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    assert graphs.reachable([0], _succ(n, edges)) == nx.descendants(g, 0) | {0}


def test_bfs_path_prefers_length_lex_least():
    edges = {0: [("b", 1), ("a", 2)], 1: [("a", 3)], 2: [("b", 3)], 3: []}
    labels, verts = graphs.bfs_path([0], lambda v: edges[v], lambda v: v == 3)
    # both paths have length 2; the edge order makes "ba" come first
    assert labels == ["b", "a"] and verts == [0, 1, 3]


def test_bfs_path_min_length_forces_a_step():
    edges = {0: [("x", 1)], 1: [("y", 0)]}
    assert graphs.bfs_path([0], lambda v: edges[v], lambda v: v == 0) == ([], [0])
    assert graphs.bfs_path([0], lambda v: edges[v], lambda v: v == 0, min_length=1) == (["x", "y"], [0, 1, 0])


def test_bfs_path_none_when_unreachable():
    assert graphs.bfs_path([0], lambda v: [], lambda v: v == 1) is None


def test_is_nontrivial():
    assert graphs.is_nontrivial([0], lambda v: [0])
    assert not graphs.is_nontrivial([0], lambda v: [])
    assert graphs.is_nontrivial([0, 1], lambda v: [1 - v])
