import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geocore.generators import connected_gnp, random_outerplanar
from geocore.graph import Graph
from geocore.opclosure import build_bb_tree
from geocore.oracles import (
    _Addability,
    _apex_planar,
    is_outerplanar_oracle,
    maximality_deficit,
    side_structure_violations,
)
from geocore.sampler import OuterplanarGraph, sample_outerplanar


def nxg(g):
    return Graph.from_edges(g.number_of_nodes(), list(g.edges()))


def test_oracle_examples():
    assert is_outerplanar_oracle(nxg(nx.cycle_graph(5)))
    assert not is_outerplanar_oracle(nxg(nx.complete_graph(4)))
    assert not is_outerplanar_oracle(nxg(nx.complete_bipartite_graph(2, 3)))


def test_oracle_minor_only_examples():
    # subdivided K4 and K2,3 are still not outerplanar
    k4 = nx.complete_graph(4)
    k4.remove_edge(0, 1)
    k4.add_edges_from([(0, 4), (4, 1)])
    assert not is_outerplanar_oracle(nxg(k4))
    assert is_outerplanar_oracle(nxg(nx.ladder_graph(4)))


def test_oracle_size_limit():
    with pytest.raises(ValueError):
        is_outerplanar_oracle(nxg(nx.path_graph(41)))
    assert is_outerplanar_oracle(nxg(nx.path_graph(41)), max_n=50)


def test_maximality_examples():
    c4 = nxg(nx.cycle_graph(4))
    assert maximality_deficit(c4, c4) == (0, 100.0)
    tree = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    missing, rel = maximality_deficit(c4, tree)
    assert missing == 1 and rel == pytest.approx(75.0)


def test_maximality_rejects_non_subgraph():
    with pytest.raises(ValueError):
        maximality_deficit(nxg(nx.path_graph(4)), nxg(nx.cycle_graph(4)))


def test_maximality_k4_sample_is_maximal():
    k4 = nxg(nx.complete_graph(4))
    assert maximality_deficit(k4, sample_outerplanar(k4, 0)) == (0, 100.0)


@given(st.integers(3, 22), st.integers(0, 2**32))
def test_fast_addability_matches_planarity_oracle(n, seed):
    g = connected_gnp(n, 0.3, seed)
    op = sample_outerplanar(g, seed)
    test = _Addability(build_bb_tree(op))
    cur = op.graph.edges().tolist()
    for a, b in g.edges().tolist():
        if not op.graph.has_edge(a, b):
            assert test.addable(a, b) == _apex_planar(g.n, cur + [[a, b]])


@given(st.integers(3, 26), st.integers(0, 2**32))
def test_deficit_matches_oracle_only_greedy(n, seed):
    g = connected_gnp(n, 0.3, seed)
    op = sample_outerplanar(g, seed)
    cur = op.graph.edges().tolist()
    missing = 0
    for a, b in g.edges().tolist():
        if not op.graph.has_edge(a, b) and _apex_planar(g.n, cur + [[a, b]]):
            cur.append([a, b])
            missing += 1
    got, rel = maximality_deficit(g, op)
    assert got == missing
    assert rel == pytest.approx(100.0 * op.m / (op.m + missing))


def test_side_structure_detects_interleaving():
    g = connected_gnp(12, 0.5, 3)
    op = sample_outerplanar(g, 3)
    assert side_structure_violations(op) == []
    if len(op.left) and len(op.right):
        # moving every right edge to the left must create a conflict somewhere
        bad = OuterplanarGraph(op.graph, op.root, op.parent,
                               np.concatenate([op.left, op.right]), op.right[:0], op.state)
        assert side_structure_violations(bad)


def test_side_structure_needs_state():
    t = random_outerplanar(5, 1)
    op = OuterplanarGraph(t, 0, np.full(5, -1), np.zeros((0, 2), int), np.zeros((0, 2), int))
    with pytest.raises(ValueError):
        side_structure_violations(op)
