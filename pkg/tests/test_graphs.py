import random

import pytest
from hypothesis import given, settings, strategies as st

from mwbench.family import complete_graph, cycle_graph, path_graph
from mwbench.graphs import (
    CnfFormula, Graph, IsolatedVertexError, LiteralSet, PartialAssignmentError, cut_matching_size,
    enumerate_minimal_vcs, is_vertex_cover, max_cut_matching, max_degree, phi, primal_graph, satisfies,
)
from oracles import brute_matching, vertex_covers


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def test_graph_basics():
    g = Graph.from_edges(4, [(1, 0), (1, 2)])
    assert g.sorted_edges() == [(0, 1), (1, 2)]
    assert g.neighbors(1) == {0, 2}
    assert g.degree(3) == 0 and g.isolated_vertices() == [3]
    assert not g.is_connected()
    assert max_degree(complete_graph(5)) == 4
    assert max_degree(path_graph(4)) == 2


def test_graph_rejects_loops_and_range():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 2)])


def test_phi_clauses_and_primal():
    f = phi(complete_graph(3))
    assert f.variable_count == 3
    assert sorted(f.clauses) == [((0, True), (1, True)), ((0, True), (2, True)), ((1, True), (2, True))]
    assert primal_graph(f).edges == complete_graph(3).edges


def test_phi_rejects_isolated():
    with pytest.raises(IsolatedVertexError):
        phi(Graph.from_edges(3, [(0, 1)]))


def test_satisfies_examples():
    f = phi(complete_graph(2))
    assert satisfies(f, {0: True, 1: False})
    assert not satisfies(f, {0: False, 1: False})
    assert satisfies(phi(complete_graph(3)), LiteralSet.from_positives(3, [0, 1]))
    with pytest.raises(PartialAssignmentError):
        satisfies(f, {0: True})


def test_is_vertex_cover_examples():
    assert is_vertex_cover(complete_graph(3), {0, 1})
    assert not is_vertex_cover(complete_graph(3), {0})
    assert is_vertex_cover(Graph.from_edges(2, []), set())


def test_minimal_vcs_small():
    assert sorted(map(sorted, enumerate_minimal_vcs(path_graph(3)))) == [[0, 2], [1]]
    assert sorted(map(sorted, enumerate_minimal_vcs(complete_graph(3)))) == [[0, 1], [0, 2], [1, 2]]
    # C_4: {0,2} and {1,3}
    assert sorted(map(sorted, enumerate_minimal_vcs(cycle_graph(4)))) == [[0, 2], [1, 3]]


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_minimal_vcs_match_brute_force(g):
    covers = vertex_covers(g.vertex_count, g.edges)
    minimal = {c for c in covers if not any(d < c for d in covers)}
    assert set(enumerate_minimal_vcs(g)) == minimal


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_vc_iff_satisfying(g):
    if g.isolated_vertices():
        return
    f = phi(g)
    for mask in range(1 << g.vertex_count):
        pos = [v for v in g.vertices if mask >> v & 1]
        assert satisfies(f, LiteralSet.from_positives(g.vertex_count, pos)) == is_vertex_cover(g, pos)


def test_max_cut_matching_examples():
    assert max_cut_matching(complete_graph(4), {0, 1})[0] == 2
    assert max_cut_matching(cycle_graph(4), {0, 1})[0] == 2
    assert max_cut_matching(complete_graph(5), set())[0] == 0


@settings(max_examples=80, deadline=None)
@given(graphs(), st.data())
def test_max_cut_matching_against_brute_force(g, data):
    s1 = set(data.draw(st.lists(st.integers(0, g.vertex_count - 1), unique=True)))
    size, m = max_cut_matching(g, s1)
    assert size == brute_matching(g.edges, s1) == len(m)
    assert m.is_valid_for(g, s1)
    assert max_cut_matching(g, set(g.vertices) - s1)[0] == size
    mask = sum(1 << v for v in s1)
    assert cut_matching_size(g.adjacency_masks(), mask) == size


def test_cut_matching_cap():
    adj = complete_graph(8).adjacency_masks()
    assert cut_matching_size(adj, 0b1111, cap=2) == 2
    assert cut_matching_size(adj, 0b1111) == 4


def test_matching_witness_is_deterministic():
    g = cycle_graph(6)
    assert max_cut_matching(g, {0, 1, 2}) == max_cut_matching(g, {2, 1, 0})


def test_literal_set_helpers():
    a = LiteralSet.from_literals([(0, True), (1, False)])
    assert a.positives() == {0}
    assert a.contains((1, False)) and not a.contains((1, True))
    with pytest.raises(ValueError):
        LiteralSet.from_literals([(0, True), (0, False)])


def test_cnf_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula(1, (((1, True),),))


def test_random_symmetry_many():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(2, 9)
        g = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4])
        s = {v for v in range(n) if rng.random() < 0.5}
        assert max_cut_matching(g, s)[0] == max_cut_matching(g, set(range(n)) - s)[0]
