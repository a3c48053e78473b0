import random
from fractions import Fraction

import pytest

from mwbench.family import (
    TreeDecomposition, TreeGraph, Violation, canonical_tree_decomposition, ceil_log2, complete_binary_tree,
    complete_graph, crossing_matching_between_copies, cycle_graph, family_graph, mw_lower_bound_formula,
    path_graph, tree_product, validate_td,
)
from mwbench.graphs import Graph, max_cut_matching, max_degree
from mwbench.mw import exact_mw


def test_complete_binary_tree_sizes():
    assert complete_binary_tree(0).graph.vertex_count == 1
    t2 = complete_binary_tree(2)
    assert (t2.graph.vertex_count, len(t2.graph.edges)) == (7, 6)
    t3 = complete_binary_tree(3)
    assert t3.graph.vertex_count == 15
    assert t3.root == 0 and t3.depth(0) == 0
    assert max(t3.depth(v) for v in t3.graph.vertices) == 3
    assert t3.graph.is_connected()


def test_tree_path():
    t = complete_binary_tree(2)
    p = t.path(3, 6)
    assert p[0] == 3 and p[-1] == 6 and len(p) == 5
    assert all(t.graph.has_edge(a, b) for a, b in zip(p, p[1:]))


def test_path_graph_examples():
    assert (path_graph(1).vertex_count, len(path_graph(1).edges)) == (1, 0)
    assert path_graph(2).edges == complete_graph(2).edges
    assert len(path_graph(3).edges) == 2


def test_tree_product_examples():
    prod = tree_product(complete_binary_tree(3), path_graph(3))
    assert prod.graph.vertex_count == 45
    t0 = tree_product(complete_binary_tree(0), cycle_graph(5))
    assert t0.graph.edges == cycle_graph(5).edges
    t1 = tree_product(complete_binary_tree(1), complete_graph(2))
    # three copy edges plus two tree edges per label
    assert (t1.graph.vertex_count, len(t1.graph.edges)) == (6, 3 + 2 * 2)


def test_tree_product_adjacency_rule():
    t = complete_binary_tree(2)
    h = path_graph(3)
    prod = tree_product(t, h)
    g = prod.graph
    for a in g.vertices:
        for b in g.vertices:
            if a >= b:
                continue
            ta, ha = prod.copy_of(a), prod.label_of(a)
            tb, hb = prod.copy_of(b), prod.label_of(b)
            expect = (ta == tb and h.has_edge(ha, hb)) or (ta != tb and ha == hb and t.graph.has_edge(ta, tb))
            assert g.has_edge(a, b) == expect
    assert prod.vertex(2, 1) == 2 * 3 + 1


@pytest.mark.parametrize("k,y,q", [(3, 0, 2), (7, 0, 4), (5, 2, 2), (4, 1, 2), (6, 3, 2), (11, 0, 6)])
def test_family_parameters(k, y, q):
    fam = family_graph(k, 1)
    assert (fam.y, fam.q, fam.p) == (y, q, q // 2)
    assert (k - y + 1) % 4 == 0


def test_family_rejects_small_k():
    with pytest.raises(ValueError):
        family_graph(2, 1)


def test_family_metadata():
    meta = family_graph(3, 2).metadata()
    assert meta["n"] == 14 and meta["k"] == 3 and meta["r"] == 2
    assert meta["regime_k_ge_50"] is False


def test_canonical_decomposition_examples():
    fam = family_graph(3, 2)
    td = canonical_tree_decomposition(fam.product.tree, fam.product.template)
    assert validate_td(fam.graph, td) == 3
    assert all(len(b) == 4 for x, b in enumerate(td.bags) if x != 0)
    t0 = tree_product(complete_binary_tree(0), cycle_graph(5))
    td0 = canonical_tree_decomposition(t0.tree, t0.template)
    assert td0.bags == (frozenset(range(5)),)
    fam7 = family_graph(7, 3)
    assert validate_td(fam7.graph, canonical_tree_decomposition(fam7.product.tree, fam7.product.template)) == 7


def test_validate_td_single_bag_and_violations():
    g = cycle_graph(5)
    single = TreeDecomposition(TreeGraph.from_parents([None]), (frozenset(range(5)),))
    assert validate_td(g, single) == 4
    tree = TreeGraph.from_parents([None, 0])
    bad = TreeDecomposition(tree, (frozenset({0, 1, 2}), frozenset({2, 3, 4})))
    v = validate_td(g, bad)
    assert isinstance(v, Violation) and v.rule == "containment" and v.witness == (0, 4)
    missing = TreeDecomposition(tree, (frozenset({0, 1}), frozenset({1, 2})))
    assert validate_td(path_graph(4), missing).rule == "union"
    path3 = TreeGraph.from_parents([None, 0, 1])
    split = TreeDecomposition(path3, (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})))
    assert validate_td(path_graph(3), split).rule == "connectedness"


def test_max_degree_family():
    # interior vertices of P_q need q >= 3 to reach degree 5; with q = 2 the maximum is 4
    for k in range(3, 13):
        fam = family_graph(k, 2)
        assert max_degree(fam.graph) == min(fam.q - 1, 2) + 3
    assert max_degree(family_graph(7, 2).graph) == 5


def test_family_vertex_count():
    for k in (3, 4, 5, 6, 7, 8):
        for r in range(0, 4):
            fam = family_graph(k, r)
            assert fam.graph.vertex_count == (2 ** (r + 1) - 1) * (k - fam.y + 1) // 2


def test_lower_bound_formula_examples():
    assert mw_lower_bound_formula(1, 1) == 1
    assert mw_lower_bound_formula(1, 3) == 2
    assert mw_lower_bound_formula(2, 1) == 1
    assert mw_lower_bound_formula(3, 2) == Fraction(3, 2)
    with pytest.raises(ValueError):
        mw_lower_bound_formula(4, 1)
    assert [ceil_log2(p) for p in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


@pytest.mark.parametrize("h,p,r", [(complete_graph(2), 1, 0), (complete_graph(2), 1, 1),
                                   (complete_graph(2), 1, 2), (path_graph(4), 2, 1)])
def test_product_bound_exact(h, p, r):
    g = tree_product(complete_binary_tree(r), h).graph
    assert exact_mw(g).width >= mw_lower_bound_formula(p, r)


def test_copy_crossing_matching():
    rng = random.Random(11)
    for r, q in [(1, 2), (2, 3), (2, 4), (3, 3)]:
        prod = tree_product(complete_binary_tree(r), path_graph(q))
        ncopies = prod.tree.graph.vertex_count
        for _ in range(30):
            side = {v: rng.random() < 0.5 for v in prod.graph.vertices}
            c1, c2 = rng.sample(range(ncopies), 2)
            labels = [u for u in range(q) if side[prod.vertex(c1, u)] != side[prod.vertex(c2, u)]]
            m = crossing_matching_between_copies(prod, side, c1, c2, labels)
            s1 = {v for v in prod.graph.vertices if side[v]}
            assert len(m) == len(labels)
            assert m.is_valid_for(prod.graph, s1)


def test_copy_crossing_rejects_unsplit_label():
    prod = tree_product(complete_binary_tree(1), path_graph(2))
    side = {v: True for v in prod.graph.vertices}
    with pytest.raises(ValueError):
        crossing_matching_between_copies(prod, side, 0, 1, [0])


def test_large_classes_cross_matching():
    # trees with >= p vertices, connected H with >= 2p vertices, both classes >= p^2
    rng = random.Random(5)
    for p, r, h in [(1, 1, path_graph(2)), (2, 1, path_graph(4)), (2, 2, cycle_graph(4)), (3, 2, path_graph(6))]:
        prod = tree_product(complete_binary_tree(r), h)
        n = prod.graph.vertex_count
        assert prod.tree.graph.vertex_count >= p and h.vertex_count >= 2 * p
        tried = 0
        while tried < 40:
            s1 = {v for v in range(n) if rng.random() < 0.5}
            if min(len(s1), n - len(s1)) < p * p:
                continue
            tried += 1
            assert max_cut_matching(prod.graph, s1)[0] >= p
