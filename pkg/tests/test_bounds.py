import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from mwbench.bounds import (
    RNG_ALGORITHM, CertificateError, CoverFamily, NoCoverError, at_least, certificate_from_nrobp,
    containment_bound, estimate_containment_prob, exact_containment_prob, f_const, greedy_independent_subset,
    independent_product_prob, is_t_cover, min_t_cover_size, nrobp_size_lower_bound, ratio_crossover,
    sample_out, separation_report, separation_row, size_lower_bound,
)
from mwbench.bp import build_frontier_obdd
from mwbench.family import complete_graph, cycle_graph, family_graph, mw_lower_bound_formula, path_graph
from mwbench.graphs import Graph, SizeLimitError, enumerate_minimal_vcs, is_vertex_cover, max_degree
from mwbench.verify import graph_catalog


def test_f_const_values():
    assert f_const(1) == pytest.approx(2.0, abs=1e-12)
    # independent evaluation: 6 / -log2(31/32) and 3 / -log2(3/4)
    assert f_const(5) == pytest.approx(6 / -math.log2(31 / 32), rel=1e-12)
    assert abs(f_const(5) - 131.0) <= 0.5
    assert f_const(2) == pytest.approx(7.2283, abs=1e-4)
    with pytest.raises(ValueError):
        f_const(0)


def test_f_identity():
    for x in range(1, 10):
        assert 2 ** (-1 / f_const(x)) == pytest.approx((1 - 2 ** -x) ** (1 / (x + 1)), rel=1e-12)


def test_is_t_cover_examples():
    k2 = complete_graph(2)
    assert is_t_cover(CoverFamily(({0}, {1}), 1), k2, 1)
    assert not is_t_cover(CoverFamily(({0},), 1), k2, 1)
    assert is_t_cover(CoverFamily((set(),), 0), cycle_graph(5), 0)
    with pytest.raises(ValueError):
        CoverFamily(({0},), 2)


def brute_min_cover(g, t):
    mvcs = enumerate_minimal_vcs(g)
    cands = [frozenset(c) for c in combinations(range(g.vertex_count), t)]
    for size in range(1, len(cands) + 1):
        for fam in combinations(cands, size):
            if all(any(a <= s for a in fam) for s in mvcs):
                return size
    return None


def test_min_t_cover_examples():
    assert min_t_cover_size(complete_graph(2), 1) == 2
    assert min_t_cover_size(complete_graph(3), 1) == 2
    # {v0} is itself a vertex cover of K_2, so no family of 2-sets covers VC(K_2)
    with pytest.raises(NoCoverError):
        min_t_cover_size(complete_graph(2), 2)
    assert min_t_cover_size(cycle_graph(4), 2) == 2
    with pytest.raises(NoCoverError):
        min_t_cover_size(complete_graph(3), 3)
    with pytest.raises(SizeLimitError):
        min_t_cover_size(cycle_graph(11), 1)
    with pytest.raises(SizeLimitError):
        min_t_cover_size(cycle_graph(6), 5)


def test_min_t_cover_against_brute_force():
    for g in graph_catalog(5, min_n=2):
        smallest = min(len(s) for s in enumerate_minimal_vcs(g))
        for t in range(1, min(2, smallest) + 1):
            assert min_t_cover_size(g, t) == brute_min_cover(g, t)


def test_cover_size_bound_small_catalog():
    for g in graph_catalog(5, min_n=2):
        x = max_degree(g)
        smallest = min(len(s) for s in enumerate_minimal_vcs(g))
        for t in range(1, min(3, smallest) + 1):
            assert at_least(min_t_cover_size(g, t), size_lower_bound(t, x))


def test_sample_out():
    assert sample_out(Graph.from_edges(3, []), 0).endpoints == frozenset()
    g = cycle_graph(7)
    for seed in range(50):
        s = sample_out(g, seed)
        assert all(v in e for v, e in zip(s.chosen, g.sorted_edges()))
        assert is_vertex_cover(g, s.endpoints)
    k2 = complete_graph(2)
    outcomes = {sample_out(k2, seed).chosen for seed in range(1000)}
    assert outcomes == {(0,), (1,)}
    assert sample_out(g, 3) == sample_out(g, 3)
    assert RNG_ALGORITHM == "numpy.random.PCG64"


def test_containment_examples():
    e = estimate_containment_prob(cycle_graph(5), [], 100, 0)
    assert (e.estimate, e.bound) == (1.0, 1.0)
    e = estimate_containment_prob(complete_graph(2), [0], 100_000, 1)
    assert e.estimate == pytest.approx(0.5, abs=0.01)
    assert e.bound == pytest.approx(math.sqrt(0.5))
    e = estimate_containment_prob(path_graph(3), [0, 2], 100_000, 2)
    assert e.estimate == pytest.approx(0.25, abs=0.01)
    assert e.bound == pytest.approx(0.75 ** (2 / 3))
    assert e.estimate <= e.bound and e.all_vertex_covers
    assert exact_containment_prob(complete_graph(2), [0]) == Fraction(1, 2)
    assert exact_containment_prob(path_graph(3), [0, 2]) == Fraction(1, 4)
    with pytest.raises(ValueError):
        estimate_containment_prob(complete_graph(2), [0], 0, 0)


def test_containment_deterministic():
    a = estimate_containment_prob(cycle_graph(6), [0, 3], 5000, 42)
    b = estimate_containment_prob(cycle_graph(6), [0, 3], 5000, 42)
    assert a == b


def test_independent_step_exact():
    rng = random.Random(6)
    for _ in range(40):
        n = rng.randint(2, 8)
        g = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4])
        s = [v for v in range(n) if rng.random() < 0.6]
        ind = greedy_independent_subset(g, s)
        assert all(not g.has_edge(u, v) for u, v in combinations(ind, 2))
        assert len(ind) * (max_degree(g) + 1) >= len(s)
        expect = Fraction(1)
        for u in ind:
            expect *= 1 - Fraction(1, 2 ** g.degree(u))
        assert exact_containment_prob(g, ind) == expect == independent_product_prob(g, ind)
        # the claim itself, exactly
        assert float(exact_containment_prob(g, s)) <= containment_bound(g, len(s)) * (1 + 1e-9)


def test_nrobp_size_lower_bound():
    assert nrobp_size_lower_bound(complete_graph(2), 0) == 1
    assert nrobp_size_lower_bound(complete_graph(2), 1) == pytest.approx(math.sqrt(2))
    fam = family_graph(7, 3)
    mw = mw_lower_bound_formula(fam.p, fam.r)
    assert nrobp_size_lower_bound(fam.graph, mw) == pytest.approx(2 ** (float(mw) / f_const(5)))
    with pytest.raises(ValueError):
        nrobp_size_lower_bound(complete_graph(2), -1)


def test_certificate_examples():
    k4 = complete_graph(4)
    z = build_frontier_obdd(k4, range(4))
    c = certificate_from_nrobp(z, k4, 2)
    assert c.meets_bound and len(c.family.sets) >= 2 ** (2 / f_const(3))
    assert len(set(c.source)) == len(c.source) and len(c.source) <= z.num_nodes
    assert all(any(s <= m for s in c.family.sets) for m in enumerate_minimal_vcs(k4))
    rec = c.as_record()
    assert rec["t"] == 2 and rec["size"] == len(c.family.sets)
    c0 = certificate_from_nrobp(z, k4, 0)
    assert c0.family.sets == (frozenset(),)
    k2 = complete_graph(2)
    with pytest.raises(CertificateError):
        certificate_from_nrobp(build_frontier_obdd(k2, [0, 1]), k2, 2)


def test_separation_rows():
    r1 = separation_row(1)
    assert r1["n"] == 6 and r1["ddnnf_ub"] == 2 ** 4 * 6
    r3 = separation_row(3)
    assert r3["n"] == 90 and r3["mw_bound"] == "3"
    assert r3["log2_nrobp_lb"] == pytest.approx(3 / f_const(5))
    assert r3["ratio"] == pytest.approx(2 ** (3 / f_const(5)) / (16 ** 3 * 90))
    assert not r3["regime_flags"]["k_ge_50"]
    big = separation_row(2000)
    assert big["ddnnf_ub"] == 2 ** 8000 * (2 ** 2001 - 1) * 4000
    assert math.isinf(big["ratio"]) or big["ratio"] > 0
    assert [row["r"] for row in separation_report([2, 5])] == [2, 5]
    with pytest.raises(ValueError):
        separation_row(0)


def test_ratio_crossover_small_window():
    # within 1..40 the ratio keeps falling, so the only suffix is the last row
    assert ratio_crossover(40) == 40
