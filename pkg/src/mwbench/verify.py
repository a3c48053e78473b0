"""Property suites run by ``mwbench verify``.

Each check yields ``Check`` records; a failing record carries the witness
that broke the property.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations

import networkx as nx

from . import bounds, bp, family, graphs, mw, transforms
from .graphs import Graph


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    cases: int = 0
    witness: object = None
    notes: dict = field(default_factory=dict)

    def as_record(self) -> dict:
        rec = {"suite": self.suite, "check": self.name, "passed": self.passed, "cases": self.cases}
        if self.witness is not None:
            rec["witness"] = repr(self.witness)
        rec.update(self.notes)
        return rec


def from_nx(h) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return Graph.from_edges(len(idx), [(idx[a], idx[b]) for a, b in h.edges()])


def graph_catalog(max_n: int = 7, connected: bool = True, min_n: int = 1) -> list[Graph]:
    """Every graph with min_n..max_n vertices up to isomorphism (max_n <= 7)."""
    if max_n > 7:
        raise ValueError("the bundled atlas stops at 7 vertices")
    out = []
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if n < min_n or n > max_n:
            continue
        if connected and (n == 0 or not nx.is_connected(h)):
            continue
        out.append(from_nx(h))
    return out


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def brute_force_mw(g: Graph) -> int:
    """Minimum over all orderings; cut values from networkx bipartite matching."""
    cache = {}

    def cut(prefix):
        key = frozenset(prefix)
        if key not in cache:
            b = nx.Graph()
            b.add_nodes_from(range(g.vertex_count))
            b.add_edges_from((u, v) for u, v in g.edges if (u in key) != (v in key))
            cache[key] = len(nx.max_weight_matching(b, maxcardinality=True))
        return cache[key]

    best = None
    for perm in permutations(range(g.vertex_count)):
        w = max(cut(perm[:i]) for i in range(g.vertex_count + 1))
        best = w if best is None else min(best, w)
    return best or 0


def _first_failure(suite, name, items, pred):
    count = 0
    for item in items:
        count += 1
        if not pred(item):
            return Check(suite, name, False, count, item)
    return Check(suite, name, True, count)


def suite_graph(seed: int, n_max: int = 8):
    rng = random.Random(seed)
    gs = [g for g in (random_graph(rng, rng.randint(2, n_max)) for _ in range(30)) if not g.isolated_vertices()]

    def vc_iff_sat(g):
        f = graphs.phi(g)
        for mask in range(1 << g.vertex_count):
            a = graphs.LiteralSet.from_positives(g.vertex_count, [v for v in g.vertices if mask >> v & 1])
            if graphs.satisfies(f, a) != graphs.is_vertex_cover(g, a.positives()):
                return False
        return True

    yield _first_failure("graph", "satisfying assignments are vertex covers", gs, vc_iff_sat)

    def symmetry(g):
        s = {v for v in g.vertices if rng.random() < 0.5}
        a, m = graphs.max_cut_matching(g, s)
        b, _ = graphs.max_cut_matching(g, set(g.vertices) - s)
        return a == b == len(m) and m.is_valid_for(g, s)

    yield _first_failure("graph", "cut matching symmetric with valid witness", gs, symmetry)


def suite_mw(seed: int, n_max: int = 6):
    rng = random.Random(seed)
    gs = graph_catalog(min(n_max, 6))
    yield _first_failure("mw", "exact DP equals permutation brute force", gs,
                         lambda g: mw.exact_mw(g).width == brute_force_mw(g))

    def monotone(g):
        non = [(u, v) for u in g.vertices for v in range(u + 1, g.vertex_count) if not g.has_edge(u, v)]
        if not non:
            return True
        h = Graph.from_edges(g.vertex_count, list(g.edges) + [rng.choice(non)])
        return mw.exact_mw(h).width >= mw.exact_mw(g).width

    yield _first_failure("mw", "adding an edge never lowers mw", gs, monotone)
    k2 = family.complete_graph(2)
    ws = [mw.exact_mw(family.tree_product(family.complete_binary_tree(r), k2).graph).width for r in range(3)]
    yield Check("mw", "mw(T_r(K2)) non-decreasing in r", ws == sorted(ws), 3, None if ws == sorted(ws) else ws)


def suite_family(seed: int, r_max: int = 3):
    rng = random.Random(seed)
    cases = [(k, r) for k in (3, 5, 7, 9, 11) for r in range(1, r_max + 1)]

    def valid(kr):
        fam = family.family_graph(*kr)
        td = family.canonical_tree_decomposition(fam.product.tree, fam.product.template)
        n_ok = fam.graph.vertex_count == (2 ** (fam.r + 1) - 1) * (fam.k - fam.y + 1) // 2
        return family.validate_td(fam.graph, td) == 2 * fam.q - 1 <= fam.k and graphs.max_degree(fam.graph) <= 5 and n_ok

    yield _first_failure("family", "canonical decomposition, degree, size", cases, valid)

    prods = [family.tree_product(family.complete_binary_tree(r), family.path_graph(q)) for r in (1, 2) for q in (2, 3, 4)]

    def copy_matching(prod):
        for _ in range(20):
            side = {v: rng.random() < 0.5 for v in prod.graph.vertices}
            c1, c2 = rng.sample(range(prod.tree.graph.vertex_count), 2)
            labels = [u for u in range(prod.h) if side[prod.vertex(c1, u)] != side[prod.vertex(c2, u)]]
            m = family.crossing_matching_between_copies(prod, side, c1, c2, labels)
            s1 = {v for v in prod.graph.vertices if side[v]}
            if len(m) != len(labels) or not m.is_valid_for(prod.graph, s1):
                return False
        return True

    yield _first_failure("family", "constructive crossing matching between copies", prods, copy_matching)

    product_cases = [(family.complete_graph(2), 1, 0), (family.complete_graph(2), 1, 1),
              (family.complete_graph(2), 1, 2), (family.path_graph(4), 2, 1)]
    yield _first_failure(
        "family", "exact mw meets (r+1-ceil log p)p/2", product_cases,
        lambda c: mw.exact_mw(family.tree_product(family.complete_binary_tree(c[2]), c[0]).graph).width
        >= family.mw_lower_bound_formula(c[1], c[2]))


def _bp_graphs():
    return [family.complete_graph(4), family.cycle_graph(6), family.path_graph(3),
            family.tree_product(family.complete_binary_tree(1), family.complete_graph(2)).graph]


def suite_bp(seed: int):
    def obdd_props(g):
        z = bp.build_frontier_obdd(g, range(g.vertex_count))
        if not (bp.is_read_once(z) and bp.check_uniform(z) and bp.equivalent_to_cnf(z, graphs.phi(g))):
            return False
        w = mw.exact_mw(g).width
        return all(bp.is_root_leaf_cut(z, [v for v, _ in bp.t_nodes(z, t)]) for t in range(1, w + 1))

    yield _first_failure("bp", "frontier OBDD: read-once, uniform, correct, t-node cuts", _bp_graphs(), obdd_props)


def suite_transforms(seed: int, programs: int = 40, max_vars: int = 12):
    rng = random.Random(seed)
    zs = [transforms.make_clean(bp.random_nrobp(rng, rng.randint(1, max_vars), rng.randint(2, 30)))
          for _ in range(programs)]

    def uni(z):
        tr = transforms.UniformizeTrace()
        u = transforms.uniformize(z, tr)
        return (bp.check_uniform(u) and bp.is_read_once(u) and bp.equivalent(u, z)
                and len(u.edges) - len(z.edges) <= 2 * tr.initial_irregular * z.num_vars)

    yield _first_failure("transforms", "uniformize: uniform, read-once, equivalent, <= 2qn edges", zs, uni)

    def roundtrip(z):
        t = transforms.to_traditional(z)
        return len(t.edges) <= 3 * len(z.edges) and bp.equivalent(transforms.to_arosrn(t), z)

    yield _first_failure("transforms", "traditional round trip", zs, roundtrip)


def suite_bounds(seed: int, max_n: int = 5, trials: int = 20_000):
    gs = [g for g in graph_catalog(max_n) if g.vertex_count >= 2]

    def cover_bound(g):
        x = graphs.max_degree(g)
        smallest = min(len(s) for s in graphs.enumerate_minimal_vcs(g))
        return all(bounds.at_least(bounds.min_t_cover_size(g, t), bounds.size_lower_bound(t, x))
                   for t in range(1, min(3, smallest) + 1))

    yield _first_failure("bounds", "min t-cover >= 2^(t/f(x))", gs, cover_bound)

    def mc(g):
        s = list(range(0, g.vertex_count, 2))
        est = bounds.estimate_containment_prob(g, s, trials, seed)
        return est.all_vertex_covers and est.estimate <= est.bound + 4 * est.stderr

    yield _first_failure("bounds", "random endpoints: covers and containment bound", gs[:20], mc)

    def cert(g):
        z = bp.build_frontier_obdd(g, range(g.vertex_count))
        w = mw.exact_mw(g).width
        c = bounds.certificate_from_nrobp(z, g, w)
        return len(set(c.source)) == len(c.source) <= z.num_nodes
    yield _first_failure("bounds", "certificate at t = mw is a valid t-cover", gs, cert)


SUITES = {
    "graph": suite_graph,
    "mw": suite_mw,
    "family": suite_family,
    "bp": suite_bp,
    "transforms": suite_transforms,
    "bounds": suite_bounds,
}


def run(names, seed: int):
    for name in names:
        yield from SUITES[name](seed)
