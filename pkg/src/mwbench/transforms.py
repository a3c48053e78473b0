"""Cleaning, uniformization, and conversions between the two NROBP models.

In-degree counts in-edges, except that parallel edges from one tail carrying
literals of one variable (an ``x``/``not x`` bundle) count once.  This is what
lets the gap chains built by :func:`eliminate_irregular_edge` stay clean.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .bp import (
    Edge, Nrobp, StructureError, TraditionalNrobp, check_uniform, is_read_once, ivars, validate_structure,
)

log = logging.getLogger(__name__)

IRRELEVANT, REGULAR, IRREGULAR = "irrelevant", "regular", "irregular"


def indegree(z: Nrobp, v: int) -> int:
    keys = set()
    count = 0
    for i in z.in_edges[v]:
        e = z.edges[i]
        if e.label is None:
            count += 1
        elif (e.tail, e.label[0]) not in keys:
            keys.add((e.tail, e.label[0]))
            count += 1
    return count


def ivar(z: Nrobp, v: int) -> frozenset:
    return ivars(z)[v]


def is_clean(z: Nrobp) -> bool:
    return not _violating_edges(z)


def _violating_edges(z: Nrobp) -> list[int]:
    deg = [indegree(z, v) for v in range(z.num_nodes)]
    return [i for i, e in enumerate(z.edges) if e.label is not None and deg[e.head] > 1]


def make_clean(z: Nrobp) -> Nrobp:
    """Subdivide every labelled edge entering a node of in-degree > 1; the
    literal moves to the first half."""
    bad = set(_violating_edges(z))
    if not bad:
        return z
    n = z.num_nodes
    edges = []
    prov = dict(z.provenance)
    for i, e in enumerate(z.edges):
        if i in bad:
            edges.append(Edge(e.tail, n, e.label))
            edges.append(Edge(n, e.head, None))
            prov[n] = ("clean", e.tail, e.head, i)
            n += 1
        else:
            edges.append(e)
    return Nrobp(n, tuple(edges), z.root, z.leaf, z.num_vars, prov)


def classify_edges(z: Nrobp) -> list[str]:
    if not is_clean(z):
        raise StructureError("edge classification needs a clean program")
    iv = ivars(z)
    out = []
    for e in z.edges:
        if indegree(z, e.head) <= 1:
            out.append(IRRELEVANT)
        elif iv[e.tail] < iv[e.head]:
            out.append(IRREGULAR)
        else:
            out.append(REGULAR)
    return out


def irregular_edges(z: Nrobp) -> list[int]:
    """Irregular edge indices in elimination order: (tail, head, index)."""
    cls = classify_edges(z)
    idx = [i for i, c in enumerate(cls) if c == IRREGULAR]
    return sorted(idx, key=lambda i: (z.edges[i].tail, z.edges[i].head, i))


def eliminate_irregular_edge(z: Nrobp, edge_index: int) -> Nrobp:
    """Replace irregular (u, v) by a chain through the missing variables.

    Each gap variable gets an ``x``/``not x`` pair of parallel edges, taken in
    ascending variable order; the chain ends with an unlabelled edge into v.
    """
    if classify_edges(z)[edge_index] != IRREGULAR:
        raise StructureError(f"edge {edge_index} is not irregular")
    iv = ivars(z)
    e = z.edges[edge_index]
    gap = sorted(iv[e.head] - iv[e.tail])
    edges = [f for i, f in enumerate(z.edges) if i != edge_index]
    prov = dict(z.provenance)
    n = z.num_nodes
    prev = e.tail
    for x in gap:
        edges.append(Edge(prev, n, (x, True)))
        edges.append(Edge(prev, n, (x, False)))
        prov[n] = ("gap", e.tail, e.head, x)
        prev = n
        n += 1
    edges.append(Edge(prev, e.head, None))
    return Nrobp(n, tuple(edges), z.root, z.leaf, z.num_vars, prov)


@dataclass
class UniformizeTrace:
    cleaned_edges: int = 0
    initial_irregular: int = 0
    padded_vars: tuple = ()
    steps: list = field(default_factory=list)  # (tail, head, edges added)

    def edge_bound(self, num_vars: int) -> int:
        """Edge count the output may not exceed."""
        return self.cleaned_edges + 2 * self.initial_irregular * num_vars + 2 * len(self.padded_vars)


def uniformize(z: Nrobp, trace: UniformizeTrace | None = None) -> Nrobp:
    """Uniform read-once program computing the same function as ``z``.

    Already uniform input is returned as is.  Otherwise cleans first, then
    eliminates irregular edges one at a time.  Variables no edge mentions are
    finally added through a chain in front of a new leaf.
    """
    validate_structure(z)
    trace = trace if trace is not None else UniformizeTrace()
    if check_uniform(z) and is_read_once(z):
        trace.cleaned_edges = len(z.edges)
        return z
    z = make_clean(z)
    trace.cleaned_edges = len(z.edges)
    todo = irregular_edges(z)
    trace.initial_irregular = len(todo)
    while todo:
        i = todo[0]
        e = z.edges[i]
        before = len(z.edges)
        z = eliminate_irregular_edge(z, i)
        trace.steps.append((e.tail, e.head, len(z.edges) - before))
        log.debug("eliminated irregular edge %d->%d, +%d edges", e.tail, e.head, len(z.edges) - before)
        nxt = irregular_edges(z)
        if len(nxt) >= len(todo):
            raise AssertionError("irregular edge count did not decrease")
        todo = nxt
    missing = sorted(set(range(z.num_vars)) - ivars(z)[z.leaf])
    if missing:
        trace.padded_vars = tuple(missing)
        edges = list(z.edges)
        prov = dict(z.provenance)
        n = z.num_nodes
        prev = z.leaf
        for x in missing:
            edges.append(Edge(prev, n, (x, True)))
            edges.append(Edge(prev, n, (x, False)))
            prov[n] = ("pad", x)
            prev = n
            n += 1
        z = Nrobp(n, tuple(edges), z.root, prev, z.num_vars, prov)
    return z


def to_traditional(z: Nrobp) -> TraditionalNrobp:
    """Subdivide each labelled edge (u, v) by a node w testing its variable.

    The edge w->v carries the literal's value and a new edge from w to the
    false leaf carries the opposite value.  Unlabelled edges are kept and
    their tails become guessing nodes.
    """
    n = z.num_nodes
    false_leaf = n
    n += 1
    node_var = [None] * n
    edges = []
    for e in z.edges:
        if e.label is None:
            edges.append((e.tail, e.head, None))
            continue
        x, sign = e.label
        w = n
        n += 1
        node_var.append(x)
        edges.append((e.tail, w, None))
        edges.append((w, e.head, sign))
        edges.append((w, false_leaf, not sign))
    return TraditionalNrobp(n, tuple(node_var), tuple(edges), z.root, z.leaf, false_leaf, z.num_vars)


class ConstantFalseError(ValueError):
    pass


def to_arosrn(t: TraditionalNrobp) -> Nrobp:
    """Drop the false leaf and every node that cannot reach the true leaf, then
    move each node's test onto its out-edges as literals."""
    outs = [[] for _ in range(t.num_nodes)]
    ins = [[] for _ in range(t.num_nodes)]
    for i, (a, b, _) in enumerate(t.edges):
        outs[a].append(i)
        ins[b].append(i)

    def closure(start, adj, end_of):
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for i in adj[v]:
                w = end_of(t.edges[i])
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    useful = closure(t.true_leaf, ins, lambda e: e[0])
    if t.root not in useful:
        raise ConstantFalseError("program computes constant false")
    keep = useful & closure(t.root, outs, lambda e: e[1])
    keep.discard(t.false_leaf)
    ids = {v: i for i, v in enumerate(sorted(keep))}
    edges = []
    for a, b, lit in t.literal_edges():
        if a in ids and b in ids:
            edges.append(Edge(ids[a], ids[b], lit))
    return Nrobp(len(ids), tuple(edges), ids[t.root], ids[t.true_leaf], t.num_vars)
