"""Complete binary trees, tree products T(H), and their tree decompositions.

Product vertices are numbered ``tree_vertex * |V(H)| + template_vertex``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2

from .graphs import Graph, Matching, _edge
from .graphs import max_degree  # noqa: F401  (re-exported)


@dataclass(frozen=True)
class TreeGraph:
    graph: Graph
    root: int
    parent: tuple  # parent[v], None for the root

    def __post_init__(self):
        g = self.graph
        if g.vertex_count and len(g.edges) != g.vertex_count - 1:
            raise ValueError("a tree on n vertices has n-1 edges")
        for v, p in enumerate(self.parent):
            if (p is None) != (v == self.root):
                raise ValueError("only the root lacks a parent")
            if p is not None and not g.has_edge(v, p):
                raise ValueError(f"parent edge {v}-{p} missing")
        if not g.is_connected():
            raise ValueError("tree is disconnected")

    @classmethod
    def from_parents(cls, parent) -> "TreeGraph":
        parent = tuple(parent)
        root = parent.index(None)
        edges = [(v, p) for v, p in enumerate(parent) if p is not None]
        return cls(Graph.from_edges(len(parent), edges), root, parent)

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
        return d

    def path(self, a: int, b: int) -> list[int]:
        """Vertices on the tree path from a to b."""
        up_a = [a]
        while self.parent[up_a[-1]] is not None:
            up_a.append(self.parent[up_a[-1]])
        pos = {v: i for i, v in enumerate(up_a)}
        up_b = [b]
        while up_b[-1] not in pos:
            up_b.append(self.parent[up_b[-1]])
        return up_a[: pos[up_b[-1]] + 1] + up_b[-2::-1]


def complete_binary_tree(r: int) -> TreeGraph:
    """Heap-numbered complete binary tree of height r (root 0, leaves at depth r)."""
    if r < 0:
        raise ValueError("height must be non-negative")
    n = 2 ** (r + 1) - 1
    return TreeGraph.from_parents([None] + [(v - 1) // 2 for v in range(1, n)])


def path_graph(q: int) -> Graph:
    if q < 1:
        raise ValueError("a path needs at least one vertex")
    return Graph.from_edges(q, [(i, i + 1) for i in range(q - 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


@dataclass(frozen=True)
class ProductGraph:
    graph: Graph
    tree: TreeGraph
    template: Graph

    @property
    def h(self) -> int:
        return self.template.vertex_count

    def copy_of(self, v: int) -> int:
        return v // self.h

    def label_of(self, v: int) -> int:
        return v % self.h

    def vertex(self, tree_vertex: int, label: int) -> int:
        return tree_vertex * self.h + label

    def copy(self, tree_vertex: int) -> list[int]:
        return [tree_vertex * self.h + i for i in range(self.h)]


def tree_product(t: TreeGraph, h: Graph) -> ProductGraph:
    k = h.vertex_count
    edges = []
    for x in t.graph.vertices:
        edges.extend((x * k + a, x * k + b) for a, b in h.edges)
    for x, y in t.graph.edges:
        edges.extend((x * k + a, y * k + a) for a in range(k))
    return ProductGraph(Graph.from_edges(t.graph.vertex_count * k, edges), t, h)


@dataclass(frozen=True)
class FamilyMember:
    product: ProductGraph
    k: int
    r: int
    y: int
    q: int
    p: int

    @property
    def graph(self) -> Graph:
        return self.product.graph

    def metadata(self) -> dict:
        n = self.graph.vertex_count
        return {
            "k": self.k, "y": self.y, "q": self.q, "p": self.p, "r": self.r, "n": n,
            "edges": len(self.graph.edges),
            # regime of the asymptotic bound with constant 32
            "regime_k_ge_50": self.k >= 50,
            "regime_r_ge_5ceillogk": self.r >= 5 * ceil(log2(self.k)),
        }


def family_graph(k: int, r: int) -> FamilyMember:
    """T_r(P_q) with q = (k - y + 1) / 2, y in 0..3 making k - y + 1 divisible by 4."""
    if k < 3:
        raise ValueError("treewidth target k must be at least 3")
    if r < 0:
        raise ValueError("height must be non-negative")
    y = (k + 1) % 4
    q = (k - y + 1) // 2
    return FamilyMember(tree_product(complete_binary_tree(r), path_graph(q)), k, r, y, q, q // 2)


@dataclass(frozen=True)
class TreeDecomposition:
    tree: TreeGraph
    bags: tuple  # bags[tree vertex] -> frozenset of graph vertices

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


def canonical_tree_decomposition(t: TreeGraph, h: Graph) -> TreeDecomposition:
    """Decomposition along t: each bag holds its copy of H plus the parent's copy."""
    k = h.vertex_count
    bags = []
    for x in t.graph.vertices:
        bag = set(range(x * k, (x + 1) * k))
        p = t.parent[x]
        if p is not None:
            bag.update(range(p * k, (p + 1) * k))
        bags.append(frozenset(bag))
    return TreeDecomposition(t, tuple(bags))


@dataclass(frozen=True)
class Violation:
    rule: str  # "union" | "containment" | "connectedness"
    witness: tuple

    def __str__(self):
        return f"{self.rule} violated: {self.witness}"


def validate_td(g: Graph, td: TreeDecomposition):
    """Width of ``td`` if it decomposes ``g``, else the first violated rule."""
    covered = set().union(*td.bags) if td.bags else set()
    for v in g.vertices:
        if v not in covered:
            return Violation("union", (v,))
    for u, v in g.sorted_edges():
        if not any(u in b and v in b for b in td.bags):
            return Violation("containment", (u, v))
    tg = td.tree.graph
    for v in g.vertices:
        holders = {x for x, b in enumerate(td.bags) if v in b}
        start = min(holders)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in tg.neighbors(x):
                if y in holders and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != holders:
            return Violation("connectedness", (v, tuple(sorted(holders))))
    return td.width


def ceil_log2(p: int) -> int:
    if p < 1:
        raise ValueError("p must be positive")
    return (p - 1).bit_length()


def mw_lower_bound_formula(p: int, r: int) -> Fraction:
    """(r + 1 - ceil(log2 p)) * p / 2, valid for r >= ceil(log2 p)."""
    c = ceil_log2(p)
    if r < c:
        raise ValueError(f"need r >= ceil(log2 p) = {c}")
    return Fraction((r + 1 - c) * p, 2)


def crossing_matching_between_copies(prod: ProductGraph, side, copy1: int, copy2: int, labels) -> Matching:
    """Constructive matching across a partition between two copies of H.

    ``side`` maps product vertices to a partition class.  For each label whose
    copies in ``copy1`` and ``copy2`` sit in different classes, walk the tree
    path between the copies and take the first consecutive pair of copies at
    which that label changes class.  Edges for distinct labels never share an
    end, so the result is a matching of size ``len(labels)``.
    """
    path = prod.tree.path(copy1, copy2)
    pairs = []
    for u in sorted(labels):
        a, b = prod.vertex(copy1, u), prod.vertex(copy2, u)
        if side[a] == side[b]:
            raise ValueError(f"label {u} is not split between the copies")
        for x, y in zip(path, path[1:]):
            if side[prod.vertex(x, u)] == side[a] and side[prod.vertex(y, u)] == side[b]:
                pairs.append(_edge(prod.vertex(x, u), prod.vertex(y, u)))
                break
    return Matching(frozenset(pairs))
