"""Graphs, monotone 2-CNFs and vertex covers.

Vertices are the integers ``0..n-1``.  Every graph without isolated vertices
corresponds to the monotone 2-CNF ``phi(G)`` whose clauses are the edges; a
full assignment satisfies ``phi(G)`` exactly when its positive variables form
a vertex cover.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

EXHAUSTIVE_LIMIT = 20


class SizeLimitError(ValueError):
    """An exhaustive routine was asked to run beyond its configured limit."""


class IsolatedVertexError(ValueError):
    def __init__(self, vertex: int):
        super().__init__(f"vertex {vertex} is isolated")
        self.vertex = vertex


class PartialAssignmentError(ValueError):
    pass


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset = frozenset()
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("negative vertex count")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {u}-{v} out of range")
            norm.add(_edge(u, v))
        object.__setattr__(self, "edges", frozenset(norm))
        adj = [set() for _ in range(self.vertex_count)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels=None) -> "Graph":
        return cls(n, frozenset(_edge(u, v) for u, v in edges), labels)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def adjacency_masks(self) -> list[int]:
        masks = []
        for v in self.vertices:
            m = 0
            for w in self._adj[v]:
                m |= 1 << w
            masks.append(m)
        return masks

    def isolated_vertices(self) -> list[int]:
        return [v for v in self.vertices if not self._adj[v]]

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.vertex_count


def max_degree(g: Graph) -> int:
    return max((g.degree(v) for v in g.vertices), default=0)


# A literal is (variable, positive?).
Literal = tuple


@dataclass(frozen=True)
class CnfFormula:
    variable_count: int
    clauses: tuple = ()

    def __post_init__(self):
        clauses = []
        for clause in self.clauses:
            clause = tuple((int(v), bool(s)) for v, s in clause)
            seen = set()
            for v, _ in clause:
                if not 0 <= v < self.variable_count:
                    raise ValueError(f"variable {v} out of range")
                if v in seen:
                    raise ValueError(f"variable {v} occurs twice in a clause")
                seen.add(v)
            clauses.append(clause)
        object.__setattr__(self, "clauses", tuple(clauses))


class LiteralSet(dict):
    """Consistent set of literals: a mapping variable -> sign.

    A dict cannot hold two signs for one variable, which is exactly the
    consistency requirement.
    """

    @classmethod
    def from_positives(cls, n: int, positives: Iterable[int]) -> "LiteralSet":
        pos = set(positives)
        return cls({v: v in pos for v in range(n)})

    @classmethod
    def from_literals(cls, literals: Iterable[Literal]) -> "LiteralSet":
        out = cls()
        for v, s in literals:
            if out.get(v, s) != s:
                raise ValueError(f"literals of variable {v} with both signs")
            out[v] = s
        return out

    def positives(self) -> frozenset:
        return frozenset(v for v, s in self.items() if s)

    def contains(self, literal: Literal) -> bool:
        v, s = literal
        return self.get(v) == s


def phi(g: Graph) -> CnfFormula:
    """Monotone 2-CNF with one positive clause (u or v) per edge."""
    iso = g.isolated_vertices()
    if iso:
        raise IsolatedVertexError(iso[0])
    return CnfFormula(g.vertex_count, tuple(((u, True), (v, True)) for u, v in g.sorted_edges()))


def primal_graph(f: CnfFormula) -> Graph:
    edges = set()
    for clause in f.clauses:
        vs = sorted(v for v, _ in clause)
        edges.update(combinations(vs, 2))
    return Graph.from_edges(f.variable_count, edges)


def satisfies(f: CnfFormula, a: Mapping[int, bool]) -> bool:
    for v in range(f.variable_count):
        if v not in a:
            raise PartialAssignmentError(f"variable {v} unassigned")
    return all(any(a[v] == s for v, s in clause) for clause in f.clauses)


def _check_subset(g: Graph, s) -> None:
    for v in s:
        if not 0 <= v < g.vertex_count:
            raise ValueError(f"vertex {v} out of range")


def is_vertex_cover(g: Graph, s) -> bool:
    s = set(s)
    _check_subset(g, s)
    return all(u in s or v in s for u, v in g.edges)


def enumerate_minimal_vcs(g: Graph, limit: int = EXHAUSTIVE_LIMIT) -> list[frozenset]:
    """All inclusion-minimal vertex covers, sorted lexicographically.

    Subset enumeration with a minimality filter; exponential on purpose, since
    this only serves as an oracle.
    """
    n = g.vertex_count
    if n > limit:
        raise SizeLimitError(f"{n} vertices exceeds exhaustive limit {limit}")
    adj = g.adjacency_masks()
    edge_masks = [(1 << u) | (1 << v) for u, v in g.edges]
    full = (1 << n) - 1
    found = []
    for mask in range(1 << n):
        if any(mask & em == 0 for em in edge_masks):
            continue
        # minimal iff every member has a neighbour outside the cover
        minimal = True
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            if adj[v] & (full ^ mask) == 0:
                minimal = False
                break
            m ^= low
        if minimal:
            found.append(sorted(v for v in range(n) if mask >> v & 1))
    found.sort()
    return [frozenset(s) for s in found]


@dataclass(frozen=True)
class Matching:
    pairs: frozenset

    def __len__(self):
        return len(self.pairs)

    def is_valid_for(self, g: Graph, s1=None) -> bool:
        used = set()
        for u, v in self.pairs:
            if not g.has_edge(u, v) or u in used or v in used:
                return False
            if s1 is not None and (u in s1) == (v in s1):
                return False
            used.update((u, v))
        return True


def max_cut_matching(g: Graph, s1) -> tuple[int, Matching]:
    """Largest matching among edges with exactly one end in ``s1``.

    Augmenting-path search from each vertex of ``s1`` in ascending order,
    neighbours tried in ascending order, so the witness is deterministic.
    """
    s1 = set(s1)
    _check_subset(g, s1)
    left = sorted(s1)
    right_of = {u: sorted(w for w in g.neighbors(u) if w not in s1) for u in left}
    match_r: dict[int, int] = {}

    def augment(u, seen):
        for w in right_of[u]:
            if w in seen:
                continue
            seen.add(w)
            if w not in match_r or augment(match_r[w], seen):
                match_r[w] = u
                return True
        return False

    for u in left:
        augment(u, set())
    pairs = frozenset(_edge(u, w) for w, u in match_r.items())
    return len(pairs), Matching(pairs)


def cut_matching_size(adj: list[int], s_mask: int, cap: int | None = None) -> int:
    """Bitmask variant of :func:`max_cut_matching` returning only the size.

    ``adj`` holds neighbour bitmasks.  Stops early once ``cap`` is reached.
    """
    n = len(adj)
    comp = ((1 << n) - 1) ^ s_mask
    left = []
    m = s_mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        nb = adj[v] & comp
        if nb:
            left.append((v, nb))
        m ^= low
    if not left:
        return 0
    # right vertex -> neighbour mask of its current partner
    partner: dict[int, int] = {}

    def augment(nb, seen):
        avail = nb & ~seen[0]
        while avail:
            low = avail & -avail
            w = low.bit_length() - 1
            seen[0] |= low
            if w not in partner or augment(partner[w], seen):
                partner[w] = nb
                return True
            avail &= ~seen[0]
        return False

    size = 0
    for _, nb in left:
        if augment(nb, [0]):
            size += 1
            if cap is not None and size >= cap:
                break
    return size
