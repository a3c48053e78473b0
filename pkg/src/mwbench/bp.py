"""Branching programs: edge-labelled NROBPs and traditional two-leaf NROBPs.

An :class:`Nrobp` is a DAG with one root and one leaf whose edges may carry a
literal ``(var, sign)``.  It accepts a full assignment when some root-leaf
path has all its literals in the assignment.  Structural properties (read-once,
uniform, clean) are separate predicates so that intermediate programs of the
rewrites in :mod:`mwbench.transforms` can be represented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from .graphs import CnfFormula, Graph, IsolatedVertexError, LiteralSet, PartialAssignmentError, SizeLimitError

EQUIV_LIMIT = 20


class StructureError(ValueError):
    pass


def fmt_literal(lit) -> str:
    if lit is None:
        return "."
    v, s = lit
    return f"{'+' if s else '-'}v{v}"


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    label: Optional[tuple] = None  # (var, sign) or None

    @property
    def var(self):
        return None if self.label is None else self.label[0]


@dataclass(frozen=True)
class Nrobp:
    num_nodes: int
    edges: tuple
    root: int
    leaf: int
    num_vars: int
    provenance: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        edges = []
        for e in self.edges:
            t, h, lab = (e.tail, e.head, e.label) if isinstance(e, Edge) else e
            if not (0 <= t < self.num_nodes and 0 <= h < self.num_nodes):
                raise StructureError(f"edge {t}->{h} out of range")
            if lab is not None:
                lab = (int(lab[0]), bool(lab[1]))
                if not 0 <= lab[0] < self.num_vars:
                    raise StructureError(f"variable {lab[0]} out of range")
            edges.append(Edge(t, h, lab))
        object.__setattr__(self, "edges", tuple(edges))

    @cached_property
    def out_edges(self) -> list:
        out = [[] for _ in range(self.num_nodes)]
        for i, e in enumerate(self.edges):
            out[e.tail].append(i)
        return out

    @cached_property
    def in_edges(self) -> list:
        inc = [[] for _ in range(self.num_nodes)]
        for i, e in enumerate(self.edges):
            inc[e.head].append(i)
        return inc

    @cached_property
    def topo_order(self) -> list:
        indeg = [len(x) for x in self.in_edges]
        ready = [v for v in range(self.num_nodes) if indeg[v] == 0]
        ready.reverse()
        order = []
        while ready:
            v = ready.pop()
            order.append(v)
            for i in reversed(self.out_edges[v]):
                h = self.edges[i].head
                indeg[h] -= 1
                if indeg[h] == 0:
                    ready.append(h)
        if len(order) != self.num_nodes:
            raise StructureError("graph has a directed cycle")
        return order

    @property
    def size(self) -> dict:
        return {"nodes": self.num_nodes, "edges": len(self.edges)}


def validate_structure(z: Nrobp) -> None:
    """Raise StructureError unless z is a single-root single-leaf DAG with
    every node on a root-leaf path."""
    z.topo_order
    sources = [v for v in range(z.num_nodes) if not z.in_edges[v]]
    sinks = [v for v in range(z.num_nodes) if not z.out_edges[v]]
    if sources != [z.root]:
        raise StructureError(f"sources {sources}, expected only root {z.root}")
    if sinks != [z.leaf]:
        raise StructureError(f"sinks {sinks}, expected only leaf {z.leaf}")
    # single source and sink in a DAG already put every node on a root-leaf path


def ivars(z: Nrobp) -> list[frozenset]:
    """Per node, the variables with a literal on some root-to-node path."""
    iv = [frozenset()] * z.num_nodes
    for v in z.topo_order:
        acc = set()
        for i in z.in_edges[v]:
            e = z.edges[i]
            acc |= iv[e.tail]
            if e.label is not None:
                acc.add(e.label[0])
        iv[v] = frozenset(acc)
    return iv


def ovars(z: Nrobp) -> list[frozenset]:
    """Per node, the variables with a literal on some node-to-leaf path."""
    ov = [frozenset()] * z.num_nodes
    for v in reversed(z.topo_order):
        acc = set()
        for i in z.out_edges[v]:
            e = z.edges[i]
            acc |= ov[e.head]
            if e.label is not None:
                acc.add(e.label[0])
        ov[v] = frozenset(acc)
    return ov


def _path_between(z: Nrobp, src: int, dst: int) -> list[int]:
    """Edge indices of some directed path src -> dst (src == dst gives [])."""
    prev = {src: None}
    stack = [src]
    while stack:
        v = stack.pop()
        if v == dst:
            break
        for i in z.out_edges[v]:
            h = z.edges[i].head
            if h not in prev:
                prev[h] = i
                stack.append(h)
    path = []
    v = dst
    while prev[v] is not None:
        i = prev[v]
        path.append(i)
        v = z.edges[i].tail
    return path[::-1]


def read_once_violation(z: Nrobp) -> Optional[list[int]]:
    """A directed path (edge indices) starting and ending with literals of one
    variable, or None when z is read-once."""
    iv = ivars(z)
    for i, e in enumerate(z.edges):
        if e.label is None or e.label[0] not in iv[e.tail]:
            continue
        above = _ancestors(z, e.tail)
        for j, f in enumerate(z.edges):
            if f.var == e.label[0] and f.head in above:
                return [j] + _path_between(z, f.head, e.tail) + [i]
    return None


def _ancestors(z: Nrobp, v: int) -> set:
    seen = {v}
    stack = [v]
    while stack:
        w = stack.pop()
        for i in z.in_edges[w]:
            t = z.edges[i].tail
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def check_read_once(z: Nrobp):
    """(True, None) or (False, violating path as edge indices)."""
    path = read_once_violation(z)
    return path is None, path


def is_read_once(z: Nrobp) -> bool:
    return read_once_violation(z) is None


def check_uniform(z: Nrobp) -> bool:
    """Every node sees one variable set on all root paths, and the leaf sees all."""
    iv = ivars(z)
    for e in z.edges:
        expect = iv[e.tail] if e.label is None else iv[e.tail] | {e.label[0]}
        if e.label is not None and e.label[0] in iv[e.tail]:
            return False
        if expect != iv[e.head]:
            return False
    return iv[z.leaf] == frozenset(range(z.num_vars))


def _require_full(z_vars: int, a) -> None:
    for v in range(z_vars):
        if v not in a:
            raise PartialAssignmentError(f"variable {v} unassigned")


def accepts(z: Nrobp, a) -> bool:
    """Reachability from root to leaf over edges consistent with ``a``."""
    _require_full(z.num_vars, a)
    seen = {z.root}
    stack = [z.root]
    while stack:
        v = stack.pop()
        if v == z.leaf:
            return True
        for i in z.out_edges[v]:
            e = z.edges[i]
            if e.label is not None and a[e.label[0]] != e.label[1]:
                continue
            if e.head not in seen:
                seen.add(e.head)
                stack.append(e.head)
    return z.leaf in seen


def _var_columns(n: int) -> np.ndarray:
    """Boolean matrix (2^n, n); row index bit i is the value of variable i."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(bool)


def truth_table(z: Nrobp, limit: int = EQUIV_LIMIT) -> np.ndarray:
    """Acceptance of every full assignment, indexed as in :func:`_var_columns`."""
    n = z.num_vars
    if n > limit:
        raise SizeLimitError(f"{n} variables exceeds exhaustive limit {limit}")
    cols = _var_columns(n)
    reach = {z.root: np.ones(1 << n, dtype=bool)}
    for v in z.topo_order:
        r = reach.pop(v, None) if v != z.leaf else reach.get(v)
        if r is None:
            continue
        for i in z.out_edges[v]:
            e = z.edges[i]
            contrib = r if e.label is None else (r & (cols[:, e.label[0]] == e.label[1]))
            if e.head in reach:
                reach[e.head] = reach[e.head] | contrib
            else:
                reach[e.head] = contrib.copy()
    return reach.get(z.leaf, np.zeros(1 << n, dtype=bool))


def cnf_truth_table(f: CnfFormula, limit: int = EQUIV_LIMIT) -> np.ndarray:
    n = f.variable_count
    if n > limit:
        raise SizeLimitError(f"{n} variables exceeds exhaustive limit {limit}")
    cols = _var_columns(n)
    out = np.ones(1 << n, dtype=bool)
    for clause in f.clauses:
        sat = np.zeros(1 << n, dtype=bool)
        for v, s in clause:
            sat |= cols[:, v] == s
        out &= sat
    return out


def equivalent(z1: Nrobp, z2: Nrobp, limit: int = EQUIV_LIMIT) -> bool:
    if z1.num_vars != z2.num_vars:
        raise ValueError("programs over different variable counts")
    return bool(np.array_equal(truth_table(z1, limit), truth_table(z2, limit)))


def equivalent_to_cnf(z: Nrobp, f: CnfFormula, limit: int = EQUIV_LIMIT) -> bool:
    if z.num_vars != f.variable_count:
        raise ValueError("program and formula over different variable counts")
    return bool(np.array_equal(truth_table(z, limit), cnf_truth_table(f, limit)))


def build_frontier_obdd(g: Graph, sv) -> Nrobp:
    """Ordered program for phi(g) that processes vertices in the order ``sv``.

    The state after a prefix is the set of prefix vertices set to false that
    still have unprocessed neighbours; equal states are merged.  Setting v to
    false is impossible while a false neighbour of v is pending.
    """
    iso = g.isolated_vertices()
    if iso:
        raise IsolatedVertexError(iso[0])
    sv = list(sv)
    if sorted(sv) != list(g.vertices):
        raise ValueError("not a permutation of the vertex set")
    n = len(sv)
    pos = {v: i for i, v in enumerate(sv)}
    last_nb = [max(pos[w] for w in g.neighbors(v)) for v in range(n)]

    layers = [{frozenset(): 0}]
    raw_edges = []  # (layer, state_from, layer+1, state_to, literal)
    for i, v in enumerate(sv):
        nxt = {}
        for state in sorted(layers[-1], key=sorted):
            def keep(s):
                return frozenset(w for w in s if last_nb[w] > i)
            to_true = keep(state)
            nxt.setdefault(to_true, None)
            raw_edges.append((i, state, to_true, (v, True)))
            if not (state & g.neighbors(v)):
                to_false = keep(state | {v})
                nxt.setdefault(to_false, None)
                raw_edges.append((i, state, to_false, (v, False)))
        layers.append(nxt)
    # every partial assignment extends by setting the rest true, so every state
    # reaches the final (empty) state; prune defensively anyway
    alive = [set() for _ in layers]
    alive[-1] = set(layers[-1])
    for i in range(n - 1, -1, -1):
        for li, s, t, _ in raw_edges:
            if li == i and t in alive[i + 1]:
                alive[i].add(s)
    ids = {}
    for li, layer in enumerate(layers):
        for s in sorted(alive[li], key=lambda s: (len(s), sorted(s))):
            ids[(li, s)] = len(ids)
    edges = [
        Edge(ids[(li, s)], ids[(li + 1, t)], lit)
        for li, s, t, lit in raw_edges
        if (li, s) in ids and (li + 1, t) in ids
    ]
    return Nrobp(len(ids), tuple(edges), 0, len(ids) - 1, n)


def t_node_sets(z: Nrobp) -> list[frozenset]:
    """Maximal set of variables positive on every root-leaf path through each node.

    Requires uniformity: a variable either occurs on every root-to-node path
    or on none, so the guaranteed set splits into a prefix and a suffix part.
    """
    if not check_uniform(z):
        raise StructureError("t-node witnesses need a uniform program")
    pos_in = [None] * z.num_nodes
    pos_in[z.root] = frozenset()
    for v in z.topo_order:
        if v == z.root:
            continue
        acc = None
        for i in z.in_edges[v]:
            e = z.edges[i]
            s = pos_in[e.tail] | {e.label[0]} if e.label is not None and e.label[1] else pos_in[e.tail]
            acc = s if acc is None else acc & s
        pos_in[v] = frozenset(acc)
    pos_out = [None] * z.num_nodes
    pos_out[z.leaf] = frozenset()
    for v in reversed(z.topo_order):
        if v == z.leaf:
            continue
        acc = None
        for i in z.out_edges[v]:
            e = z.edges[i]
            s = pos_out[e.head] | {e.label[0]} if e.label is not None and e.label[1] else pos_out[e.head]
            acc = s if acc is None else acc & s
        pos_out[v] = frozenset(acc)
    return [pos_in[v] | pos_out[v] for v in range(z.num_nodes)]


def t_nodes(z: Nrobp, t: int) -> list[tuple[int, frozenset]]:
    return [(v, s) for v, s in enumerate(t_node_sets(z)) if len(s) >= t]


def is_root_leaf_cut(z: Nrobp, nodes: Iterable[int]) -> bool:
    blocked = set(nodes)
    if z.root in blocked:
        return True
    seen = {z.root}
    stack = [z.root]
    while stack:
        v = stack.pop()
        for i in z.out_edges[v]:
            h = z.edges[i].head
            if h in blocked or h in seen:
                continue
            if h == z.leaf:
                return False
            seen.add(h)
            stack.append(h)
    return True


# -- traditional two-leaf programs -------------------------------------------

@dataclass(frozen=True)
class TraditionalNrobp:
    """Node-labelled NROBP with true and false leaves.

    ``node_var[v]`` is the variable tested at v or None for a guessing node.
    Edge labels: True/False out of labelled nodes, None out of guessing nodes.
    """

    num_nodes: int
    node_var: tuple
    edges: tuple  # (tail, head, value) triples
    root: int
    true_leaf: int
    false_leaf: int
    num_vars: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        outs = [[] for _ in range(self.num_nodes)]
        for t, h, val in self.edges:
            outs[t].append(val)
        for v, x in enumerate(self.node_var):
            if v in (self.true_leaf, self.false_leaf):
                if outs[v] or x is not None:
                    raise StructureError(f"leaf {v} must be unlabelled with no out-edges")
            elif x is None:
                if any(val is not None for val in outs[v]):
                    raise StructureError(f"guessing node {v} has labelled out-edges")
            elif sorted(outs[v]) != [False, True]:
                raise StructureError(f"node {v} needs exactly one true and one false edge")

    def literal_edges(self):
        """Edges with the literal their value stands for (None when unlabelled)."""
        for t, h, val in self.edges:
            yield t, h, (None if val is None else (self.node_var[t], val))

    def as_single_leaf(self) -> Nrobp:
        """Raw view with literal-labelled edges, keeping both leaves (not a valid
        Nrobp in general; used for evaluation)."""
        return Nrobp(self.num_nodes, tuple(Edge(*e) for e in self.literal_edges()),
                     self.root, self.true_leaf, self.num_vars)


def traditional_accepts(t: TraditionalNrobp, a) -> bool:
    _require_full(t.num_vars, a)
    return accepts(t.as_single_leaf(), a)


def traditional_truth_table(t: TraditionalNrobp, limit: int = EQUIV_LIMIT) -> np.ndarray:
    return truth_table(t.as_single_leaf(), limit)


def traditional_is_read_once(t: TraditionalNrobp) -> bool:
    """No variable labels two nodes on a common directed path."""
    z = t.as_single_leaf()
    seen_vars = [set() for _ in range(t.num_nodes)]
    for v in z.topo_order:
        x = t.node_var[v]
        if x is not None and x in seen_vars[v]:
            return False
        below = seen_vars[v] | ({x} if x is not None else set())
        for i in z.out_edges[v]:
            seen_vars[z.edges[i].head] |= below
    return True


# -- de Morgan circuits -------------------------------------------------------

@dataclass(frozen=True)
class Gate:
    kind: str  # "and" | "or" | "not" | "var" | "const"
    inputs: tuple = ()
    value: object = None  # variable id for "var", bool for "const"


class Circuit:
    """Gates listed so that every input precedes its consumer."""

    def __init__(self, gates: Iterable[Gate]):
        self.gates = tuple(gates)
        for i, g in enumerate(self.gates):
            if g.kind not in ("and", "or", "not", "var", "const"):
                raise ValueError(f"unknown gate kind {g.kind}")
            if any(j >= i for j in g.inputs):
                raise ValueError("inputs must precede their gate")

    def is_de_morgan(self) -> bool:
        return all(
            g.kind != "not" or (len(g.inputs) == 1 and self.gates[g.inputs[0]].kind == "var")
            for g in self.gates
        )

    def literal_of(self, i: int):
        g = self.gates[i]
        if g.kind == "var":
            return (g.value, True)
        if g.kind == "not":
            return (self.gates[g.inputs[0]].value, False)
        return None

    def vreach(self) -> list[frozenset]:
        out = []
        for g in self.gates:
            if g.kind == "var":
                out.append(frozenset({g.value}))
            else:
                acc = frozenset()
                for j in g.inputs:
                    acc |= out[j]
                out.append(acc)
        return out


def _require_de_morgan(c: Circuit) -> None:
    if not c.is_de_morgan():
        raise ValueError("negations must apply to variable inputs only")


def check_decomposable(c: Circuit) -> bool:
    _require_de_morgan(c)
    vr = c.vreach()
    for g in c.gates:
        if g.kind != "and":
            continue
        seen = set()
        for j in g.inputs:
            if seen & vr[j]:
                return False
            seen |= vr[j]
    return True


def check_decision(c: Circuit) -> bool:
    """Every or-gate is x-and-F1 or not-x-and-F2 for some variable x."""
    _require_de_morgan(c)
    for g in c.gates:
        if g.kind != "or":
            continue
        if len(g.inputs) != 2:
            return False
        a, b = (c.gates[j] for j in g.inputs)
        if a.kind != "and" or b.kind != "and":
            return False
        lits_a = {c.literal_of(j) for j in a.inputs} - {None}
        lits_b = {c.literal_of(j) for j in b.inputs} - {None}
        if not any((x, not s) in lits_b for x, s in lits_a):
            return False
    return True


def literal_set_of_path(z: Nrobp, path: Iterable[int]) -> LiteralSet:
    return LiteralSet.from_literals(z.edges[i].label for i in path if z.edges[i].label is not None)


def random_nrobp(rng, num_vars: int, num_nodes: int, label_prob: float = 0.6,
                 extra_edge_prob: float = 0.3) -> Nrobp:
    """Random read-once program over exactly ``num_vars`` mentioned variables.

    Nodes are created in topological order (root 0, leaf last); each node gets
    one or two predecessors and every non-leaf node a successor.  Labels are
    drawn in topological order of tails from variables absent from the tail's
    IVar, which keeps every path read-once.  Variables left unused are renamed
    away so the declared count matches the mentioned ones; if fewer than
    ``num_vars`` variables got used the count shrinks accordingly.
    """
    if num_nodes < 2:
        raise ValueError("need at least a root and a leaf")
    leaf = num_nodes - 1
    pairs = []
    for v in range(1, num_nodes):
        pairs.append((rng.randrange(v), v))
        if rng.random() < extra_edge_prob:
            pairs.append((rng.randrange(v), v))
    has_out = {a for a, _ in pairs}
    for v in range(num_nodes - 1):
        if v not in has_out:
            pairs.append((v, rng.randrange(v + 1, num_nodes)))
    pairs.sort()
    iv = [set() for _ in range(num_nodes)]
    edges = []
    for a, b in pairs:  # sorted by tail, so every in-edge of a is labelled already
        lab = None
        free = [x for x in range(num_vars) if x not in iv[a]]
        if free and rng.random() < label_prob:
            lab = (rng.choice(free), rng.random() < 0.5)
        edges.append((a, b, lab))
        iv[b] |= iv[a] | ({lab[0]} if lab else set())
    used = sorted({lab[0] for _, _, lab in edges if lab})
    rename = {x: i for i, x in enumerate(used)}
    edges = [Edge(a, b, None if lab is None else (rename[lab[0]], lab[1])) for a, b, lab in edges]
    z = Nrobp(num_nodes, tuple(edges), 0, leaf, len(used))
    validate_structure(z)
    return z
