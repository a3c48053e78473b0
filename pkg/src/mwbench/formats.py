"""Readers and writers: PACE .gr/.td, DIMACS CNF, and the BP text formats.

PACE and DIMACS use 1-based ids; the BP formats are 0-based with variables
written ``v<k>``.
"""

from __future__ import annotations

import json

from .bp import Edge, Nrobp, TraditionalNrobp, fmt_literal
from .family import TreeDecomposition, TreeGraph
from .graphs import CnfFormula, Graph


class FormatError(ValueError):
    pass


def _lines(text: str):
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("c"):
            yield line.split()


def write_gr(g: Graph) -> str:
    out = [f"p tw {g.vertex_count} {len(g.edges)}"]
    out += [f"{u + 1} {v + 1}" for u, v in g.sorted_edges()]
    return "\n".join(out) + "\n"


def read_gr(text: str) -> Graph:
    n = m = None
    edges = []
    for parts in _lines(text):
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "tw":
                raise FormatError(f"bad header {' '.join(parts)}")
            n, m = int(parts[2]), int(parts[3])
        else:
            if n is None:
                raise FormatError("edge before header")
            edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if n is None:
        raise FormatError("missing header")
    if len(edges) != m:
        raise FormatError(f"header declares {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def write_cnf(f: CnfFormula) -> str:
    out = [f"p cnf {f.variable_count} {len(f.clauses)}"]
    for clause in f.clauses:
        out.append(" ".join(str((v + 1) if s else -(v + 1)) for v, s in clause) + " 0")
    return "\n".join(out) + "\n"


def read_cnf(text: str) -> CnfFormula:
    n = m = None
    clauses = []
    current = []
    for parts in _lines(text):
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"bad header {' '.join(parts)}")
            n, m = int(parts[2]), int(parts[3])
            continue
        if parts[0] == "%":
            break
        for tok in parts:
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append((abs(lit) - 1, lit > 0))
    if current:
        clauses.append(tuple(current))
    if n is None:
        raise FormatError("missing header")
    if len(clauses) != m:
        raise FormatError(f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))


def write_td(td: TreeDecomposition, n: int) -> str:
    bags = td.bags
    width1 = max((len(b) for b in bags), default=0)
    out = [f"s td {len(bags)} {width1} {n}"]
    for i, b in enumerate(bags):
        out.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(b)]))
    for a, b in td.tree.graph.sorted_edges():
        out.append(f"{a + 1} {b + 1}")
    return "\n".join(out) + "\n"


def read_td(text: str) -> tuple[TreeDecomposition, int]:
    """Decomposition and declared vertex count; the tree is rooted at bag 1."""
    header = None
    bags = {}
    edges = []
    for parts in _lines(text):
        if parts[0] == "s":
            header = tuple(int(x) for x in parts[2:5])
        elif parts[0] == "b":
            bags[int(parts[1]) - 1] = frozenset(int(x) - 1 for x in parts[2:] if x != "0")
        else:
            edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if header is None:
        raise FormatError("missing s td line")
    nb, _, n = header
    if sorted(bags) != list(range(nb)):
        raise FormatError("bag ids must be 1..#bags")
    adj = {i: [] for i in range(nb)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = [None] * nb
    seen = {0} if nb else set()
    stack = [0] if nb else []
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = x
                stack.append(y)
    if len(seen) != nb or len(edges) != max(nb - 1, 0):
        raise FormatError("decomposition tree is not a tree")
    return TreeDecomposition(TreeGraph.from_parents(parent), tuple(bags[i] for i in range(nb))), n


def _parse_literal(tok: str):
    if tok == ".":
        return None
    if tok[0] not in "+-" or tok[1] != "v":
        raise FormatError(f"bad literal {tok}")
    return (int(tok[2:]), tok[0] == "+")


def write_nrobp(z: Nrobp) -> str:
    out = [f"nrobp {z.num_nodes} {len(z.edges)} {z.num_vars}"]
    for v in range(z.num_nodes):
        tag = " root" if v == z.root else " leaf" if v == z.leaf else ""
        out.append(f"n {v}{tag}")
    for e in z.edges:
        out.append(f"e {e.tail} {e.head} {fmt_literal(e.label)}")
    return "\n".join(out) + "\n"


def write_traditional(t: TraditionalNrobp) -> str:
    out = [f"tnrobp {t.num_nodes} {len(t.edges)} {t.num_vars}"]
    for v in range(t.num_nodes):
        tags = []
        if v == t.root:
            tags.append("root")
        if v == t.true_leaf:
            tags.append("true")
        if v == t.false_leaf:
            tags.append("false")
        if t.node_var[v] is not None:
            tags.append(f"v{t.node_var[v]}")
        out.append(" ".join(["n", str(v)] + tags))
    for a, b, val in t.edges:
        out.append(f"e {a} {b} {'.' if val is None else int(val)}")
    return "\n".join(out) + "\n"


def read_bp(text: str):
    """Parse either BP format, dispatching on the header keyword."""
    rows = list(_lines(text))
    if not rows:
        raise FormatError("empty input")
    kind = rows[0][0]
    if kind not in ("nrobp", "tnrobp"):
        raise FormatError(f"unknown header {kind}")
    nn, ne, nv = (int(x) for x in rows[0][1:4])
    roles = {}
    node_var = [None] * nn
    edges = []
    for parts in rows[1:]:
        if parts[0] == "n":
            v = int(parts[1])
            for tag in parts[2:]:
                if tag.startswith("v"):
                    node_var[v] = int(tag[1:])
                else:
                    roles[tag] = v
        elif parts[0] == "e":
            a, b = int(parts[1]), int(parts[2])
            tok = parts[3] if len(parts) > 3 else "."
            if kind == "nrobp":
                edges.append(Edge(a, b, _parse_literal(tok)))
            else:
                edges.append((a, b, None if tok == "." else tok == "1"))
        else:
            raise FormatError(f"unknown line {' '.join(parts)}")
    if len(edges) != ne:
        raise FormatError(f"header declares {ne} edges, found {len(edges)}")
    if kind == "nrobp":
        return Nrobp(nn, tuple(edges), roles["root"], roles["leaf"], nv)
    return TraditionalNrobp(nn, tuple(node_var), tuple(edges), roles["root"], roles["true"], roles["false"], nv)


def record(obj) -> str:
    """One line-delimited structured record."""
    return json.dumps(obj, sort_keys=True, default=_json_default)


def _json_default(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if hasattr(x, "numerator"):
        return str(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")
