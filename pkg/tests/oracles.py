"""Shared brute-force oracles.  They share no code with the package."""

from itertools import combinations, product


def brute_matching(edges, s1):
    """Largest set of pairwise disjoint cross edges, by subset enumeration."""
    cross = [e for e in edges if (e[0] in s1) != (e[1] in s1)]
    for k in range(len(cross), 0, -1):
        for sub in combinations(cross, k):
            ends = [v for e in sub for v in e]
            if len(ends) == len(set(ends)):
                return k
    return 0


def root_leaf_paths(z):
    """All root-leaf paths as lists of edges (explicit enumeration)."""
    out = {}
    for e in z.edges:
        out.setdefault(e.tail, []).append(e)
    paths = []

    def walk(v, acc):
        if v == z.leaf:
            paths.append(list(acc))
            return
        for e in out.get(v, []):
            acc.append(e)
            walk(e.head, acc)
            acc.pop()

    walk(z.root, [])
    return paths


def path_accepts(z, assignment):
    """Some root-leaf path whose literals all agree with ``assignment``."""
    return any(all(e.label is None or assignment[e.label[0]] == e.label[1] for e in p)
               for p in root_leaf_paths(z))


def all_assignments(n):
    for bits in product((False, True), repeat=n):
        yield dict(enumerate(bits))


def vertex_covers(n, edges):
    return [frozenset(v for v in range(n) if mask >> v & 1) for mask in range(1 << n)
            if all(mask >> u & 1 or mask >> v & 1 for u, v in edges)]

