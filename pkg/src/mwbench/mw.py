"""Matching width: exact subset DP, seeded local search, and a falsifier."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .graphs import Graph, SizeLimitError, cut_matching_size

DP_LIMIT = 22


@dataclass(frozen=True)
class MwResult:
    width: int
    witness_permutation: tuple
    witness_prefix_lengths: tuple

    def as_record(self) -> dict:
        return {
            "width": self.width,
            "permutation": list(self.witness_permutation),
            "prefix": list(self.witness_prefix_lengths),
        }


def _check_permutation(g: Graph, sv: Sequence[int]) -> None:
    if sorted(sv) != list(g.vertices):
        raise ValueError("not a permutation of the vertex set")


def prefix_widths(g: Graph, sv: Sequence[int]) -> list[int]:
    """Cut matching value of every prefix, lengths 0..n."""
    _check_permutation(g, sv)
    adj = g.adjacency_masks()
    out = [0]
    mask = 0
    for v in sv:
        mask |= 1 << v
        out.append(cut_matching_size(adj, mask))
    return out


def permutation_width(g: Graph, sv: Sequence[int]) -> int:
    return max(prefix_widths(g, sv))


def _result(g: Graph, perm) -> MwResult:
    widths = prefix_widths(g, perm)
    w = max(widths)
    return MwResult(w, tuple(perm), tuple(i for i, x in enumerate(widths) if x == w))


def exact_mw(g: Graph, limit: int = DP_LIMIT) -> MwResult:
    """Exact matching width by dynamic programming over vertex subsets.

    best[S] is the least achievable maximum prefix value over orderings of S
    (prefixes of an ordering of S are themselves subsets of S), so
    best[S] = max(cut(S), min over v in S of best[S - v]).
    The witness is the lexicographically smallest optimal ordering.
    """
    n = g.vertex_count
    if n > limit:
        raise SizeLimitError(f"{n} vertices exceeds DP limit {limit}")
    if n == 0:
        return MwResult(0, (), (0,))
    adj = g.adjacency_masks()
    full = (1 << n) - 1
    best = [0] * (1 << n)
    for s in range(1, full + 1):
        m = s
        low_best = None
        while m:
            low = m & -m
            b = best[s ^ low]
            if low_best is None or b < low_best:
                low_best = b
                if b == 0:
                    break
            m ^= low
        cut = cut_matching_size(adj, s)
        best[s] = cut if cut > low_best else low_best
    width = best[full]
    # S extends to an optimal ordering iff its complement can be ordered within
    # the width (cut(S) = cut(V - S)), i.e. best[V - S] <= width
    perm = []
    s = 0
    while s != full:
        for v in range(n):
            bit = 1 << v
            if not s & bit and best[full ^ (s | bit)] <= width:
                break
        perm.append(v)
        s |= bit
    res = _result(g, perm)
    assert res.width == width
    return res


class _Evaluator:
    """Cached cut values keyed by prefix bitmask."""

    def __init__(self, g: Graph, cap: int | None):
        self.adj = g.adjacency_masks()
        self.cap = cap
        self.cache: dict[int, int] = {}

    def cut(self, mask: int) -> int:
        c = self.cache.get(mask)
        if c is None:
            c = cut_matching_size(self.adj, mask, self.cap)
            if len(self.cache) > 2_000_000:
                self.cache.clear()
            self.cache[mask] = c
        return c

    def profile(self, perm) -> list[int]:
        out = []
        mask = 0
        for v in perm[:-1]:
            mask |= 1 << v
            out.append(self.cut(mask))
        return out


def _score(cuts) -> tuple:
    if not cuts:
        return (0, 0, 0)
    w = max(cuts)
    return (w, cuts.count(w), sum(cuts))


def _apply(perm, move):
    kind, i, j = move
    p = list(perm)
    if kind == "swap":
        p[i], p[i + 1] = p[i + 1], p[i]
    else:
        v = p.pop(i)
        p.insert(j, v)
    return p


def _moves(n):
    for i in range(n - 1):
        yield ("swap", i, i + 1)
    for i in range(n):
        for j in range(n):
            if j != i and j != i + 1 and j != i - 1:
                yield ("insert", i, j)


def _local_search(g: Graph, budget: int, seed: int, stop_below: int | None, cap: int | None):
    """Steepest descent with random restarts.

    Returns (best_width, best_perm, found_below) where found_below reports
    whether a permutation of width < stop_below turned up.  ``budget`` counts
    evaluated candidate moves (each restart's initial ordering counts as one).
    """
    n = g.vertex_count
    rng = random.Random(seed)
    ev = _Evaluator(g, cap)
    best_perm = list(range(n))
    best_key = (_score(ev.profile(best_perm)), best_perm)
    used = 1
    if stop_below is not None and best_key[0][0] < stop_below:
        return best_key[0][0], best_perm, True
    moves = list(_moves(n))
    while used < budget:
        perm = list(range(n))
        rng.shuffle(perm)
        cur = _score(ev.profile(perm))
        used += 1
        while used < budget:
            step_best = None
            for mv in moves:
                if used >= budget:
                    break
                used += 1
                cand = _apply(perm, mv)
                sc = _score(ev.profile(cand))
                if sc < cur and (step_best is None or sc < step_best[0]):
                    step_best = (sc, cand)
            if step_best is None:
                break
            cur, perm = step_best
            if stop_below is not None and cur[0] < stop_below:
                return cur[0], perm, True
        key = (cur, perm)
        if key < best_key:
            best_key = key
    return best_key[0][0], best_key[1], False


def heuristic_mw_upper(g: Graph, budget: int = 20_000, seed: int = 0) -> MwResult:
    """Upper bound on matching width from the best ordering found."""
    if g.vertex_count == 0:
        return MwResult(0, (), (0,))
    _, perm, _ = _local_search(g, budget, seed, None, None)
    return _result(g, perm)


def falsify_lower_bound(g: Graph, bound: int, budget: int = 100_000, seed: int = 0):
    """Search for an ordering of width below ``bound``; None if none is found."""
    if bound <= 0 or g.vertex_count == 0:
        return None
    # values at or above the bound never matter, so cut matchings stop there
    _, perm, found = _local_search(g, budget, seed, bound, bound)
    if found:
        assert permutation_width(g, perm) < bound
        return tuple(perm)
    return None
