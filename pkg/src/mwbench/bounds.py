"""Lower-bound machinery: t-covers of vertex-cover families, the random
endpoint-choice experiment, certificates extracted from programs, and the
separation table for T_r(P_2r)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .bp import Nrobp, check_uniform, t_nodes
from .family import ceil_log2, mw_lower_bound_formula
from .graphs import EXHAUSTIVE_LIMIT, Graph, SizeLimitError, enumerate_minimal_vcs, max_degree

RNG_ALGORITHM = "numpy.random.PCG64"
REL_TOL = 1e-9


def f_const(x: int) -> float:
    """f(x) with 2^(-1/f(x)) = (1 - 2^-x)^(1/(x+1))."""
    if x < 1:
        raise ValueError("max-degree must be at least 1")
    return -(x + 1) / math.log2(1.0 - 2.0 ** -x)


def size_lower_bound(t: float, x: int) -> float:
    """2^(t / f(x))."""
    if t == 0:
        return 1.0
    return 2.0 ** (float(t) / f_const(x))


def at_least(value: float, bound: float) -> bool:
    return value >= bound * (1 - REL_TOL)


@dataclass(frozen=True)
class CoverFamily:
    sets: tuple
    t: int

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        if any(len(s) < self.t for s in sets):
            raise ValueError(f"member smaller than {self.t}")
        object.__setattr__(self, "sets", sets)


def covers(family, targets) -> bool:
    return all(any(a <= b for a in family) for b in targets)


def is_t_cover(a: CoverFamily, g: Graph, t: int, limit: int = EXHAUSTIVE_LIMIT) -> bool:
    if any(len(s) < t for s in a.sets):
        return False
    return covers(a.sets, enumerate_minimal_vcs(g, limit))


class NoCoverError(ValueError):
    pass


def min_t_cover_size(g: Graph, t: int, max_vertices: int = 10, max_t: int = 4) -> int:
    """Fewest t-sets covering every minimal vertex cover (exact).

    Members can be taken of size exactly t: shrinking a member only widens what
    it covers.  Exact set cover by branch and bound over candidate t-subsets.
    """
    if g.vertex_count > max_vertices or t > max_t:
        raise SizeLimitError(f"min t-cover limited to {max_vertices} vertices and t <= {max_t}")
    mvcs = enumerate_minimal_vcs(g)
    if any(len(s) < t for s in mvcs):
        raise NoCoverError(f"some minimal vertex cover is smaller than t={t}")
    m = len(mvcs)
    full = (1 << m) - 1
    masks = set()
    for cand in combinations(range(g.vertex_count), t):
        cs = frozenset(cand)
        mask = 0
        for i, s in enumerate(mvcs):
            if cs <= s:
                mask |= 1 << i
        if mask:
            masks.add(mask)
    # drop dominated candidates
    cands = sorted(masks, key=lambda x: -bin(x).count("1"))
    kept = []
    for c in cands:
        if not any(c | k == k for k in kept):
            kept.append(c)
    by_elem = [[c for c in kept if c >> i & 1] for i in range(m)]
    biggest = max(bin(c).count("1") for c in kept)
    best = [m + 1]

    def search(covered, used):
        if covered == full:
            best[0] = min(best[0], used)
            return
        rest = bin(full ^ covered).count("1")
        if used + -(-rest // biggest) >= best[0]:
            return
        # branch on the uncovered element with fewest options
        pick = min((i for i in range(m) if not covered >> i & 1), key=lambda i: len(by_elem[i]))
        for c in sorted(by_elem[pick], key=lambda c: -bin(c & ~covered).count("1")):
            search(covered | c, used + 1)

    search(0, 0)
    return best[0]


@dataclass(frozen=True)
class OrientationSample:
    chosen: tuple  # one endpoint per edge, in sorted edge order
    seed: int

    @property
    def endpoints(self) -> frozenset:
        return frozenset(self.chosen)


def sample_out(g: Graph, seed: int) -> OrientationSample:
    """One fair coin per edge (sorted edge order) choosing an endpoint."""
    rng = np.random.default_rng(seed)
    edges = g.sorted_edges()
    coins = rng.integers(0, 2, size=len(edges))
    return OrientationSample(tuple(e[c] for e, c in zip(edges, coins)), seed)


def _out_membership(g: Graph, trials: int, seed: int) -> np.ndarray:
    """Boolean (trials, n): whether each vertex is a chosen endpoint."""
    rng = np.random.default_rng(seed)
    edges = g.sorted_edges()
    coins = rng.integers(0, 2, size=(trials, len(edges)), dtype=np.int8)
    out = np.zeros((trials, g.vertex_count), dtype=bool)
    for j, (u, v) in enumerate(edges):
        pick_v = coins[:, j].astype(bool)
        out[:, u] |= ~pick_v
        out[:, v] |= pick_v
    return out


def containment_bound(g: Graph, size: int) -> float:
    """(1 - 2^-x)^(size / (x+1)) for x the max-degree."""
    if size == 0:
        return 1.0
    x = max_degree(g)
    return (1.0 - 2.0 ** -x) ** (size / (x + 1))


@dataclass(frozen=True)
class ContainmentEstimate:
    estimate: float
    bound: float
    trials: int
    all_vertex_covers: bool

    @property
    def stderr(self) -> float:
        return math.sqrt(self.bound * (1 - self.bound) / self.trials)


def estimate_containment_prob(g: Graph, s, trials: int, seed: int) -> ContainmentEstimate:
    """Monte-Carlo frequency of ``s`` lying inside the chosen endpoints."""
    if trials < 1:
        raise ValueError("need at least one trial")
    s = sorted(set(s))
    out = _out_membership(g, trials, seed)
    hits = out[:, s].all(axis=1) if s else np.ones(trials, dtype=bool)
    covered = np.ones(trials, dtype=bool)
    for u, v in g.edges:
        covered &= out[:, u] | out[:, v]
    return ContainmentEstimate(float(hits.mean()), containment_bound(g, len(s)), trials, bool(covered.all()))


def exact_containment_prob(g: Graph, s) -> Fraction:
    """Exact probability by enumerating the coins of edges touching ``s``."""
    s = set(s)
    touching = [e for e in g.sorted_edges() if e[0] in s or e[1] in s]
    if len(touching) > 22:
        raise SizeLimitError("too many edges to enumerate")
    hits = 0
    for coins in product((0, 1), repeat=len(touching)):
        chosen = {e[c] for e, c in zip(touching, coins)}
        hits += s <= chosen
    return Fraction(hits, 2 ** len(touching))


def greedy_independent_subset(g: Graph, s) -> list[int]:
    """Ascending-id greedy independent set inside ``s``; maximal within s,
    hence of size at least |s| / (maxdeg + 1)."""
    chosen = []
    blocked = set()
    for v in sorted(s):
        if v not in blocked:
            chosen.append(v)
            blocked.add(v)
            blocked |= g.neighbors(v)
    return chosen


def independent_product_prob(g: Graph, ind) -> Fraction:
    """Product over u of (1 - 2^-deg(u))."""
    p = Fraction(1)
    for u in ind:
        p *= 1 - Fraction(1, 2 ** g.degree(u))
    return p


def nrobp_size_lower_bound(g: Graph, mw_value: int | Fraction) -> float:
    if mw_value < 0:
        raise ValueError("matching width cannot be negative")
    if mw_value == 0:
        return 1.0
    return size_lower_bound(mw_value, max_degree(g))


@dataclass(frozen=True)
class CoverCertificate:
    family: CoverFamily
    source: tuple  # program node for each set
    bound: float

    @property
    def meets_bound(self) -> bool:
        return at_least(len(self.family.sets), self.bound)

    def as_record(self) -> dict:
        return {
            "t": self.family.t,
            "sets": [sorted(s) for s in self.family.sets],
            "source_nodes": list(self.source),
            "size": len(self.family.sets),
            "implied_node_lower_bound": self.bound,
            "meets_bound": self.meets_bound,
        }


class CertificateError(ValueError):
    pass


def certificate_from_nrobp(z: Nrobp, g: Graph, t: int, limit: int = EXHAUSTIVE_LIMIT) -> CoverCertificate:
    """t-cover of VC(g) read off the t-nodes of ``z``, one source node per set.

    The caller is responsible for ``z`` computing phi(g).
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    x = max(max_degree(g), 1)
    if t == 0:
        return CoverCertificate(CoverFamily((frozenset(),), 0), (z.root,), 1.0)
    if not check_uniform(z):
        raise CertificateError("program is not uniform")
    sets, source = [], []
    seen = set()
    for node, s in t_nodes(z, t):
        if s not in seen:
            seen.add(s)
            sets.append(s)
            source.append(node)
    fam = CoverFamily(tuple(sets), t)
    if not covers(fam.sets, enumerate_minimal_vcs(g, limit)):
        raise CertificateError(
            f"t-node sets do not cover VC(G) for t={t}; program does not compute phi(G) or t > mw(G)")
    return CoverCertificate(fam, tuple(source), size_lower_bound(t, x))


def _pow2(e: float) -> float:
    if e > 1023:
        return math.inf
    if e < -1074:
        return 0.0
    return 2.0 ** e


def _log2_int(n: int) -> float:
    # exact enough for huge ints: shift down to float range first
    b = n.bit_length()
    if b <= 1000:
        return math.log2(n)
    shift = b - 64
    return math.log2(n >> shift) + shift


def separation_row(r: int) -> dict:
    """One row of the T_r(P_2r) table: size, matching-width bound, node lower
    bound from it, the 2^t * n decision-DNNF upper bound with t = 4r."""
    if r < 1:
        raise ValueError("r must be at least 1")
    n = (2 ** (r + 1) - 1) * 2 * r
    mw_bound = mw_lower_bound_formula(r, r)
    f5 = f_const(5)
    log2_lb = float(mw_bound) / f5
    tw = 4 * r
    ub = 2 ** tw * n
    log2_ub = _log2_int(ub)
    log2_ratio = log2_lb - log2_ub
    k = tw
    return {
        "r": r,
        "n": n,
        "mw_bound": str(mw_bound),
        "nrobp_lb": _pow2(log2_lb),
        "ddnnf_ub": ub,
        "ratio": _pow2(log2_ratio),
        "log2_nrobp_lb": log2_lb,
        "log2_ddnnf_ub": log2_ub,
        "log2_ratio": log2_ratio,
        "regime_flags": {
            "k_ge_50": k >= 50,
            "r_ge_5ceillogk": r >= 5 * ceil_log2(k),
            "family": "T_r(P_2r)",
        },
    }


def separation_report(r_values) -> list[dict]:
    return [separation_row(r) for r in r_values]


def ratio_crossover(r_max: int) -> int:
    """Smallest r* with log2 ratio strictly increasing on r*..r_max."""
    logs = [separation_row(r)["log2_ratio"] for r in range(1, r_max + 1)]
    r_star = r_max
    for r in range(r_max - 1, 0, -1):
        if logs[r] > logs[r - 1]:  # logs[r] is row r+1
            r_star = r
        else:
            break
    return r_star
