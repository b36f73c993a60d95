"""Dominating-set construction and coverage analysis.

Two node-selection strategies are built in: greedy maximum coverage (pick
whatever closed neighborhood newly dominates the most nodes) and prestige
order (walk the hierarchy top level down).  Rankings produced elsewhere
(for instance coreness scores) plug into the same curve and exponent
pipeline through :class:`NodeRanking`.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graph import GraphError, MalformedInputError, UnsupportedOperationError

__all__ = [
    "NodeRanking",
    "DominationCurve",
    "CoverageNotReached",
    "dominated_count",
    "dominated_mask",
    "greedy_max_coverage",
    "prestige_ranking",
    "ranking_from_scores",
    "domination_curve",
    "ads_exponent",
    "parity_regression",
    "brute_force_min_dominating_set",
]

STRATEGIES = ("greedy", "prestige", "logistic-cp", "logistic-jb", "logistic-th")


class CoverageNotReached(GraphError):
    """Raised when a domination curve never attains the requested coverage."""

    def __init__(self, kappa, max_coverage):
        super().__init__(
            f"coverage {kappa} never reached; curve tops out at {max_coverage:.4f}")
        self.kappa = kappa
        self.max_coverage = max_coverage


@dataclass(frozen=True, eq=False)
class NodeRanking:
    """Ordered node ids (a full permutation or a prefix) plus a strategy tag."""

    order: np.ndarray
    strategy: str

    def __post_init__(self):
        object.__setattr__(self, "order",
                           np.ascontiguousarray(self.order, dtype=np.int64))
        if self.order.ndim != 1:
            raise MalformedInputError("ranking order must be one-dimensional")
        if np.unique(self.order).size != self.order.size:
            raise MalformedInputError("ranking order repeats a node id")

    def __len__(self):
        return self.order.size


@dataclass(frozen=True, eq=False)
class DominationCurve:
    """Cumulative coverage: fraction dominated after each ranking prefix."""

    prefix_sizes: np.ndarray
    covered_fraction: np.ndarray
    n: int

    def __post_init__(self):
        object.__setattr__(self, "prefix_sizes",
                           np.ascontiguousarray(self.prefix_sizes, dtype=np.int64))
        object.__setattr__(self, "covered_fraction",
                           np.ascontiguousarray(self.covered_fraction, dtype=float))
        if self.prefix_sizes.shape != self.covered_fraction.shape:
            raise MalformedInputError("curve arrays must have matching length")
        if np.any(np.diff(self.covered_fraction) < -1e-12):
            raise MalformedInputError("covered fraction must be nondecreasing")


def _member_mask(g, members):
    idx = np.asarray(list(members), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= g.n):
        raise MalformedInputError("node id outside [0, n)")
    mask = np.zeros(g.n, dtype=bool)
    mask[idx] = True
    return mask


def dominated_mask(g, members, total=False):
    """Boolean mask of nodes dominated by the set ``members``.

    Standard semantics (default): a node is dominated if it belongs to the
    set or has a neighbor in it.  With ``total=True`` membership alone does
    not count; every node needs a neighbor inside the set.  On directed
    graphs a node is dominated through its out-edges (it can reach a set
    member in one hop).
    """
    mask = _member_mask(g, members)
    dom = np.zeros(g.n, dtype=bool) if total else mask.copy()
    e = g.edges()
    if e.size:
        dom[e[mask[e[:, 1]], 0]] = True
        if not g.directed:
            dom[e[mask[e[:, 0]], 1]] = True
    return dom


def dominated_count(g, members, total=False):
    """Number of nodes dominated by ``members``; see :func:`dominated_mask`."""
    return int(dominated_mask(g, members, total=total).sum())


def greedy_max_coverage(g, k=None):
    """Greedy maximum-coverage selection of dominating nodes.

    Repeatedly picks the node whose closed neighborhood newly dominates the
    most nodes (ties to the smallest id), marks that neighborhood dominated,
    and stops after ``k`` picks or at full domination.  Implemented lazily:
    cached gains only shrink, so a popped entry that re-evaluates to its
    cached value is a true maximum.

    Returns ``(NodeRanking, DominationCurve)`` over the selected prefix.
    """
    if g.directed:
        raise UnsupportedOperationError("greedy coverage expects an undirected graph")
    n = g.n
    if k is not None and not 0 <= k <= n:
        raise MalformedInputError(f"k must lie in [0, n], got {k}")
    limit = n if k is None else k
    dominated = np.zeros(n, dtype=bool)

    def gain(u):
        nbrs = g.neighbors(u)
        return int(not dominated[u]) + int(np.count_nonzero(~dominated[nbrs]))

    heap = [(-(1 + int(d)), u) for u, d in enumerate(g.degrees())]
    heapq.heapify(heap)
    picks = []
    fractions = []
    covered = 0
    last_gain = n + 1
    while heap and len(picks) < limit and covered < n:
        neg_cached, u = heapq.heappop(heap)
        current = gain(u)
        if current == 0:
            continue
        if current != -neg_cached:
            heapq.heappush(heap, (-current, u))
            continue
        assert current <= last_gain, "greedy marginal gains must not increase"
        last_gain = current
        picks.append(u)
        dominated[u] = True
        dominated[g.neighbors(u)] = True
        covered = int(dominated.sum())
        fractions.append(covered / n)
    ranking = NodeRanking(np.array(picks, dtype=np.int64), "greedy")
    curve = DominationCurve(np.arange(1, len(picks) + 1), np.array(fractions), n)
    return ranking, curve


def prestige_ranking(heights, degrees):
    """Rank nodes top of the hierarchy first.

    Sorts by ascending level, breaking ties inside a level by descending
    degree and then ascending id.  For height assignments built from a
    degree sort this coincides with descending-degree order.
    """
    h = np.asarray(heights.heights if hasattr(heights, "heights") else heights,
                   dtype=np.int64)
    deg = np.asarray(degrees, dtype=np.int64)
    if deg.shape != h.shape:
        raise MalformedInputError("heights and degrees must cover the same nodes")
    order = np.lexsort((np.arange(h.size), -deg, h))
    return NodeRanking(order, "prestige")


def ranking_from_scores(scores, strategy):
    """Rank by descending score, ties to the smaller id."""
    scores = np.asarray(scores, dtype=float)
    order = np.lexsort((np.arange(scores.size), -scores))
    return NodeRanking(order, strategy)


def domination_curve(g, ranking):
    """Coverage after every prefix of ``ranking``, computed incrementally.

    Each node and each edge is touched a constant number of times, so the
    whole curve costs O(n + m).
    """
    dominated = np.zeros(g.n, dtype=bool)
    covered = 0
    fractions = np.empty(len(ranking), dtype=float)
    for i, u in enumerate(ranking.order):
        if not dominated[u]:
            dominated[u] = True
            covered += 1
        nbrs = g.neighbors(u)
        fresh = nbrs[~dominated[nbrs]]
        dominated[fresh] = True
        covered += fresh.size
        fractions[i] = covered / g.n
    return DominationCurve(np.arange(1, len(ranking) + 1), fractions, g.n)


def ads_exponent(curve, kappa=0.8, n=None):
    """Exponent p = log(s) / log(n) of the smallest prefix s reaching kappa.

    Raises :class:`CoverageNotReached` (carrying the curve's maximum) when
    no prefix attains the requested coverage.
    """
    n = curve.n if n is None else n
    reached = np.nonzero(curve.covered_fraction >= kappa)[0]
    if reached.size == 0:
        raise CoverageNotReached(kappa, float(curve.covered_fraction.max(initial=0.0)))
    s = int(curve.prefix_sizes[reached[0]])
    if n <= 1:
        return 0.0
    return math.log(s) / math.log(n)


def parity_regression(curve_x, curve_y, drop_zero=True):
    """Log-log regression of one strategy's coverage on another's.

    Pairs the two curves at equal prefix sizes (iteration counts), regresses
    ``log10`` coverage of ``curve_y`` on that of ``curve_x``, and returns
    ``(slope, intercept, r_squared)``.
    """
    steps = min(curve_x.prefix_sizes.size, curve_y.prefix_sizes.size)
    x = curve_x.covered_fraction[:steps]
    y = curve_y.covered_fraction[:steps]
    keep = (x > 0) & (y > 0) if drop_zero else np.ones(steps, dtype=bool)
    if int(keep.sum()) < 2:
        raise MalformedInputError("need at least two positive coverage points")
    lx = np.log10(100.0 * x[keep])
    ly = np.log10(100.0 * y[keep])
    return _least_squares(lx, ly)


def _least_squares(x, y):
    xm, ym = x.mean(), y.mean()
    var = float(np.sum((x - xm) ** 2))
    if var == 0.0:
        return 0.0, float(ym), 0.0
    slope = float(np.sum((x - xm) * (y - ym)) / var)
    intercept = float(ym - slope * xm)
    resid = y - (slope * x + intercept)
    sstot = float(np.sum((y - ym) ** 2))
    r2 = 0.0 if sstot == 0.0 else 1.0 - float(np.sum(resid**2)) / sstot
    return slope, intercept, r2


def brute_force_min_dominating_set(g, total=False):
    """Exact minimum dominating set by subset enumeration, for n <= 20.

    Scans cardinalities upward and, within a cardinality, subsets in
    lexicographic order, so the returned set is the lexicographically
    smallest among all minimum dominating sets.
    """
    if g.n > 20:
        raise UnsupportedOperationError(
            f"exact enumeration is limited to 20 nodes, got {g.n}")
    n = g.n
    # under total semantics a pick covers only its neighbors, not itself
    cover_of = []
    for u in range(n):
        mask = 0 if total else (1 << u)
        for v in g.neighbors(u):
            mask |= 1 << int(v)
        cover_of.append(mask)
    full = (1 << n) - 1
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            got = 0
            for u in combo:
                got |= cover_of[u]
            if got == full:
                return list(combo)
    raise GraphError("no dominating set exists (isolated node under total semantics)")
