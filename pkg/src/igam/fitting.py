"""Hierarchy fitting: recover (b, c, heights) from an observed edge sample.

The procedure sorts nodes by sample degree, stacks them into levels of
widths 1, b, b^2, ... for each candidate fanout, reads the scale ``c`` off
the slope of log total level degree versus level, and keeps the candidate
with the best Bernoulli log-likelihood.  An optional local-search pass swaps
the heights of edge endpoints while that improves the likelihood.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .models import HeightAssignment, ModelError

__all__ = [
    "FitResult",
    "LevelRegression",
    "FanoutRejected",
    "FitFailedError",
    "sample_degrees",
    "degree_order",
    "assign_heights",
    "level_regression",
    "c_from_slope",
    "log_likelihood_exact",
    "log_likelihood_approx",
    "fit",
    "swap_refinement",
]

# sweeping every fanout up to n-1 is quadratic work; past this many nodes
# the sweep is capped unless the caller opts out
FANOUT_CAP_THRESHOLD = 10_000
DEFAULT_FANOUT_CAP = 64

_SWAP_EPS = 1e-12


class FanoutRejected(ValueError):
    """A candidate fanout produced an out-of-range scale or unusable levels."""

    def __init__(self, message, c=None):
        super().__init__(message)
        self.c = c


class FitFailedError(ValueError):
    """Every candidate fanout was rejected; carries the per-fanout log."""

    def __init__(self, rejections):
        lines = ", ".join(f"b={b}: {why}" for b, why in sorted(rejections.items()))
        super().__init__(f"no fanout produced an admissible fit ({lines})")
        self.rejections = rejections


@dataclass(frozen=True)
class LevelRegression:
    slope: float
    intercept: float
    r_squared: float
    level_log_degrees: np.ndarray  # NaN where a level has zero total degree


@dataclass(frozen=True, eq=False)
class FitResult:
    b: int
    c: float
    heights: HeightAssignment
    slope: float
    intercept: float
    r_squared: float
    loglik_exact: float
    loglik_approx: float
    level_log_degrees: np.ndarray
    rejections: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "b": self.b,
            "c": self.c,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "loglik_exact": self.loglik_exact,
            "loglik_approx": self.loglik_approx,
            "level_log_degrees": [
                None if math.isnan(z) else z for z in self.level_log_degrees
            ],
            "rejections": {str(b): why for b, why in sorted(self.rejections.items())},
        }


def _as_edge_array(edges):
    arr = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges),
                     dtype=np.int64).reshape(-1, 2)
    return arr


def sample_degrees(edges, n):
    """Per-node incidence counts over the edge sample (multiset semantics)."""
    arr = _as_edge_array(edges)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ModelError("edge endpoint outside [0, n)")
    return np.bincount(arr.ravel(), minlength=n)


def degree_order(degrees):
    """Node ids by descending degree, ties broken by ascending id."""
    degrees = np.asarray(degrees)
    return np.lexsort((np.arange(degrees.size), -degrees))


def assign_heights(order, b):
    """Levels of widths 1, b, b^2, ... down the ordering (last may be short)."""
    return HeightAssignment.from_order(order, b)


def _level_starts(b, n):
    # first sorted position of each level: 0, 1, 1+b, 1+b+b^2, ...
    starts = [0]
    width = 1
    while starts[-1] + width < n:
        starts.append(starts[-1] + width)
        width *= b
    return np.array(starts, dtype=np.int64)


def _regression_from_totals(totals):
    zbar = np.full(totals.size, np.nan)
    positive = totals > 0
    zbar[positive] = np.log(totals[positive])
    levels = np.nonzero(positive)[0]
    if levels.size < 2:
        raise FanoutRejected(
            f"only {levels.size} level(s) with positive degree; need 2 for a slope")
    slope, intercept, r2 = _ols(levels.astype(float), zbar[positive])
    return LevelRegression(slope, intercept, r2, zbar)


def level_regression(heights, degrees):
    """Least squares of log total level degree on the level index.

    Levels whose total degree is zero are skipped (their log is undefined).
    Raises :class:`FanoutRejected` when fewer than two levels remain.
    Returns a :class:`LevelRegression`; a constant response is reported with
    slope 0 and r_squared 0.
    """
    totals = np.bincount(heights.heights,
                         weights=np.asarray(degrees, dtype=float),
                         minlength=heights.H + 1)
    return _regression_from_totals(totals)


def _ols(x, y):
    xm, ym = x.mean(), y.mean()
    var = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / var)
    intercept = float(ym - slope * xm)
    sstot = float(np.sum((y - ym) ** 2))
    if sstot == 0.0:
        return 0.0, intercept, 0.0
    ssres = float(np.sum((y - slope * x - intercept) ** 2))
    return slope, intercept, 1.0 - ssres / sstot


def c_from_slope(b, slope):
    """Invert the slope to the scale ``c = b * exp(-slope)``.

    Raises :class:`FanoutRejected` (carrying the offending value) when the
    result leaves the admissible interval (1, b).
    """
    c = b * math.exp(-slope)
    if c >= b:
        raise FanoutRejected(f"scale c={c:.4g} is not below the fanout {b}", c=c)
    if c <= 1.0:
        raise FanoutRejected(f"scale c={c:.4g} is not above 1", c=c)
    return c


def _edge_min_levels(edges, heights):
    arr = _as_edge_array(edges)
    if arr.size == 0:
        return np.empty(0, dtype=np.int64)
    # likelihood treats the sample as a set of unordered distinct pairs
    arr = np.unique(np.sort(arr, axis=1), axis=0)
    arr = arr[arr[:, 0] != arr[:, 1]]
    h = heights.heights
    return np.minimum(h[arr[:, 0]], h[arr[:, 1]])


def _pairs_by_min_level(heights):
    sizes = heights.level_sizes().astype(np.int64)
    above = np.concatenate([np.cumsum(sizes[::-1])[::-1][1:], [0]])
    return sizes * (sizes - 1) // 2 + sizes * above


def _ll_exact_from_counts(edge_counts, pair_counts, c):
    if np.any(edge_counts > pair_counts):
        raise ModelError("more edges than node pairs in a level block")
    levels = np.arange(edge_counts.size, dtype=float)
    log_f = -(1.0 + levels) * math.log(c)
    log_1mf = np.log1p(-np.exp(log_f))
    return float(np.sum(edge_counts * log_f)
                 + np.sum((pair_counts - edge_counts) * log_1mf))


def log_likelihood_exact(edges, heights, c):
    """Bernoulli log-likelihood over all unordered distinct node pairs.

    The non-edge term is aggregated per minimum level (the probability is
    constant inside such a block), so the cost is O(H + m) rather than the
    naive O(n^2) pair loop.
    """
    if c <= 1.0:
        raise ModelError(f"scale must exceed 1 for a valid law, got c={c}")
    mins = _edge_min_levels(edges, heights)
    edge_counts = np.bincount(mins, minlength=heights.H + 1).astype(np.int64)
    pair_counts = _pairs_by_min_level(heights)
    return _ll_exact_from_counts(edge_counts, pair_counts, c)


def log_likelihood_approx(edges, heights, c):
    """Edge-only O(m) likelihood term (drops the pair-independent part)."""
    if c <= 1.0:
        raise ModelError(f"scale must exceed 1 for a valid law, got c={c}")
    mins = _edge_min_levels(edges, heights)
    return float(np.sum(-(1.0 + mins) * math.log(c)))


def fit(edges, n, scorer="exact", b_range=None, swaps=False,
        fanout_cap=DEFAULT_FANOUT_CAP):
    """Sweep candidate fanouts and return the maximum-likelihood fit.

    Parameters
    ----------
    edges : array-like of (u, v) pairs
    n : int
        Number of nodes (isolated nodes included).
    scorer : "exact" or "approx"
        Likelihood used to pick the winning fanout.
    b_range : iterable of int, optional
        Candidate fanouts; defaults to 2..n-1, capped at ``fanout_cap``
        above 10^4 nodes (pass ``fanout_cap=None`` to opt out).
    swaps : bool
        Run :func:`swap_refinement` on the winner.

    Raises :class:`FitFailedError`, carrying the rejection reason per
    fanout, when no candidate is admissible.  Ties in likelihood go to the
    smaller fanout.
    """
    arr = _as_edge_array(edges)
    if arr.shape[0] < 1:
        raise FitFailedError({0: "need at least one edge"})
    if scorer not in ("exact", "approx"):
        raise ModelError(f"unknown scorer {scorer!r}")
    degrees = sample_degrees(arr, n)
    order = degree_order(degrees)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    # likelihood treats the sample as a set of unordered distinct pairs
    dedup = np.unique(np.sort(arr, axis=1), axis=0)
    dedup = dedup[dedup[:, 0] != dedup[:, 1]]
    edge_ranks = rank[dedup]
    if b_range is None:
        top = n - 1
        if n > FANOUT_CAP_THRESHOLD and fanout_cap is not None:
            top = min(top, fanout_cap)
        b_range = range(2, top + 1)
    rejections = {}
    best = None
    for b in b_range:
        if not 2 <= b <= n - 1:
            rejections[b] = f"fanout outside 2..{n - 1}"
            continue
        # level of the node at sorted position r: first position of level
        # h is (b^h - 1)/(b - 1), so a searchsorted over the boundaries
        # replaces building the assignment object inside the sweep
        boundaries = _level_starts(b, n)
        h_by_rank = np.searchsorted(boundaries, np.arange(n), side="right") - 1
        totals = np.bincount(h_by_rank, weights=degrees[order].astype(float))
        try:
            reg = _regression_from_totals(totals)
            c = c_from_slope(b, reg.slope)
        except FanoutRejected as exc:
            rejections[b] = str(exc)
            continue
        sizes = np.bincount(h_by_rank)
        mins = np.minimum(h_by_rank[edge_ranks[:, 0]], h_by_rank[edge_ranks[:, 1]])
        edge_counts = np.bincount(mins, minlength=sizes.size)
        if scorer == "exact":
            above = np.concatenate([np.cumsum(sizes[::-1])[::-1][1:], [0]])
            pair_counts = sizes * (sizes - 1) // 2 + sizes * above
            ll = _ll_exact_from_counts(edge_counts, pair_counts, c)
        else:
            levels = np.arange(sizes.size, dtype=float)
            ll = float(np.sum(-(1.0 + levels) * math.log(c) * edge_counts))
        if best is None or ll > best[0] or (ll == best[0] and b < best[1]):
            best = (ll, b, c, reg)
    if best is None:
        raise FitFailedError(rejections)
    _, b, c, reg = best
    heights = assign_heights(order, b)
    result = FitResult(
        b=b, c=c, heights=heights,
        slope=reg.slope, intercept=reg.intercept, r_squared=reg.r_squared,
        loglik_exact=log_likelihood_exact(arr, heights, c),
        loglik_approx=log_likelihood_approx(arr, heights, c),
        level_log_degrees=reg.level_log_degrees,
        rejections=rejections,
    )
    if swaps:
        result = swap_refinement(result, arr, scorer=scorer)
    return result


def _edge_weight_table(H, c, scorer):
    levels = np.arange(H + 1, dtype=float)
    log_f = -(1.0 + levels) * math.log(c)
    if scorer == "approx":
        return log_f
    return log_f - np.log1p(-np.exp(log_f))


def swap_refinement(result, edges, scorer="exact"):
    """Swap edge-endpoint heights while the likelihood strictly improves.

    Full passes over the edge list repeat until one makes no swap.  Because
    a swap permutes the height multiset, the pair-independent likelihood
    term is unchanged and the gain of a proposal reduces to the affected
    edge terms, costing O(deg(u) + deg(v)) per edge.
    """
    arr = _as_edge_array(edges)
    arr = np.unique(np.sort(arr, axis=1), axis=0)
    arr = arr[arr[:, 0] != arr[:, 1]]
    n = result.heights.n
    h = result.heights.heights.copy()
    weight = _edge_weight_table(result.heights.H, result.c, scorer)

    neighbors = [[] for _ in range(n)]
    for u, v in arr:
        neighbors[u].append(v)
        neighbors[v].append(u)
    neighbors = [np.array(ns, dtype=np.int64) for ns in neighbors]

    max_passes = max(1, n * arr.shape[0])
    for _ in range(max_passes):
        swapped = False
        for u, v in arr:
            hu, hv = h[u], h[v]
            if hu == hv:
                continue
            nu = neighbors[u]
            nv = neighbors[v]
            hn_u = h[nu[nu != v]]
            hn_v = h[nv[nv != u]]
            delta = (
                np.sum(weight[np.minimum(hn_u, hv)])
                - np.sum(weight[np.minimum(hn_u, hu)])
                + np.sum(weight[np.minimum(hn_v, hu)])
                - np.sum(weight[np.minimum(hn_v, hv)])
            )
            if delta > _SWAP_EPS:
                h[u], h[v] = hv, hu
                swapped = True
        if not swapped:
            break

    heights = HeightAssignment(h, result.heights.b)
    degrees = sample_degrees(arr, n)
    try:
        reg = level_regression(heights, degrees)
        slope, intercept, r2 = reg.slope, reg.intercept, reg.r_squared
        zbar = reg.level_log_degrees
    except FanoutRejected:
        slope, intercept, r2, zbar = (result.slope, result.intercept,
                                      result.r_squared, result.level_log_degrees)
    return FitResult(
        b=result.b, c=result.c, heights=heights,
        slope=slope, intercept=intercept, r_squared=r2,
        loglik_exact=log_likelihood_exact(arr, heights, result.c),
        loglik_approx=log_likelihood_approx(arr, heights, result.c),
        level_log_degrees=zbar,
        rejections=result.rejections,
    )
