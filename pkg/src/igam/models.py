"""Influencer-guided attachment models: parameter bundles, edge laws,
closed-form expectations, and seeded samplers.

Nodes of a sampled network are numbered breadth-first over the skeleton tree
(level 0 first), so level membership is an id range and per-level-pair edge
blocks can be sampled with geometric skips instead of per-pair coin flips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .graph import Graph

__all__ = [
    "IgamParams",
    "Igam2Params",
    "DeltaIgamParams",
    "HeightAssignment",
    "ModelError",
    "full_tree_node_count",
    "tree_level_sizes",
    "sample_igam",
    "sample_igam2",
    "sample_directed_igam",
    "sample_continuous_heights",
    "sample_continuous_igam",
]

# Block samplers materialize every node pair's index range; past ~1e7 nodes
# the quadratic pair space stops being desk-scale.
MAX_SAMPLE_NODES = 10_000_000

_TAG_IGAM = 0
_TAG_IGAM2 = 1
_TAG_DIRECTED = 2
_TAG_CONTINUOUS = 3


class ModelError(ValueError):
    """Invalid model parameters or out-of-range heights."""


def full_tree_node_count(b, H):
    """Node count of a perfect b-ary tree of height H: (b^(H+1)-1)/(b-1)."""
    if b < 2 or H < 0:
        raise ModelError(f"need b >= 2 and H >= 0, got b={b}, H={H}")
    count = (b ** (H + 1) - 1) // (b - 1)
    if count > 2**62:
        raise OverflowError(
            f"tree with b={b}, H={H} has {count} nodes, beyond the supported range")
    return count


def tree_level_sizes(b, H):
    """Level populations [1, b, b^2, ...] of the complete skeleton tree."""
    return np.array([b**h for h in range(H + 1)], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class HeightAssignment:
    """Map node id -> tree level, lower level meaning higher prestige.

    For sampled networks every level ``h < H`` holds exactly ``b**h`` nodes;
    assignments produced by fitting may leave the last level incomplete.
    """

    heights: np.ndarray
    b: int

    def __post_init__(self):
        object.__setattr__(self, "heights",
                           np.ascontiguousarray(self.heights, dtype=np.int64))
        if self.heights.ndim != 1 or self.heights.size == 0:
            raise ModelError("heights must be a nonempty 1-d array")
        if self.heights.min() < 0:
            raise ModelError("heights must be nonnegative")

    @classmethod
    def perfect_tree(cls, b, H):
        """Breadth-first levels of the complete tree: 0, 1,1,1, 2,... ."""
        sizes = tree_level_sizes(b, H)
        return cls(np.repeat(np.arange(H + 1, dtype=np.int64), sizes), b)

    @classmethod
    def from_order(cls, order, b):
        """Assign levels of widths 1, b, b^2, ... down a node ordering.

        The first node in ``order`` gets level 0, the next ``b`` level 1,
        and so on; the last level may be incomplete.
        """
        order = np.asarray(order, dtype=np.int64)
        n = order.size
        heights = np.empty(n, dtype=np.int64)
        level, width, start = 0, 1, 0
        while start < n:
            stop = min(start + width, n)
            heights[order[start:stop]] = level
            start = stop
            width *= b
            level += 1
        return cls(heights, b)

    @property
    def n(self):
        return self.heights.size

    @property
    def H(self):
        return int(self.heights.max())

    def level_sizes(self):
        return np.bincount(self.heights, minlength=self.H + 1)

    def nodes_at_level(self, h):
        return np.nonzero(self.heights == h)[0]

    def nodes_up_to_level(self, h):
        """Ids of all nodes with level <= h (the depth-h prefix set)."""
        return np.nonzero(self.heights <= h)[0]


def _pair_count(sizes, r, s):
    # number of unordered node pairs with levels {r, s}
    if r == s:
        return int(sizes[r]) * (int(sizes[r]) - 1) // 2
    return int(sizes[r]) * int(sizes[s])


@dataclass(frozen=True)
class IgamParams:
    """Parameters (b, c, H) of the single-scale hierarchy model.

    The link probability of two nodes at levels ``hu, hv`` is
    ``c ** (-1 - min(hu, hv))`` with fanout ``b >= 2`` and scale
    ``c in (1, b)``.
    """

    b: int
    c: float
    H: int

    def __post_init__(self):
        if int(self.b) != self.b or self.b < 2:
            raise ModelError(f"fanout b must be an integer >= 2, got {self.b}")
        if not 1.0 < self.c < self.b:
            raise ModelError(f"scale c must lie in (1, b), got c={self.c}, b={self.b}")
        if int(self.H) != self.H or self.H < 0:
            raise ModelError(f"height H must be a nonnegative integer, got {self.H}")
        object.__setattr__(self, "b", int(self.b))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "H", int(self.H))

    # -- structure ---------------------------------------------------------

    @property
    def n(self):
        return full_tree_node_count(self.b, self.H)

    def level_sizes(self):
        return tree_level_sizes(self.b, self.H)

    def level_offsets(self):
        sizes = self.level_sizes()
        return np.concatenate([[0], np.cumsum(sizes)[:-1]])

    def _check_level(self, *levels):
        for h in levels:
            if not 0 <= h <= self.H:
                raise ModelError(f"level {h} outside [0, {self.H}]")

    # -- edge law ----------------------------------------------------------

    def edge_probability(self, hu, hv):
        """Link probability c^(-1 - min(hu, hv)); symmetric in its arguments."""
        self._check_level(hu, hv)
        return self.c ** (-1.0 - min(hu, hv))

    # -- exact expectations --------------------------------------------------

    def expected_degree(self, h, include_self=True):
        """Expected degree of a node at level ``h``.

        Evaluates ``sum_r b^r c^(-min(h, r) - 1)`` exactly.  With
        ``include_self=False`` the node's own slot in its level is excluded,
        which is the true expectation over distinct pairs.
        """
        self._check_level(h)
        total = sum(self.b**r * self.c ** (-min(h, r) - 1.0)
                    for r in range(self.H + 1))
        if not include_self:
            total -= self.c ** (-h - 1.0)
        return total

    def expected_edges(self, include_self_pairs=False):
        """Expected edge count ``(1/2) sum_h b^h * expected_degree(h)``.

        The default sums over distinct node pairs (the quantity a sampled
        graph's edge count concentrates on); ``include_self_pairs=True``
        keeps each node's own slot in its level, matching the looser
        closed-form sum.
        """
        return 0.5 * sum(
            self.b**h * self.expected_degree(h, include_self=include_self_pairs)
            for h in range(self.H + 1))

    def expected_triangles(self):
        """Exact expected number of 3-cliques, summed over level triples."""
        return self._triple_sum(kind="closed")

    def expected_two_paths(self):
        """Exact expected number of paths on 3 vertices (open or closed)."""
        return self._triple_sum(kind="all")

    def _triple_sum(self, kind):
        sizes = self.level_sizes()
        c = self.c
        total = 0.0
        for h1 in range(self.H + 1):
            for h2 in range(h1, self.H + 1):
                for h3 in range(h2, self.H + 1):
                    count = _distinct_triple_count(sizes, h1, h2, h3)
                    if count == 0:
                        continue
                    if kind == "closed":
                        prob = c ** (-3.0 - 2 * h1 - h2)
                    else:
                        # two-path probability: one term per potential center
                        prob = c ** (-2.0 - 2 * h1) + 2.0 * c ** (-2.0 - h1 - h2)
                    total += count * prob
        return total

    def expected_cut_edges(self, tau):
        """Expected edges crossing from levels 0..tau to levels tau+1..H."""
        if not 0 <= tau < self.H:
            raise ModelError(f"tau must lie in [0, H), got {tau}")
        inner = sum(self.b**r * self.c ** (-1.0 - r) for r in range(tau + 1))
        outer = sum(self.b**s for s in range(tau + 1, self.H + 1))
        return inner * outer

    def expected_conductance(self, tau):
        """Expected cut edges over the smaller side size for the level-tau cut."""
        core = int(np.sum(self.level_sizes()[:tau + 1]))
        return self.expected_cut_edges(tau) / min(core, self.n - core)

    # -- domination --------------------------------------------------------

    def undominated_probability(self, tau):
        """P(a node below level tau has no neighbor in levels 0..tau).

        Computed in log space as ``prod_r (1 - c^(-r-1))^(b^r)`` over
        ``r <= tau``; the value does not depend on the node's own level.
        """
        self._check_level(tau)
        log_q = sum(self.b**r * math.log1p(-self.c ** (-r - 1.0))
                    for r in range(tau + 1))
        return math.exp(log_q)

    def domination_level(self):
        """Smallest level ``tau`` whose prefix set dominates everything w.h.p.

        Picks the first ``tau`` with
        ``sum_(h>tau) b^h * q_(h,tau) <= b^(-H)`` (a Markov bound on the
        probability of any uncovered node), capped at H.
        """
        target = -self.H * math.log(self.b)
        for tau in range(self.H + 1):
            tail = sum(self.b**h for h in range(tau + 1, self.H + 1))
            if tail == 0:
                return tau
            log_q = sum(self.b**r * math.log1p(-self.c ** (-r - 1.0))
                        for r in range(tau + 1))
            if log_q + math.log(tail) <= target:
                return tau
        return self.H

    # -- rescaling -----------------------------------------------------------

    def rescaled(self, alpha):
        """Exponent-rescaled parameters (round(b^alpha), c^alpha, H)."""
        if alpha <= 0:
            raise ModelError(f"alpha must be positive, got {alpha}")
        new_b = int(round(self.b**alpha))
        return IgamParams(new_b, self.c**alpha, self.H)

    # -- config ----------------------------------------------------------------

    def to_dict(self):
        return {"b": self.b, "c": self.c, "H": self.H}

    @classmethod
    def from_dict(cls, d):
        return cls(b=d["b"], c=d["c"], H=d["H"])


def _distinct_triple_count(sizes, h1, h2, h3):
    # ways to pick three distinct nodes with sorted levels (h1, h2, h3)
    n1, n2, n3 = int(sizes[h1]), int(sizes[h2]), int(sizes[h3])
    if h1 == h2 == h3:
        return n1 * (n1 - 1) * (n1 - 2) // 6
    if h1 == h2:
        return n1 * (n1 - 1) // 2 * n3
    if h2 == h3:
        return n1 * (n2 * (n2 - 1) // 2)
    return n1 * n2 * n3


@dataclass(frozen=True)
class Igam2Params:
    """Two-scale variant: scale ``c1`` inside the core block, ``c2`` once a
    periphery node (level above ``H0``) is involved; ``1 < c1 < c2 < b``."""

    b: int
    c1: float
    c2: float
    H0: int
    H: int

    def __post_init__(self):
        if int(self.b) != self.b or self.b < 2:
            raise ModelError(f"fanout b must be an integer >= 2, got {self.b}")
        if not 1.0 < self.c1 <= self.c2 < self.b:
            raise ModelError(
                f"need 1 < c1 <= c2 < b, got c1={self.c1}, c2={self.c2}, b={self.b}")
        if not 0 <= self.H0 < self.H:
            raise ModelError(f"need 0 <= H0 < H, got H0={self.H0}, H={self.H}")
        object.__setattr__(self, "b", int(self.b))
        object.__setattr__(self, "c1", float(self.c1))
        object.__setattr__(self, "c2", float(self.c2))
        object.__setattr__(self, "H0", int(self.H0))
        object.__setattr__(self, "H", int(self.H))

    @property
    def n(self):
        return full_tree_node_count(self.b, self.H)

    def level_sizes(self):
        return tree_level_sizes(self.b, self.H)

    def edge_probability(self, hu, hv):
        """Core pairs (both levels <= H0) decay with c1, all others with c2."""
        if not (0 <= hu <= self.H and 0 <= hv <= self.H):
            raise ModelError(f"levels ({hu}, {hv}) outside [0, {self.H}]")
        scale = self.c1 if max(hu, hv) <= self.H0 else self.c2
        return scale ** (-1.0 - min(hu, hv))

    def to_dict(self):
        return {"b": self.b, "c1": self.c1, "c2": self.c2,
                "H0": self.H0, "H": self.H}

    @classmethod
    def from_dict(cls, d):
        return cls(b=d["b"], c1=d["c1"], c2=d["c2"], H0=d["H0"], H=d["H"])


@dataclass(frozen=True)
class DeltaIgamParams:
    """Smoothed variant replacing min with the order-``delta`` power mean."""

    base: IgamParams
    delta: float

    def __post_init__(self):
        if self.delta == 0:
            raise ModelError("delta must be nonzero (the limit delta->0 is "
                             "the geometric mean, not part of this family)")

    def power_mean(self, hu, hv):
        """Order-delta power mean ((hu^d + hv^d)/2)^(1/d), log-space stable.

        For ``delta < 0`` a zero height is a singular input (0^delta is
        undefined); the mean returns the delta -> -inf limit min(hu, hv),
        which is also the continuous extension.
        """
        if hu < 0 or hv < 0:
            raise ModelError("heights must be nonnegative")
        if self.delta < 0 and (hu == 0 or hv == 0):
            return float(min(hu, hv))
        d = self.delta
        log_terms = np.logaddexp(d * math.log(hu), d * math.log(hv)) - math.log(2)
        return float(math.exp(log_terms / d))

    def edge_probability(self, hu, hv):
        """Link probability c^(-1 - M) with M the power mean of the heights."""
        return self.base.c ** (-1.0 - self.power_mean(hu, hv))


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def _block_rng(seed, tag, *key):
    # One child stream per level-pair block: parallel and serial block order
    # produce identical graphs for a fixed seed.
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(tag, *key)))


def _skip_sample(rng, total, q):
    """Indices of a Bernoulli(q) subset of range(total) via geometric skips."""
    if total <= 0 or q <= 0.0:
        return np.empty(0, dtype=np.int64)
    if q >= 1.0:
        return np.arange(total, dtype=np.int64)
    chunks = []
    current = -1
    while current < total - 1:
        remaining = total - 1 - current
        batch = max(64, int(remaining * q * 1.2) + 16)
        gaps = rng.geometric(q, size=batch).astype(np.int64)
        steps = np.cumsum(gaps) + current
        inside = steps[steps <= total - 1]
        chunks.append(inside)
        if inside.size < steps.size:
            break
        current = int(steps[-1])
    return np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)


def _decode_within_level(idx, size):
    """Map pair indices to (i, j), i < j, under row-major enumeration."""
    # row i starts at offset(i) = i*size - i*(i+1)/2
    k = idx.astype(np.float64)
    twon = 2.0 * size - 1.0
    i = np.floor((twon - np.sqrt(twon * twon - 8.0 * k)) / 2.0).astype(np.int64)
    # guard against float rounding at row boundaries
    for _ in range(2):
        off = i * size - i * (i + 1) // 2
        i = np.where(off > idx, i - 1, i)
        off_next = (i + 1) * size - (i + 1) * (i + 2) // 2
        i = np.where(idx >= off_next, i + 1, i)
    off = i * size - i * (i + 1) // 2
    j = idx - off + i + 1
    return i, j


def _check_sample_size(n):
    if n > MAX_SAMPLE_NODES:
        raise ModelError(
            f"sampling {n} nodes exceeds the supported limit of {MAX_SAMPLE_NODES}")


def _sample_blocks(params, seed, tag, probability):
    """Sample all level-pair blocks; ``probability(r, s)`` gives the block law."""
    _check_sample_size(params.n)
    sizes = tree_level_sizes(params.b, params.H)
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    chunks = []
    for r in range(params.H + 1):
        n_r = int(sizes[r])
        for s in range(r, params.H + 1):
            n_s = int(sizes[s])
            q = probability(r, s)
            rng = _block_rng(seed, tag, r, s)
            if r == s:
                idx = _skip_sample(rng, n_r * (n_r - 1) // 2, q)
                if idx.size == 0:
                    continue
                i, j = _decode_within_level(idx, n_r)
                u = offsets[r] + i
                v = offsets[r] + j
            else:
                idx = _skip_sample(rng, n_r * n_s, q)
                if idx.size == 0:
                    continue
                u = offsets[r] + idx // n_s
                v = offsets[s] + idx % n_s
            chunks.append(np.column_stack([u, v]))
    if chunks:
        edges = np.vstack(chunks)
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    return edges


def sample_igam(params, seed):
    """Draw one network from the single-scale model.

    Every unordered node pair over the skeleton tree is linked independently
    with the model's edge probability; the auxiliary tree edges themselves
    are not part of the output.  Deterministic for a fixed seed.

    Returns ``(Graph, HeightAssignment)``.
    """
    law = lambda r, s: params.c ** (-1.0 - r)
    edges = _sample_blocks(params, seed, _TAG_IGAM, law)
    g = Graph(params.n, edges, directed=False)
    return g, HeightAssignment.perfect_tree(params.b, params.H)


def sample_igam2(params, seed):
    """Draw one network from the two-scale model; see :func:`sample_igam`."""
    def law(r, s):
        scale = params.c1 if max(r, s) <= params.H0 else params.c2
        return scale ** (-1.0 - r)
    edges = _sample_blocks(params, seed, _TAG_IGAM2, law)
    g = Graph(params.n, edges, directed=False)
    return g, HeightAssignment.perfect_tree(params.b, params.H)


def sample_directed_igam(params, seed):
    """Directed variant: the arc toward the less prestigious endpoint uses
    its target's level, so periphery nodes link up much more often than
    prestigious nodes link down.  Both directions are drawn independently.
    """
    _check_sample_size(params.n)
    sizes = tree_level_sizes(params.b, params.H)
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    c = params.c
    chunks = []
    for r in range(params.H + 1):
        n_r = int(sizes[r])
        for s in range(r, params.H + 1):
            n_s = int(sizes[s])
            if r == s:
                # ordered distinct pairs within the level, one stream
                rng = _block_rng(seed, _TAG_DIRECTED, r, s, 0)
                idx = _skip_sample(rng, n_r * (n_r - 1), c ** (-1.0 - r))
                if idx.size:
                    u = idx // (n_r - 1)
                    j = idx % (n_r - 1)
                    v = np.where(j < u, j, j + 1)
                    chunks.append(np.column_stack([offsets[r] + u, offsets[r] + v]))
                continue
            # arcs from level r (more prestigious) down to level s
            rng = _block_rng(seed, _TAG_DIRECTED, r, s, 0)
            idx = _skip_sample(rng, n_r * n_s, c ** (-1.0 - s))
            if idx.size:
                u = offsets[r] + idx // n_s
                v = offsets[s] + idx % n_s
                chunks.append(np.column_stack([u, v]))
            # arcs from level s up to level r
            rng = _block_rng(seed, _TAG_DIRECTED, r, s, 1)
            idx = _skip_sample(rng, n_r * n_s, c ** (-1.0 - r))
            if idx.size:
                u = offsets[r] + idx // n_s
                v = offsets[s] + idx % n_s
                chunks.append(np.column_stack([v, u]))
    edges = np.vstack(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
    g = Graph(params.n, edges, directed=True)
    return g, HeightAssignment.perfect_tree(params.b, params.H)


def sample_continuous_heights(params, n, seed):
    """Draw n i.i.d. real heights with CDF (b^t - 1)/(b^H - 1) on [0, H].

    Inverse-transform sampling: ``h = log_b(1 + U (b^H - 1))``.
    """
    if n < 1:
        raise ModelError(f"need n >= 1, got {n}")
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(_TAG_CONTINUOUS,)))
    u = rng.random(n)
    return np.log1p(u * (params.b**params.H - 1)) / math.log(params.b)


def sample_continuous_igam(params, n, seed):
    """Latent-height network: draw continuous heights, then link each pair
    with probability ``c^(-1 - min(hu, hv))``.

    Processing nodes in increasing height order makes every remaining pair
    of a row share one probability, so rows are skip-sampled like blocks.
    Returns ``(Graph, heights)`` with heights aligned to node ids.
    """
    _check_sample_size(n)
    heights = sample_continuous_heights(params, n, seed)
    order = np.argsort(heights, kind="stable")
    sorted_h = heights[order]
    chunks = []
    for i in range(n - 1):
        q = params.c ** (-1.0 - sorted_h[i])
        rng = _block_rng(seed, _TAG_CONTINUOUS, i + 1)
        idx = _skip_sample(rng, n - 1 - i, q)
        if idx.size:
            chunks.append(np.column_stack([
                np.full(idx.size, order[i], dtype=np.int64),
                order[i + 1 + idx],
            ]))
    edges = np.vstack(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
    return Graph(n, edges, directed=False), heights
