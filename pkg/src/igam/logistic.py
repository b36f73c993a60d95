"""Logistic core-periphery baselines.

Three comparison models share this module: a coreness-score law
sigma(theta_u + theta_v), its spatial variant with a distance kernel, and a
threshold law driven by a nonlinear rank fixed point.  The two score models
are fitted by full-batch gradient ascent with step halving; the objective is
concave, so the line search only guards against overshooting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .graph import UnsupportedOperationError

__all__ = [
    "CorenessScores",
    "RankScores",
    "ConvergenceError",
    "SingularKernelError",
    "logistic_cp_prob",
    "logistic_jb_prob",
    "logistic_th_prob",
    "cp_log_likelihood",
    "cp_gradient",
    "fit_logistic_cp",
    "fit_logistic_jb",
    "th_rank_scores",
]

_CHUNK = 1024


class ConvergenceError(RuntimeError):
    """Iteration budget exhausted before the tolerance was met."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class SingularKernelError(ValueError):
    """Spatial kernel degenerate: coincident coordinates force sure edges."""


@dataclass(frozen=True, eq=False)
class CorenessScores:
    theta: np.ndarray
    log_likelihood: float
    n_iter: int
    epsilon: float = 0.0


@dataclass(frozen=True, eq=False)
class RankScores:
    pi: np.ndarray
    n_iter: int
    alpha: float


def logistic_cp_prob(theta_u, theta_v):
    """Link probability sigma(theta_u + theta_v), overflow safe."""
    return expit(np.asarray(theta_u, dtype=float) + np.asarray(theta_v, dtype=float))


def logistic_jb_prob(theta_u, theta_v, kernel, epsilon):
    """Spatial law e^s / (K^eps + e^s) with s = theta_u + theta_v.

    Equals the plain coreness law for ``epsilon == 0`` or ``K == 1``; a zero
    kernel value with positive epsilon returns 1 (the documented limit).
    """
    s = np.asarray(theta_u, dtype=float) + np.asarray(theta_v, dtype=float)
    kernel = np.asarray(kernel, dtype=float)
    if np.any(kernel < 0):
        raise ValueError("kernel values must be nonnegative")
    if epsilon == 0:
        return expit(s)
    with np.errstate(divide="ignore"):
        offset = epsilon * np.log(kernel)
    return expit(s - offset)


def logistic_th_prob(pi_u, pi_v, n, s=10.0, t=0.5):
    """Threshold law sigma_{s,t}(max(pi_u, pi_v) / n)."""
    x = np.maximum(np.asarray(pi_u, dtype=float), np.asarray(pi_v, dtype=float)) / n
    return expit(s * (x - t))


# ---------------------------------------------------------------------------
# coreness-score fitting (plain and spatial)
# ---------------------------------------------------------------------------


def _distance_offsets(coordinates, epsilon, rows, _zero_ok_mask=None):
    # epsilon * log ||x_u - x_v||_2 for the given row block against all nodes
    diff = coordinates[rows, None, :] - coordinates[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    with np.errstate(divide="ignore"):
        return epsilon * np.log(dist)


def _check_kernel(g, coordinates):
    coords = np.asarray(coordinates, dtype=float)
    if coords.ndim != 2 or coords.shape[0] != g.n:
        raise ValueError("coordinates must have shape (n, d)")
    if np.isnan(coords).any():
        raise ValueError("coordinates missing (NaN) for some nodes")
    if g.n > 1 and bool(np.all(coords == coords[0])):
        raise SingularKernelError("all coordinates identical; kernel is zero everywhere")
    # coincident pairs get link probability 1; a non-adjacent such pair
    # makes the likelihood diverge, so reject it up front
    _, inverse, counts = np.unique(coords, axis=0, return_inverse=True,
                                   return_counts=True)
    for group in np.nonzero(counts > 1)[0]:
        nodes = np.nonzero(inverse == group)[0]
        for i, u in enumerate(nodes):
            for v in nodes[i + 1:]:
                if not g.has_edge(int(u), int(v)):
                    raise SingularKernelError(
                        f"nodes {u} and {v} share coordinates but are not adjacent")
    return coords


# beyond |s| = 700 every logistic term saturates to double precision, and
# clamping there turns the zero-distance limit (s = +inf) into exact arithmetic
_S_CLIP = 700.0


def _ll_and_grad(theta, g, coordinates=None, epsilon=0.0):
    """Log-likelihood over unordered pairs and its gradient, chunked.

    With s'_uv = theta_u + theta_v - eps*log K(u, v) the likelihood
    telescopes to  ll = sum_edges s'_uv - sum_{u<v} softplus(s'_uv)  and
    grad_u = deg(u) - sum_{v != u} p(u, v).
    """
    n = g.n
    theta = np.asarray(theta, dtype=float)
    deg = g.degrees().astype(float)
    e = g.edges()
    row_prob = np.zeros(n)
    softplus_total = 0.0
    for start in range(0, n, _CHUNK):
        rows = np.arange(start, min(start + _CHUNK, n))
        s = theta[rows, None] + theta[None, :]
        if epsilon != 0.0:
            s = s - _distance_offsets(coordinates, epsilon, rows)
        np.clip(s, -_S_CLIP, _S_CLIP, out=s)
        prob = expit(s)
        softplus = np.logaddexp(0.0, s)
        diag = np.arange(rows.size)
        prob[diag, rows] = 0.0
        softplus[diag, rows] = 0.0
        row_prob[rows] = prob.sum(axis=1)
        softplus_total += float(softplus.sum())
    edge_term = 0.0
    if e.size:
        s_e = theta[e[:, 0]] + theta[e[:, 1]]
        if epsilon != 0.0:
            diff = coordinates[e[:, 0]] - coordinates[e[:, 1]]
            dist = np.sqrt(np.sum(diff * diff, axis=-1))
            with np.errstate(divide="ignore"):
                s_e = s_e - epsilon * np.log(dist)
        s_e = np.clip(s_e, -_S_CLIP, _S_CLIP)
        edge_term = float(s_e.sum())
    ll = edge_term - 0.5 * softplus_total
    grad = deg - row_prob
    return ll, grad


def cp_log_likelihood(theta, g):
    """Bernoulli log-likelihood of the coreness law on graph ``g``."""
    ll, _ = _ll_and_grad(theta, g)
    return ll


def cp_gradient(theta, g):
    """Analytic gradient: deg(u) - sum_{v != u} p(u, v)."""
    _, grad = _ll_and_grad(theta, g)
    return grad


def jb_log_likelihood(theta, g, coordinates, epsilon):
    ll, _ = _ll_and_grad(theta, g, coordinates=coordinates, epsilon=epsilon)
    return ll


def jb_gradient(theta, g, coordinates, epsilon):
    _, grad = _ll_and_grad(theta, g, coordinates=coordinates, epsilon=epsilon)
    return grad


def _ascend(g, tol, max_iters, coordinates=None, epsilon=0.0):
    if g.directed:
        raise UnsupportedOperationError("score fitting expects an undirected graph")
    theta = np.zeros(g.n)
    ll, grad = _ll_and_grad(theta, g, coordinates, epsilon)
    step = 1.0 / g.n
    it = 0
    while it < max_iters:
        gnorm = float(np.max(np.abs(grad))) if grad.size else 0.0
        if gnorm < tol:
            return theta, ll, it
        while True:
            candidate = theta + step * grad
            new_ll, new_grad = _ll_and_grad(candidate, g, coordinates, epsilon)
            if new_ll >= ll:
                break
            step *= 0.5
            if step < 1e-18:
                raise ConvergenceError("line search underflowed", gnorm)
        assert new_ll >= ll, "ascent objective must not decrease"
        theta, ll, grad = candidate, new_ll, new_grad
        step *= 2.0
        it += 1
    gnorm = float(np.max(np.abs(grad)))
    if gnorm < tol:
        return theta, ll, it
    raise ConvergenceError(
        f"gradient ascent did not reach tolerance {tol} in {max_iters} iterations",
        gnorm)


def fit_logistic_cp(g, tol=1e-5, max_iters=5000):
    """Maximum-likelihood coreness scores by gradient ascent.

    Converges when the gradient max-norm drops below ``tol``; the objective
    is concave, so the optimum is unique.  Raises
    :class:`ConvergenceError` (carrying the final gradient norm) if the
    iteration budget runs out first.
    """
    theta, ll, it = _ascend(g, tol, max_iters)
    return CorenessScores(theta=theta, log_likelihood=ll, n_iter=it)


def fit_logistic_jb(g, coordinates=None, epsilon_grid=(0.5, 1.0, 2.0),
                    tol=1e-5, max_iters=5000):
    """Spatial variant: Euclidean-distance kernel, epsilon picked from a grid.

    Each epsilon candidate is fitted from scratch and the one with the best
    fitted likelihood wins.  Coordinates default to the graph's own.
    """
    if coordinates is None:
        coordinates = g.coordinates
    if coordinates is None:
        raise ValueError("spatial fit needs node coordinates")
    coords = _check_kernel(g, coordinates)
    best = None
    for eps in epsilon_grid:
        if eps == 0:
            theta, ll, it = _ascend(g, tol, max_iters)
        else:
            theta, ll, it = _ascend(g, tol, max_iters, coords, float(eps))
        if best is None or ll > best.log_likelihood:
            best = CorenessScores(theta=theta, log_likelihood=ll, n_iter=it,
                                  epsilon=float(eps))
    return best


# ---------------------------------------------------------------------------
# nonlinear rank fixed point
# ---------------------------------------------------------------------------


def _alpha_pair_norm(x_u, x_v, alpha):
    # (x_u^a + x_v^a)^(1/a), stable for large alpha via the max factorization
    hi = np.maximum(x_u, x_v)
    lo = np.minimum(x_u, x_v)
    out = np.zeros_like(hi)
    pos = hi > 0
    ratio = np.zeros_like(hi)
    ratio[pos] = lo[pos] / hi[pos]
    out[pos] = hi[pos] * np.power(1.0 + np.power(ratio[pos], alpha), 1.0 / alpha)
    return out


def th_rank_scores(g, alpha=10.0, tol=1e-8, max_iters=1000):
    """Rank scores from the max-like fixed-point iteration.

    Each sweep replaces a node's score by the sum over incident edges of
    ``(x_u^alpha + x_v^alpha)^(1/alpha)`` and renormalizes by the sup norm;
    cost per sweep is linear in the edge count.  Starts from the uniform
    vector and stops when the sup-norm change drops below ``tol``.
    """
    if g.directed:
        raise UnsupportedOperationError("rank scores expect an undirected graph")
    e = g.edges()
    if e.shape[0] == 0:
        raise ValueError("rank iteration needs at least one edge")
    x = np.ones(g.n)
    for it in range(1, max_iters + 1):
        pair = _alpha_pair_norm(x[e[:, 0]], x[e[:, 1]], alpha)
        new = np.zeros(g.n)
        np.add.at(new, e[:, 0], pair)
        np.add.at(new, e[:, 1], pair)
        top = new.max()
        if top <= 0:
            raise ConvergenceError("rank iteration collapsed to zero", float("inf"))
        new /= top
        resid = float(np.max(np.abs(new - x)))
        x = new
        if resid < tol:
            return RankScores(pi=x, n_iter=it, alpha=alpha)
    raise ConvergenceError(
        f"rank iteration did not reach tolerance {tol} in {max_iters} sweeps", resid)
