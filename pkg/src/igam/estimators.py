"""Scikit-learn style estimators over the fitting routines.

Each estimator takes a :class:`~igam.graph.Graph` (or anything
:func:`as_graph` accepts) in ``fit``, exposes fitted quantities as
underscore attributes, and yields a :class:`~igam.domination.NodeRanking`
for the coverage pipeline.  ``get_params``/``set_params`` come from
``sklearn.base.BaseEstimator``, so the classes clone and grid-search like
any other estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import fitting, logistic
from .domination import prestige_ranking, ranking_from_scores
from .graph import Graph, from_edge_list

__all__ = [
    "as_graph",
    "IgamHierarchyEstimator",
    "LogisticCorePeriphery",
    "SpatialLogisticCorePeriphery",
    "NonlinearCorenessRanker",
]


def as_graph(X, n=None):
    """Coerce input to an undirected :class:`Graph`.

    Accepts a Graph (passed through), or an iterable / array of (u, v) id
    pairs, optionally with an explicit node count.
    """
    if isinstance(X, Graph):
        return X
    return from_edge_list(X, n=n)


def _require_fitted(estimator, attr):
    if not hasattr(estimator, attr):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first")


class IgamHierarchyEstimator(BaseEstimator):
    """Fit the hierarchy model (fanout, scale, node levels) to a graph.

    Parameters mirror :func:`igam.fitting.fit`.  After ``fit`` the instance
    carries ``b_``, ``c_``, ``heights_``, ``slope_``, ``intercept_``,
    ``r_squared_``, ``log_likelihood_`` and the full ``result_``.
    """

    def __init__(self, scorer="exact", b_range=None, swaps=False,
                 fanout_cap=fitting.DEFAULT_FANOUT_CAP):
        self.scorer = scorer
        self.b_range = b_range
        self.swaps = swaps
        self.fanout_cap = fanout_cap

    def fit(self, X, y=None):
        g = as_graph(X)
        result = fitting.fit(g.edges(), g.n, scorer=self.scorer,
                             b_range=self.b_range, swaps=self.swaps,
                             fanout_cap=self.fanout_cap)
        self.result_ = result
        self.b_ = result.b
        self.c_ = result.c
        self.heights_ = result.heights
        self.slope_ = result.slope
        self.intercept_ = result.intercept
        self.r_squared_ = result.r_squared
        self.log_likelihood_ = result.loglik_exact
        self.n_features_in_ = g.n
        self._degrees = g.degrees()
        return self

    def ranking(self):
        """Prestige ranking (hierarchy top first) of the fitted heights."""
        _require_fitted(self, "heights_")
        return prestige_ranking(self.heights_, self._degrees)

    def edge_probability(self, u, v):
        """Fitted link probability for a node pair."""
        _require_fitted(self, "heights_")
        h = self.heights_.heights
        return float(self.c_ ** (-1.0 - min(h[u], h[v])))

    def score(self, X, y=None):
        """Exact log-likelihood of a graph under the fitted parameters."""
        _require_fitted(self, "heights_")
        g = as_graph(X)
        if g.n != self.heights_.n:
            raise ValueError("graph node count differs from the fitted heights")
        return fitting.log_likelihood_exact(g.edges(), self.heights_, self.c_)


class LogisticCorePeriphery(BaseEstimator):
    """Coreness scores theta maximizing the pairwise logistic likelihood."""

    def __init__(self, tol=1e-5, max_iter=5000):
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        g = as_graph(X)
        scores = logistic.fit_logistic_cp(g, tol=self.tol, max_iters=self.max_iter)
        self.theta_ = scores.theta
        self.log_likelihood_ = scores.log_likelihood
        self.n_iter_ = scores.n_iter
        self.n_features_in_ = g.n
        return self

    def ranking(self):
        _require_fitted(self, "theta_")
        return ranking_from_scores(self.theta_, "logistic-cp")

    def edge_probability(self, u, v):
        _require_fitted(self, "theta_")
        return float(logistic.logistic_cp_prob(self.theta_[u], self.theta_[v]))


class SpatialLogisticCorePeriphery(BaseEstimator):
    """Spatial variant with a Euclidean-distance kernel and an epsilon grid."""

    def __init__(self, epsilon_grid=(0.5, 1.0, 2.0), tol=1e-5, max_iter=5000):
        self.epsilon_grid = epsilon_grid
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None, coordinates=None):
        g = as_graph(X)
        scores = logistic.fit_logistic_jb(
            g, coordinates=coordinates, epsilon_grid=self.epsilon_grid,
            tol=self.tol, max_iters=self.max_iter)
        self.theta_ = scores.theta
        self.epsilon_ = scores.epsilon
        self.log_likelihood_ = scores.log_likelihood
        self.n_iter_ = scores.n_iter
        self.n_features_in_ = g.n
        return self

    def ranking(self):
        _require_fitted(self, "theta_")
        return ranking_from_scores(self.theta_, "logistic-jb")


class NonlinearCorenessRanker(BaseEstimator):
    """Node rank scores from the max-like nonlinear fixed-point iteration."""

    def __init__(self, alpha=10.0, tol=1e-8, max_iter=1000):
        self.alpha = alpha
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        g = as_graph(X)
        scores = logistic.th_rank_scores(g, alpha=self.alpha, tol=self.tol,
                                         max_iters=self.max_iter)
        self.scores_ = scores.pi
        self.n_iter_ = scores.n_iter
        self.n_features_in_ = g.n
        return self

    def ranking(self):
        _require_fitted(self, "scores_")
        return ranking_from_scores(self.scores_, "logistic-th")

    def edge_probability(self, u, v, s=10.0, t=0.5):
        _require_fitted(self, "scores_")
        return float(logistic.logistic_th_prob(
            self.scores_[u], self.scores_[v], self.n_features_in_, s=s, t=t))
