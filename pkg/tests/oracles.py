"""Brute-force reference implementations the tests check the library against.

Everything here is deliberately naive (exhaustive enumeration, double loops,
direct products) and independent of the library's code paths.
"""

import itertools
import math

import numpy as np


def triangles_by_enumeration(g):
    count = 0
    for a, b, c in itertools.combinations(range(g.n), 3):
        if g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c):
            count += 1
    return count


def two_paths_by_enumeration(g):
    count = 0
    for a, b, c in itertools.combinations(range(g.n), 3):
        count += sum((g.has_edge(center, x) and g.has_edge(center, y))
                     for center, x, y in ((a, b, c), (b, a, c), (c, a, b)))
    return count


def diameter_by_full_bfs(g):
    best = 0
    for source in range(g.n):
        dist = g.bfs_distances(source)
        assert (dist >= 0).all()
        best = max(best, int(dist.max()))
    return best


def dominated_by_scan(g, members, total=False):
    members = set(int(v) for v in members)
    covered = 0
    for u in range(g.n):
        if not total and u in members:
            covered += 1
            continue
        if any(int(v) in members for v in g.neighbors(u)):
            covered += 1
    return covered


def curve_by_recomputation(g, ranking):
    fractions = []
    for k in range(1, len(ranking.order) + 1):
        fractions.append(dominated_by_scan(g, ranking.order[:k]) / g.n)
    return np.array(fractions)


def loglik_by_pair_loop(edges, heights, c):
    h = heights.heights
    edge_set = {tuple(sorted((int(u), int(v)))) for u, v in edges if u != v}
    total = 0.0
    for u, v in itertools.combinations(range(h.size), 2):
        f = c ** (-1.0 - min(h[u], h[v]))
        total += math.log(f) if (u, v) in edge_set else math.log1p(-f)
    return total


def expected_degree_by_pair_sum(params, h):
    """Exact mean degree of one node at level h, summing distinct pairs."""
    total = 0.0
    for r in range(params.H + 1):
        pop = params.b ** r - (1 if r == h else 0)
        total += pop * params.c ** (-min(h, r) - 1.0)
    return total


def expected_edges_by_pair_sum(params):
    sizes = [params.b ** h for h in range(params.H + 1)]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    level_of = np.repeat(np.arange(params.H + 1), sizes)
    total = 0.0
    n = int(offsets[-1])
    for u in range(n):
        for v in range(u + 1, n):
            total += params.c ** (-1.0 - min(level_of[u], level_of[v]))
    return total


def expected_triangles_by_node_triples(params):
    sizes = [params.b ** h for h in range(params.H + 1)]
    level_of = np.repeat(np.arange(params.H + 1), sizes)
    n = level_of.size
    total = 0.0
    c = params.c
    for a, b, d in itertools.combinations(range(n), 3):
        hs = sorted((level_of[a], level_of[b], level_of[d]))
        total += c ** (-3.0 - 2 * hs[0] - hs[1])
    return total


def expected_two_paths_by_node_triples(params):
    sizes = [params.b ** h for h in range(params.H + 1)]
    level_of = np.repeat(np.arange(params.H + 1), sizes)
    n = level_of.size
    total = 0.0
    c = params.c
    for a, b, d in itertools.combinations(range(n), 3):
        for center, x, y in ((a, b, d), (b, a, d), (d, a, b)):
            f1 = c ** (-1.0 - min(level_of[center], level_of[x]))
            f2 = c ** (-1.0 - min(level_of[center], level_of[y]))
            total += f1 * f2
    return total


def domination_level_by_direct_products(params):
    """Same Markov bound as the library, coded without log space."""
    b, c, H = params.b, params.c, params.H
    for tau in range(H + 1):
        q = 1.0
        for r in range(tau + 1):
            q *= (1.0 - c ** (-r - 1.0)) ** (b ** r)
        tail = sum(b ** h for h in range(tau + 1, H + 1))
        if q * tail <= b ** (-H):
            return tau
    return H


def random_graph(rng, n, p):
    """Plain Bernoulli graph as an (edges, n) pair."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p]
    return edges


def finite_difference_gradient(f, x, eps=1e-6):
    grad = np.zeros_like(x, dtype=float)
    for i in range(x.size):
        up = x.copy()
        down = x.copy()
        up[i] += eps
        down[i] -= eps
        grad[i] = (f(up) - f(down)) / (2 * eps)
    return grad
