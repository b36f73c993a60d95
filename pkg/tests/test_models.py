import itertools
import math

import numpy as np
import pytest

from igam import (
    DeltaIgamParams,
    HeightAssignment,
    Igam2Params,
    IgamParams,
    ModelError,
    full_tree_node_count,
)
from oracles import (
    domination_level_by_direct_products,
    expected_degree_by_pair_sum,
    expected_edges_by_pair_sum,
    expected_triangles_by_node_triples,
    expected_two_paths_by_node_triples,
)


class TestTreeCounts:
    @pytest.mark.parametrize("b,H,want", [(2, 0, 1), (3, 6, 1093), (3, 2, 13)])
    def test_counts(self, b, H, want):
        assert full_tree_node_count(b, H) == want

    def test_overflow(self):
        with pytest.raises(OverflowError):
            full_tree_node_count(2, 100)

    def test_bad_args(self):
        with pytest.raises(ModelError):
            full_tree_node_count(1, 3)

    def test_perfect_tree_levels(self):
        h = HeightAssignment.perfect_tree(3, 2)
        assert h.n == 13
        assert list(h.level_sizes()) == [1, 3, 9]
        assert h.heights[0] == 0 and h.heights[-1] == 2


class TestParamsValidation:
    def test_c_range(self):
        with pytest.raises(ModelError):
            IgamParams(3, 1.0, 4)
        with pytest.raises(ModelError):
            IgamParams(3, 3.0, 4)
        with pytest.raises(ModelError):
            IgamParams(3, 3.5, 4)

    def test_igam2_ordering(self):
        with pytest.raises(ModelError):
            Igam2Params(3, 2.5, 1.5, 2, 6)
        with pytest.raises(ModelError):
            Igam2Params(3, 1.5, 2.5, 6, 6)
        Igam2Params(3, 1.5, 1.5, 2, 6)  # equal scales reduce to the base law

    def test_config_round_trip(self):
        p = IgamParams(3, 2.0, 6)
        assert IgamParams.from_dict(p.to_dict()) == p
        p2 = Igam2Params(3, 1.5, 2.5, 2, 6)
        assert Igam2Params.from_dict(p2.to_dict()) == p2


class TestEdgeProbability:
    def test_root_leaf_paper_values(self):
        p = IgamParams(3, 2.0, 6)
        assert p.edge_probability(0, p.H) == pytest.approx(0.5)
        assert p.edge_probability(1, p.H) == pytest.approx(0.25)

    def test_top_pair(self):
        p = IgamParams(4, 3.0, 5)
        assert p.edge_probability(0, 0) == pytest.approx(1 / 3)

    def test_symmetric_monotone_bounded(self):
        p = IgamParams(3, 2.0, 5)
        for hu in range(6):
            for hv in range(6):
                f = p.edge_probability(hu, hv)
                assert f == p.edge_probability(hv, hu)
                assert f <= 1 / p.c < 1
        values = [p.edge_probability(h, 5) for h in range(6)]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_out_of_range(self):
        p = IgamParams(3, 2.0, 4)
        with pytest.raises(ModelError):
            p.edge_probability(0, 5)


class TestIgam2Law:
    def test_direct_substitution(self):
        p = Igam2Params(10, 1.5, 2.5, 2, 6)
        assert p.edge_probability(1, 1) == pytest.approx(1.5 ** -2)
        assert p.edge_probability(1, 4) == pytest.approx(2.5 ** -2)
        assert p.edge_probability(3, 5) == pytest.approx(2.5 ** -4)

    def test_boundary_uses_core_scale(self):
        p = Igam2Params(3, 1.5, 2.5, 5, 6)
        # both nodes at H0 stay in the core regime; the pair (H, H) does not
        assert p.edge_probability(5, 5) == pytest.approx(1.5 ** -6)
        assert p.edge_probability(6, 6) == pytest.approx(2.5 ** -7)

    def test_blockmodel_ordering(self):
        p = Igam2Params(3, 1.5, 2.5, 2, 6)
        for h1 in range(0, 3):
            for h2 in range(h1, 3):
                for h3 in range(3, 7):
                    for h4 in range(h3, 7):
                        cc = p.edge_probability(h1, h2)
                        cp = p.edge_probability(h1, h3)
                        pp = p.edge_probability(h3, h4)
                        assert cc > cp > pp


class TestDeltaLaw:
    def test_equal_heights_identity(self):
        p = DeltaIgamParams(IgamParams(3, 2.0, 8), delta=1.0)
        for h in range(1, 8):
            assert p.edge_probability(h, h) == pytest.approx(2.0 ** (-1 - h))

    def test_arithmetic_mean(self):
        p = DeltaIgamParams(IgamParams(3, 2.0, 8), delta=1.0)
        assert p.edge_probability(1, 3) == pytest.approx(0.125)

    def test_zero_height_singular_case(self):
        p = DeltaIgamParams(IgamParams(3, 2.0, 8), delta=-3.0)
        assert p.edge_probability(0, 4) == pytest.approx(2.0 ** -1)

    def test_delta_zero_rejected(self):
        with pytest.raises(ModelError):
            DeltaIgamParams(IgamParams(3, 2.0, 8), delta=0.0)

    def test_limit_gap_shrinks_monotonically(self):
        base = IgamParams(5, 4.0, 10)

        def sup_gap(delta):
            p = DeltaIgamParams(base, delta)
            return max(
                abs(p.edge_probability(hu, hv)
                    - base.c ** (-1.0 - min(hu, hv)))
                for hu in range(1, 11) for hv in range(1, 11))

        gaps = [sup_gap(d) for d in (-10.0, -50.0, -1000.0, -1e6)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-6

    def test_extreme_delta_is_stable(self):
        p = DeltaIgamParams(IgamParams(3, 2.0, 8), delta=-1e6)
        val = p.edge_probability(2, 7)
        assert math.isfinite(val)
        assert val == pytest.approx(2.0 ** -3, abs=1e-5)


class TestExpectedDegree:
    def test_root_sees_everyone(self):
        p = IgamParams(3, 2.0, 4)
        assert p.expected_degree(0) == pytest.approx(p.n / p.c)

    def test_three_term_sum(self):
        p = IgamParams(3, 2.0, 2)
        assert p.expected_degree(1) == pytest.approx(3.5)

    def test_exact_variant_matches_pair_sum(self):
        p = IgamParams(3, 2.0, 3)
        for h in range(4):
            want = expected_degree_by_pair_sum(p, h)
            assert p.expected_degree(h, include_self=False) == pytest.approx(want)

    def test_ratio_approaches_scale(self):
        p = IgamParams(3, 2.0, 20)
        for h in range(3):
            ratio = p.expected_degree(h) / p.expected_degree(h + 1)
            assert abs(ratio - p.c) < 0.05


class TestExpectedEdges:
    def test_single_node(self):
        assert IgamParams(2, 1.5, 0).expected_edges() == 0.0

    def test_tiny_tree_brute_force(self):
        p = IgamParams(3, 2.0, 1)
        assert expected_edges_by_pair_sum(p) == pytest.approx(2.25)
        assert p.expected_edges() == pytest.approx(2.25)
        # the looser convention keeps each node's own level slot
        correction = 0.5 * sum(p.b**h * p.c ** (-h - 1.0) for h in range(2))
        assert p.expected_edges(include_self_pairs=True) == pytest.approx(
            2.25 + correction)

    def test_growth_rate(self):
        lo = IgamParams(3, 2.0, 20).expected_edges()
        hi = IgamParams(3, 2.0, 21).expected_edges()
        assert abs(hi / lo - 9 / 2) / (9 / 2) < 0.02


class TestExpectedTriples:
    def test_single_node_no_triangles(self):
        p = IgamParams(3, 2.0, 0)
        assert p.expected_triangles() == 0.0
        assert p.expected_two_paths() == 0.0

    def test_matches_node_triple_enumeration(self):
        p = IgamParams(2, 1.5, 2)
        assert p.expected_triangles() == pytest.approx(
            expected_triangles_by_node_triples(p))
        assert p.expected_two_paths() == pytest.approx(
            expected_two_paths_by_node_triples(p))
        p = IgamParams(3, 2.0, 2)
        assert p.expected_triangles() == pytest.approx(
            expected_triangles_by_node_triples(p))
        assert p.expected_two_paths() == pytest.approx(
            expected_two_paths_by_node_triples(p))

    def test_clustering_ratio_decays_with_height(self):
        ratios = [IgamParams(3, 2.0, H).expected_triangles()
                  / IgamParams(3, 2.0, H).expected_two_paths()
                  for H in (4, 6, 8)]
        assert ratios[0] > ratios[1] > ratios[2]


class TestDominationLevel:
    def test_single_factor(self):
        p = IgamParams(3, 1.5, 8)
        assert p.undominated_probability(0) == pytest.approx(1 - 1 / p.c)

    @pytest.mark.parametrize("b,c,H", [(3, 1.5, 8), (3, 1.5, 6), (2, 1.3, 10),
                                       (3, 2.0, 6), (4, 1.7, 7)])
    def test_matches_independent_evaluator(self, b, c, H):
        p = IgamParams(b, c, H)
        assert p.domination_level() == domination_level_by_direct_products(p)

    def test_capped_at_height(self):
        # scale close to the fanout never certifies domination early
        p = IgamParams(3, 2.9, 4)
        assert p.domination_level() <= p.H


class TestRescale:
    def test_identity(self):
        p = IgamParams(3, 2.0, 6)
        assert p.rescaled(1.0) == p

    def test_square(self):
        p = IgamParams(3, 2.0, 6)
        q = p.rescaled(2.0)
        assert (q.b, q.c, q.H) == (9, 4.0, 6)

    def test_violation_rejected(self):
        p = IgamParams(3, 2.0, 6)
        with pytest.raises(ModelError):
            p.rescaled(0.05)


class TestConductancePrediction:
    def test_cut_edges_formula_matches_direct_sum(self):
        p = IgamParams(3, 2.0, 5)
        for tau in range(p.H):
            direct = sum(
                p.b**r * p.b**s * p.c ** (-1.0 - min(r, s))
                for r in range(tau + 1)
                for s in range(tau + 1, p.H + 1))
            assert p.expected_cut_edges(tau) == pytest.approx(direct)
