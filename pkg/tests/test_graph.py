import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igam import (
    DisconnectedGraphError,
    Graph,
    InvalidCutError,
    MalformedInputError,
    UnsupportedOperationError,
    conductance,
    count_triangles,
    count_two_paths,
    diameter,
    from_edge_list,
    gcc,
    giant_component,
    paper_ratio,
    parse_edge_list,
    write_edge_list,
    read_edge_list,
)
from oracles import (
    diameter_by_full_bfs,
    random_graph,
    triangles_by_enumeration,
    two_paths_by_enumeration,
)


def star(k):
    return from_edge_list([(0, i) for i in range(1, k + 1)])


def path(n):
    return from_edge_list([(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return from_edge_list([(i, (i + 1) % n) for i in range(n)])


small_graphs = st.integers(2, 12).flatmap(
    lambda n: st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
        max_size=3 * n,
    ).map(lambda edges: (n, edges))
)


class TestConstruction:
    def test_dedup_and_self_loops(self):
        g = from_edge_list([(0, 1), (1, 0), (1, 1)], n=3)
        assert g.n == 3
        assert g.m == 1
        assert list(g.neighbors(2)) == []

    def test_empty_single_node(self):
        g = from_edge_list([], n=1)
        assert (g.n, g.m) == (1, 0)

    def test_id_out_of_range(self):
        with pytest.raises(MalformedInputError):
            from_edge_list([(0, 5)], n=3)

    def test_negative_id(self):
        with pytest.raises(MalformedInputError):
            from_edge_list([(-1, 2)])

    def test_neighbors_sorted(self):
        g = from_edge_list([(0, 3), (0, 1), (0, 2)])
        assert list(g.neighbors(0)) == [1, 2, 3]

    @given(small_graphs)
    @settings(max_examples=60, deadline=None)
    def test_degree_sum_is_twice_edges(self, spec):
        n, edges = spec
        g = from_edge_list(edges, n=n)
        assert int(g.degrees().sum()) == 2 * g.m


class TestEdgeListText:
    def test_parse_integer_ids(self):
        edges, labels = parse_edge_list(["# comment", "0 1", "2,3", "% other"])
        assert edges == [(0, 1), (2, 3)]
        assert labels is None

    def test_parse_string_ids_first_seen_order(self):
        edges, labels = parse_edge_list(["alice bob", "carol alice"])
        assert edges == [(0, 1), (2, 0)]
        assert labels == ["alice", "bob", "carol"]

    def test_parse_error_carries_line_number(self):
        with pytest.raises(MalformedInputError, match="line 2"):
            parse_edge_list(["0 1", "garbage-single-token"])

    def test_round_trip(self, tmp_path):
        g = from_edge_list([(0, 1), (1, 2), (0, 4)], n=5)
        path_ = tmp_path / "g.edges"
        write_edge_list(path_, g)
        edges, labels = read_edge_list(path_)
        g2 = from_edge_list(edges, n=5)
        assert np.array_equal(g.edges(), g2.edges())

    def test_missing_file(self):
        with pytest.raises(MalformedInputError):
            read_edge_list("/nonexistent/file.edges")


class TestGiantComponent:
    def test_two_triangles_tie_break(self):
        g = from_edge_list([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
        giant, old_to_new = giant_component(g)
        assert giant.n == 3
        # tie broken toward the component containing node 0
        assert old_to_new[0] >= 0 and old_to_new[3] == -1

    def test_connected_identity(self):
        g = path(5)
        giant, old_to_new = giant_component(g)
        assert giant.n == 5
        assert np.array_equal(old_to_new, np.arange(5))

    def test_giant_covers_most_nodes_on_model_samples(self):
        from igam import IgamParams, sample_igam

        p = IgamParams(3, 2.0, 6)
        for seed in range(10):
            g, _ = sample_igam(p, seed)
            giant, _ = giant_component(g)
            assert giant.n >= 0.99 * g.n


class TestDiameter:
    def test_star(self):
        assert diameter(star(4)) == 2

    def test_path(self):
        assert diameter(path(5)) == 4

    def test_disconnected_raises(self):
        g = from_edge_list([(0, 1)], n=3)
        with pytest.raises(DisconnectedGraphError, match="giant"):
            diameter(g)

    def test_methods_agree_with_full_bfs(self, rng):
        for _ in range(40):
            n = int(rng.integers(2, 30))
            edges = random_graph(rng, n, 0.25)
            g = from_edge_list(edges, n=n)
            comp, _ = giant_component(g)
            want = diameter_by_full_bfs(comp)
            assert diameter(comp, method="bfs") == want
            assert diameter(comp, method="bounds") == want

    def test_relabeling_invariance(self, rng):
        n = 15
        edges = random_graph(rng, n, 0.3)
        g, _ = giant_component(from_edge_list(edges, n=n))
        perm = rng.permutation(g.n)
        relabeled = from_edge_list([(perm[u], perm[v]) for u, v in g.edges()],
                                   n=g.n)
        assert diameter(g) == diameter(relabeled)


class TestTriangles:
    def test_triangle(self):
        g = cycle(3)
        assert count_triangles(g) == 1
        assert count_two_paths(g) == 3
        assert gcc(g) == 1.0

    def test_path3(self):
        g = path(3)
        assert count_triangles(g) == 0
        assert count_two_paths(g) == 1
        assert gcc(g) == 0.0

    def test_er_graph_matches_enumeration(self, rng):
        edges = random_graph(rng, 10, 0.5)
        g = from_edge_list(edges, n=10)
        assert count_triangles(g) == triangles_by_enumeration(g)
        assert count_two_paths(g) == two_paths_by_enumeration(g)
        want = (3 * triangles_by_enumeration(g) / two_paths_by_enumeration(g))
        assert gcc(g) == pytest.approx(want)

    @given(small_graphs)
    @settings(max_examples=60, deadline=None)
    def test_counts_match_enumeration_property(self, spec):
        n, edges = spec
        g = from_edge_list(edges, n=n)
        assert count_triangles(g) == triangles_by_enumeration(g)
        assert count_two_paths(g) == two_paths_by_enumeration(g)

    def test_paper_ratio_is_third_of_gcc(self):
        g = from_edge_list([(0, 1), (1, 2), (2, 0), (2, 3)])
        assert paper_ratio(g) == pytest.approx(gcc(g) / 3.0)

    def test_directed_rejected(self):
        g = Graph(3, [(0, 1)], directed=True)
        with pytest.raises(UnsupportedOperationError):
            count_triangles(g)
        with pytest.raises(UnsupportedOperationError):
            gcc(g)


class TestConductance:
    def test_k4_singleton(self):
        g = from_edge_list([(u, v) for u in range(4) for v in range(u + 1, 4)])
        assert conductance(g, {0}) == 3.0

    def test_bridge(self):
        g = from_edge_list(
            [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
        assert conductance(g, {0, 1, 2}) == pytest.approx(1 / 3)

    def test_invalid_cuts(self):
        g = path(4)
        with pytest.raises(InvalidCutError):
            conductance(g, set())
        with pytest.raises(InvalidCutError):
            conductance(g, {0, 1, 2, 3})

    def test_complement_symmetry_on_even_split(self, rng):
        for _ in range(20):
            n = 10
            g = from_edge_list(random_graph(rng, n, 0.4), n=n)
            members = set(rng.choice(n, size=5, replace=False).tolist())
            complement = set(range(n)) - members
            assert conductance(g, members) == pytest.approx(
                conductance(g, complement))

    def test_model_cut_matches_expectation(self):
        from igam import IgamParams, sample_igam
        from igam.graph import cut_edges

        p = IgamParams(3, 2.0, 6)
        tau = 2
        expected = p.expected_cut_edges(tau)
        vals = []
        for seed in range(10):
            g, h = sample_igam(p, seed)
            vals.append(cut_edges(g, h.nodes_up_to_level(tau)))
        mean = np.mean(vals)
        assert abs(mean - expected) / expected < 0.2
        # conductance lands within 3x of the scale prediction b^H / c^tau
        core = h.nodes_up_to_level(tau)
        phi = np.mean([conductance(sample_igam(p, s)[0], core)
                       for s in range(10)])
        scale = p.b**p.H / p.c**tau
        assert scale / 3 < phi < scale * 3
