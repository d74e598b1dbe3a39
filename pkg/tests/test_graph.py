"""Neighborhood graph construction and basic queries."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from atlaslearn.errors import ParameterError, StructuralError
from atlaslearn.graph import (
    Subgraph,
    as_point_cloud,
    build_epsilon_graph,
    build_knn_graph,
    connected_components,
    hop_distance_matrix,
    shortest_path_distances,
)
from atlaslearn.synthetic import sample_sphere
from conftest import make_subgraph, random_connected_graph

UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])


def edge_set(graph):
    return {tuple(e) for e in graph.edges}


class TestPointCloud:
    def test_accepts_plain_lists(self):
        cloud = as_point_cloud([[0.0, 1.0], [2.0, 3.0]])
        assert cloud.shape == (2, 2)
        assert cloud.dtype == np.float64

    @pytest.mark.parametrize(
        "bad", [np.zeros(3), np.zeros((0, 2)), np.zeros((2, 0)), [[np.nan, 0.0]]]
    )
    def test_rejects_malformed(self, bad):
        with pytest.raises(ParameterError):
            as_point_cloud(bad)


class TestKnnGraph:
    def test_three_collinear_points_k1(self):
        cloud = np.array([[0.0], [1.0], [2.0]])
        g = build_knn_graph(cloud, 1)
        assert edge_set(g) == {(0, 1), (1, 2)}
        assert np.allclose(g.weights, 1.0)

    def test_unit_square_k2_has_sides_only(self):
        g = build_knn_graph(UNIT_SQUARE, 2)
        assert edge_set(g) == {(0, 1), (0, 2), (1, 3), (2, 3)}
        assert np.allclose(g.weights, 1.0)

    def test_sphere_sample_is_connected(self):
        cloud = sample_sphere(1000, seed=0).cloud
        g = build_knn_graph(cloud, 10)
        comps = connected_components(g.full_subgraph())
        assert len(comps) == 1

    def test_k_out_of_range(self):
        cloud = np.zeros((4, 2))
        with pytest.raises(ParameterError):
            build_knn_graph(cloud, 4)
        with pytest.raises(ParameterError):
            build_knn_graph(cloud, 0)

    def test_duplicate_points_allowed(self):
        cloud = np.array([[0.0, 0.0], [0.0, 0.0], [5.0, 0.0]])
        g = build_knn_graph(cloud, 1)
        assert (0, 1) in edge_set(g)
        w = dict(zip(map(tuple, g.edges), g.weights))
        assert w[(0, 1)] == 0.0

    def test_tie_break_prefers_lower_index(self):
        # 0 is equidistant from 2 and 3, so with k=1 it must propose 2;
        # 3 pairs off with the decoy 4 so no edge reaches 0 from there.
        cloud = np.array([[0.0, 0.0], [5.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [-1.4, 0.0]])
        g = build_knn_graph(cloud, 1)
        assert (0, 2) in edge_set(g)
        assert (0, 3) not in edge_set(g)

    @given(st.integers(0, 2**32 - 1), st.integers(5, 25), st.integers(1, 4))
    @settings(max_examples=25, deadline=None)
    def test_weights_match_distances(self, seed, m, k):
        rng = np.random.default_rng(seed)
        cloud = rng.normal(size=(m, 3))
        g = build_knn_graph(cloud, min(k, m - 1))
        for (u, v), w in zip(g.edges, g.weights):
            d = float(np.linalg.norm(cloud[u] - cloud[v]))
            assert abs(w - d) <= 1e-12 * max(1.0, d)

    @given(st.integers(0, 2**32 - 1), st.integers(5, 25), st.integers(1, 4))
    @settings(max_examples=25, deadline=None)
    def test_every_vertex_has_k_neighbors_at_least(self, seed, m, k):
        # Union symmetrization can only add neighbors beyond the k proposed.
        rng = np.random.default_rng(seed)
        cloud = rng.normal(size=(m, 2))
        k = min(k, m - 1)
        g = build_knn_graph(cloud, k)
        degree = np.zeros(m, dtype=int)
        for u, v in g.edges:
            degree[u] += 1
            degree[v] += 1
        assert (degree >= k).all()


class TestEpsilonGraph:
    def test_line_points_eps_1_5(self):
        cloud = np.array([[0.0], [1.0], [3.0]])
        g = build_epsilon_graph(cloud, 1.5)
        assert edge_set(g) == {(0, 1)}

    def test_eps_above_diameter_gives_complete_graph(self):
        rng = np.random.default_rng(7)
        cloud = rng.normal(size=(8, 3))
        diam = max(
            np.linalg.norm(a - b) for a in cloud for b in cloud
        )
        g = build_epsilon_graph(cloud, float(diam) + 1.0)
        assert g.edge_count == 8 * 7 // 2

    def test_unit_square_eps_1_2(self):
        g = build_epsilon_graph(UNIT_SQUARE, 1.2)
        assert edge_set(g) == {(0, 1), (0, 2), (1, 3), (2, 3)}

    def test_nonpositive_epsilon_rejected(self):
        with pytest.raises(ParameterError):
            build_epsilon_graph(UNIT_SQUARE, 0.0)


class TestSubgraph:
    def test_edges_canonicalized(self):
        sub = make_subgraph(3, [(2, 0), (1, 0)])
        assert sub.edges.tolist() == [[0, 1], [0, 2]]

    def test_edge_outside_vertices_rejected(self):
        with pytest.raises(ParameterError):
            Subgraph(np.array([0, 1]), np.array([[0, 2]]), np.array([1.0]))

    def test_self_loop_rejected(self):
        with pytest.raises(ParameterError):
            make_subgraph(2, [(1, 1)])

    def test_induced_keeps_all_inner_edges(self):
        g = build_knn_graph(UNIT_SQUARE, 2)
        sub = g.induced(np.array([0, 1, 3]))
        assert {tuple(e) for e in sub.edges} == {(0, 1), (1, 3)}


class TestConnectedComponents:
    def test_single_path(self):
        comps = connected_components(make_subgraph(3, [(0, 1), (1, 2)]))
        assert [c.tolist() for c in comps] == [[0, 1, 2]]

    def test_two_pairs_ordered_by_smallest_index(self):
        comps = connected_components(make_subgraph(4, [(2, 3), (0, 1)]))
        assert [c.tolist() for c in comps] == [[0, 1], [2, 3]]

    def test_empty_subgraph(self):
        sub = Subgraph(np.array([], dtype=np.int64), np.empty((0, 2), dtype=np.int64), np.empty(0))
        assert connected_components(sub) == []

    def test_isolated_vertices_are_components(self):
        comps = connected_components(make_subgraph(3, [(0, 2)]))
        assert [c.tolist() for c in comps] == [[0, 2], [1]]


class TestShortestPaths:
    def test_unit_path(self):
        sub = make_subgraph(3, [(0, 1), (1, 2)])
        D = shortest_path_distances(sub)
        assert D[0, 2] == pytest.approx(2.0)
        assert np.allclose(D, D.T)
        assert np.allclose(np.diag(D), 0.0)

    def test_four_cycle(self):
        sub = make_subgraph(4, cycle_edges_4())
        D = shortest_path_distances(sub)
        assert D[0, 2] == pytest.approx(2.0)

    def test_sources_subset(self):
        sub = make_subgraph(4, [(0, 1), (1, 2), (2, 3)])
        D = shortest_path_distances(sub, np.array([0, 3]))
        assert D.shape == (2, 4)
        assert D[0, 3] == pytest.approx(3.0)
        assert D[1, 0] == pytest.approx(3.0)

    def test_source_not_in_subgraph(self):
        sub = make_subgraph(3, [(0, 1), (1, 2)])
        with pytest.raises(ParameterError):
            shortest_path_distances(sub, np.array([5]))

    def test_disconnected_raises_structural(self):
        sub = make_subgraph(4, [(0, 1), (2, 3)])
        with pytest.raises(StructuralError):
            shortest_path_distances(sub)

    @given(st.integers(0, 2**32 - 1), st.integers(5, 50))
    @settings(max_examples=20, deadline=None)
    def test_matches_floyd_warshall(self, seed, n):
        rng = np.random.default_rng(seed)
        n, edges, weights = random_connected_graph(rng, n)
        sub = make_subgraph(n, edges, weights)
        D = shortest_path_distances(sub)
        ref = oracles.floyd_warshall(n, edges, weights)
        assert np.abs(D - ref).max() < 1e-9

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=15, deadline=None)
    def test_triangle_inequality(self, seed):
        rng = np.random.default_rng(seed)
        n, edges, weights = random_connected_graph(rng, 30)
        D = shortest_path_distances(make_subgraph(n, edges, weights))
        trips = rng.integers(n, size=(200, 3))
        for u, v, w in trips:
            assert D[u, w] <= D[u, v] + D[v, w] + 1e-9


class TestHopMatrix:
    def test_matches_bfs_oracle(self, rng):
        n, edges, weights = random_connected_graph(rng, 40)
        sub = make_subgraph(n, edges, weights)
        hops = hop_distance_matrix(sub)
        ref = oracles.bfs_hops(n, edges)
        assert hops.tolist() == ref

    def test_unreachable_marked_minus_one(self):
        sub = make_subgraph(3, [(0, 1)])
        hops = hop_distance_matrix(sub)
        assert hops[0, 2] == -1
        assert hops[2, 0] == -1


def cycle_edges_4():
    return [(0, 1), (1, 2), (2, 3), (3, 0)]
