"""Shared graph builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from atlaslearn.graph import NeighborhoodGraph, Subgraph


def make_subgraph(n: int, edges, weights=None) -> Subgraph:
    """Subgraph on vertices 0..n-1 with unit weights by default."""
    edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    if weights is None:
        weights = np.ones(edges.shape[0])
    return Subgraph(np.arange(n, dtype=np.int64), edges, np.asarray(weights, float))


def make_graph(n: int, edges, weights=None) -> NeighborhoodGraph:
    edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    if weights is None:
        weights = np.ones(edges.shape[0])
    return NeighborhoodGraph(n, edges, np.asarray(weights, float))


def cycle_edges(n: int, offset: int = 0):
    return [(offset + i, offset + (i + 1) % n) for i in range(n)]


def path_edges(n: int, offset: int = 0):
    return [(offset + i, offset + i + 1) for i in range(n - 1)]


def grid_graph(rows: int, cols: int, diagonals: bool = False) -> NeighborhoodGraph:
    """Unit lattice on rows x cols vertices, optionally triangulated."""
    def vid(r, c):
        return r * cols + c

    edges = []
    weights = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
                weights.append(1.0)
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
                weights.append(1.0)
            if diagonals and r + 1 < rows and c + 1 < cols:
                edges.append((vid(r, c), vid(r + 1, c + 1)))
                weights.append(float(np.sqrt(2)))
    return NeighborhoodGraph(rows * cols, np.array(edges), np.array(weights))


def random_connected_graph(rng: np.random.Generator, n: int, extra_edge_prob: float = 0.15):
    """Random spanning tree plus extra edges; returns (n, edges, weights)."""
    edges = []
    for v in range(1, n):
        u = int(rng.integers(v))
        edges.append((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_edge_prob:
                edges.append((u, v))
    weights = rng.uniform(0.1, 2.0, size=len(edges))
    return n, edges, weights


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
