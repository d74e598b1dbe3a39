"""Point clouds, neighborhood graphs, and basic graph queries.

A point cloud is an ``(m, D)`` float array.  A neighborhood graph
connects nearby points with edges weighted by Euclidean length; all
downstream geometry (chart growth, geodesics, embeddings) happens on
this graph rather than on the raw cloud.  Vertices are always the row
indices of the originating cloud, so a :class:`Subgraph` can be traced
back to concrete points at any time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.spatial.distance import cdist

from .errors import ParameterError, StructuralError

__all__ = [
    "PointCloud",
    "NeighborhoodGraph",
    "Subgraph",
    "as_point_cloud",
    "build_knn_graph",
    "build_epsilon_graph",
    "connected_components",
    "shortest_path_distances",
    "hop_distance_matrix",
]


PointCloud = np.ndarray
"""Alias for an ``(m, D)`` float64 array of ambient points."""


def as_point_cloud(points: np.ndarray) -> PointCloud:
    """Validate and normalize an array into an ``(m, D)`` float64 cloud.

    Raises
    ------
    ParameterError
        If the array is not 2-d, is empty, or contains non-finite values.
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2:
        raise ParameterError(f"point cloud must be 2-d, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ParameterError(f"point cloud must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("point cloud contains non-finite values")
    return arr


def _canonical_edges(edges: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort edge rows as (lo, hi) pairs in lexicographic order."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    weights = np.asarray(weights, dtype=np.float64).reshape(-1)
    if edges.shape[0] != weights.shape[0]:
        raise ParameterError("edges and weights length mismatch")
    if edges.shape[0] == 0:
        return edges, weights
    lo = np.minimum(edges[:, 0], edges[:, 1])
    hi = np.maximum(edges[:, 0], edges[:, 1])
    order = np.lexsort((hi, lo))
    return np.column_stack([lo[order], hi[order]]), weights[order]


@dataclass(frozen=True)
class Subgraph:
    """Induced piece of a neighborhood graph.

    Attributes
    ----------
    vertices : np.ndarray
        Sorted original point indices present in this subgraph.
    edges : np.ndarray
        ``(E, 2)`` array of vertex pairs (original indices, lo < hi,
        lexicographically sorted).
    weights : np.ndarray
        ``(E,)`` Euclidean edge lengths matching ``edges`` rows.
    """

    vertices: np.ndarray
    edges: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        verts = np.unique(np.asarray(self.vertices, dtype=np.int64))
        edges, weights = _canonical_edges(self.edges, self.weights)
        if edges.shape[0]:
            present = np.isin(edges, verts)
            if not present.all():
                raise ParameterError("subgraph edge references a vertex outside the subgraph")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ParameterError("self-loops are not allowed")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    @property
    def vertex_count(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    def local_index(self) -> dict[int, int]:
        """Map original vertex id -> position in ``self.vertices``."""
        return {int(v): i for i, v in enumerate(self.vertices)}

    def local_csr(self, weighted: bool = True) -> sparse.csr_matrix:
        """Symmetric CSR adjacency over local indices 0..n-1."""
        n = self.vertex_count
        if self.edge_count == 0:
            return sparse.csr_matrix((n, n))
        local = np.searchsorted(self.vertices, self.edges)
        data = self.weights if weighted else np.ones(self.edge_count)
        rows = np.concatenate([local[:, 0], local[:, 1]])
        cols = np.concatenate([local[:, 1], local[:, 0]])
        vals = np.concatenate([data, data])
        return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))

    def adjacency_lists(self) -> list[np.ndarray]:
        """Sorted neighbor arrays in local indices, one per local vertex."""
        n = self.vertex_count
        out: list[list[int]] = [[] for _ in range(n)]
        if self.edge_count:
            local = np.searchsorted(self.vertices, self.edges)
            for a, b in local:
                out[a].append(int(b))
                out[b].append(int(a))
        return [np.array(sorted(nbrs), dtype=np.int64) for nbrs in out]


@dataclass(frozen=True)
class NeighborhoodGraph:
    """Weighted undirected graph over all points of a cloud.

    Vertices are exactly ``0..point_count-1``; edges carry Euclidean
    lengths.  Construction goes through :func:`build_knn_graph` or
    :func:`build_epsilon_graph`.
    """

    point_count: int
    edges: np.ndarray
    weights: np.ndarray
    _neighbor_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        edges, weights = _canonical_edges(self.edges, self.weights)
        if edges.shape[0]:
            if edges.min() < 0 or edges.max() >= self.point_count:
                raise ParameterError("edge endpoint outside vertex range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ParameterError("self-loops are not allowed")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    def full_subgraph(self) -> Subgraph:
        return Subgraph(np.arange(self.point_count, dtype=np.int64), self.edges, self.weights)

    def neighbor_sets(self) -> list[set[int]]:
        """Neighbor sets by vertex id (cached, do not mutate)."""
        cached = self._neighbor_cache.get("sets")
        if cached is None:
            cached = [set() for _ in range(self.point_count)]
            for (a, b) in self.edges:
                cached[int(a)].add(int(b))
                cached[int(b)].add(int(a))
            self._neighbor_cache["sets"] = cached
        return cached

    def induced(self, vertices: np.ndarray) -> Subgraph:
        """Subgraph on ``vertices`` with every edge joining two of them."""
        verts = np.unique(np.asarray(vertices, dtype=np.int64))
        if verts.shape[0] and (verts[0] < 0 or verts[-1] >= self.point_count):
            raise ParameterError("vertex id outside graph range")
        if self.edge_count == 0 or verts.shape[0] == 0:
            return Subgraph(verts, np.empty((0, 2), dtype=np.int64), np.empty(0))
        keep = np.isin(self.edges[:, 0], verts) & np.isin(self.edges[:, 1], verts)
        return Subgraph(verts, self.edges[keep], self.weights[keep])


def _pairwise(cloud: PointCloud) -> np.ndarray:
    return cdist(cloud, cloud)


def build_knn_graph(cloud: PointCloud, k: int) -> NeighborhoodGraph:
    """Symmetrized k-nearest-neighbor graph.

    Vertex ``i`` proposes edges to its ``k`` nearest other points
    (distance ties broken toward the lower point index), and an edge
    exists when either endpoint proposed it.  Edge weight is the
    Euclidean distance between the endpoints.

    Parameters
    ----------
    cloud : PointCloud
        ``(m, D)`` points, ``m >= 2``.
    k : int
        Neighbors per point, ``1 <= k < m``.
    """
    cloud = as_point_cloud(cloud)
    m = cloud.shape[0]
    if not 1 <= k < m:
        raise ParameterError(f"k must satisfy 1 <= k < m, got k={k}, m={m}")
    dist = _pairwise(cloud)
    idx = np.arange(m)
    pair_set: set[tuple[int, int]] = set()
    for i in range(m):
        # Sort by (distance, index) so equidistant neighbors resolve to
        # the lower index, then drop the point itself.
        order = np.lexsort((idx, dist[i]))
        order = order[order != i][:k]
        for j in order:
            pair_set.add((min(i, int(j)), max(i, int(j))))
    pairs = np.array(sorted(pair_set), dtype=np.int64).reshape(-1, 2)
    weights = dist[pairs[:, 0], pairs[:, 1]]
    return NeighborhoodGraph(m, pairs, weights)


def build_epsilon_graph(cloud: PointCloud, epsilon: float) -> NeighborhoodGraph:
    """Graph joining every pair of points within distance ``epsilon``."""
    cloud = as_point_cloud(cloud)
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    dist = _pairwise(cloud)
    iu = np.triu_indices(cloud.shape[0], k=1)
    keep = dist[iu] <= epsilon
    pairs = np.column_stack([iu[0][keep], iu[1][keep]]).astype(np.int64)
    return NeighborhoodGraph(cloud.shape[0], pairs, dist[iu][keep])


def connected_components(sub: Subgraph) -> list[np.ndarray]:
    """Connected components as sorted vertex arrays.

    Components are ordered by their smallest contained vertex id, so the
    result is deterministic for a given subgraph.
    """
    n = sub.vertex_count
    if n == 0:
        return []
    _, labels = csgraph.connected_components(sub.local_csr(weighted=False), directed=False)
    groups: dict[int, list[int]] = {}
    for local, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(local)
    comps = [sub.vertices[np.array(g, dtype=np.int64)] for g in groups.values()]
    comps.sort(key=lambda arr: int(arr[0]))
    return comps


def shortest_path_distances(sub: Subgraph, sources: np.ndarray | None = None) -> np.ndarray:
    """Weighted geodesic distances within a subgraph.

    Parameters
    ----------
    sub : Subgraph
        Graph to measure in.
    sources : array-like of int, optional
        Original vertex ids to start from; defaults to every vertex.

    Returns
    -------
    np.ndarray
        ``(len(sources), n)`` matrix; column order matches
        ``sub.vertices``.

    Raises
    ------
    StructuralError
        If any listed source cannot reach some vertex (the subgraph is
        disconnected from the sources' point of view).
    """
    if sub.vertex_count == 0:
        raise ParameterError("cannot measure distances in an empty subgraph")
    if sources is None:
        src = np.arange(sub.vertex_count, dtype=np.int64)
    else:
        sources = np.asarray(sources, dtype=np.int64).reshape(-1)
        pos = np.searchsorted(sub.vertices, sources)
        bad = (pos >= sub.vertex_count) | (sub.vertices[np.clip(pos, 0, sub.vertex_count - 1)] != sources)
        if bad.any():
            raise ParameterError(f"source vertex {int(sources[bad][0])} not in subgraph")
        src = pos
    dist = csgraph.dijkstra(sub.local_csr(weighted=True), directed=False, indices=src)
    dist = np.atleast_2d(dist)
    if np.isinf(dist).any():
        r, c = np.argwhere(np.isinf(dist))[0]
        raise StructuralError(
            "unreachable vertex: no path from "
            f"{int(sub.vertices[src[r]])} to {int(sub.vertices[c])}; "
            f"subgraph has {len(connected_components(sub))} connected components"
        )
    return dist


def hop_distance_matrix(sub: Subgraph) -> np.ndarray:
    """All-pairs hop counts (edges traversed), ``-1`` for unreachable.

    Used by cycle analysis, which works on unweighted topology.
    """
    n = sub.vertex_count
    if n == 0:
        return np.empty((0, 0), dtype=np.int64)
    dist = csgraph.shortest_path(sub.local_csr(weighted=False), method="D", unweighted=True, directed=False)
    out = np.where(np.isinf(dist), -1, dist).astype(np.int64)
    return out
