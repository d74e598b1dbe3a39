"""Per-chart embedding: graph geodesics plus classical MDS.

Each chart is flattened independently.  Pairwise shortest-path
distances inside the chart stand in for manifold geodesics, and
classical (Torgerson) multidimensional scaling turns that distance
matrix into d-dimensional coordinates, exactly the recipe ISOMAP
applies globally.  No iterative stress optimization is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atlas import Atlas, ChartDomain
from .errors import DegeneracyError, ParameterError, StructuralError
from .graph import connected_components, shortest_path_distances

__all__ = ["ChartEmbedding", "geodesic_matrix", "classical_mds", "embed_atlas"]


@dataclass(frozen=True)
class ChartEmbedding:
    """Embedded coordinates for one chart.

    Attributes
    ----------
    chart_id : int
        Id of the chart these coordinates belong to.
    dim : int
        Target dimension d.
    vertex_ids : np.ndarray
        Sorted original point indices, one per coordinate row.
    coords : np.ndarray
        ``(n, d)`` embedded coordinates, rows aligned with vertex_ids.
    residual : float
        Fraction of squared eigenvalue mass discarded by keeping only
        the top d eigenpairs (0 = the distances were exactly
        d-dimensional Euclidean).
    """

    chart_id: int
    dim: int
    vertex_ids: np.ndarray
    coords: np.ndarray
    residual: float

    def __post_init__(self) -> None:
        if self.coords.shape != (self.vertex_ids.shape[0], self.dim):
            raise ParameterError(
                f"coords shape {self.coords.shape} inconsistent with "
                f"{self.vertex_ids.shape[0]} vertices and dim {self.dim}"
            )

    def coord_of(self, vertex: int) -> np.ndarray:
        pos = int(np.searchsorted(self.vertex_ids, vertex))
        if pos >= len(self.vertex_ids) or self.vertex_ids[pos] != vertex:
            raise ParameterError(f"vertex {vertex} not in chart {self.chart_id}")
        return self.coords[pos]


def geodesic_matrix(chart: ChartDomain) -> np.ndarray:
    """All-pairs shortest-path distances within one chart.

    Row/column order follows the chart's sorted vertex ids.  The chart
    must be connected; combining guarantees that for pipeline atlases.
    """
    try:
        return shortest_path_distances(chart.domain)
    except StructuralError as exc:
        comps = len(connected_components(chart.domain))
        raise StructuralError(
            f"chart {chart.id} is disconnected ({comps} components): {exc}"
        ) from exc


def classical_mds(D: np.ndarray, d: int) -> tuple[np.ndarray, float]:
    """Coordinates from a distance matrix by double-centered eigensolve.

    Computes B = -1/2 * J D^2 J with J the centering projector, takes
    the top ``d`` eigenpairs of B (symmetric solver), clamps negative
    eigenvalues to zero, and scales eigenvectors by the square roots.
    Columns come out in descending-eigenvalue order; each eigenvector's
    sign is fixed so its largest-magnitude entry is positive, making
    the output independent of eigen-solver conventions.

    Returns
    -------
    (coords, residual)
        ``coords`` is ``(N, d)`` with zero column means; ``residual``
        is the discarded fraction of squared eigenvalue mass.

    Raises
    ------
    DegeneracyError
        If no positive eigenvalue is available among the top d (the
        distances carry no usable geometry).
    """
    D = np.asarray(D, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ParameterError(f"distance matrix must be square, got {D.shape}")
    N = D.shape[0]
    if not 1 <= d < N:
        raise ParameterError(f"target dimension must satisfy 1 <= d < N={N}, got {d}")
    if not np.allclose(D, D.T, rtol=0, atol=1e-9):
        raise ParameterError("distance matrix must be symmetric")
    if np.abs(np.diag(D)).max() > 1e-9:
        raise ParameterError("distance matrix must have a zero diagonal")
    if D.min() < 0:
        raise ParameterError("distances must be nonnegative")

    sq = D * D
    # Double centering without forming J explicitly.
    row = sq.mean(axis=1, keepdims=True)
    col = sq.mean(axis=0, keepdims=True)
    B = -0.5 * (sq - row - col + sq.mean())
    B = 0.5 * (B + B.T)  # enforce exact symmetry for the solver
    eigvals, eigvecs = np.linalg.eigh(B)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]

    top = eigvals[:d]
    if np.all(top <= 0):
        raise DegeneracyError(
            "no positive eigenvalue among the leading ones; distance "
            "matrix is degenerate"
        )
    scaled = eigvecs[:, :d] * np.sqrt(np.maximum(top, 0.0))
    # Deterministic sign: largest-|entry| coordinate of each column positive.
    for c in range(d):
        col_c = scaled[:, c]
        pivot = int(np.argmax(np.abs(col_c)))
        if col_c[pivot] < 0:
            scaled[:, c] = -col_c
    scaled = scaled - scaled.mean(axis=0, keepdims=True)

    total = float(np.sum(eigvals * eigvals))
    if total > 0:
        kept = float(np.sum(top[top > 0] ** 2))
        residual = max(0.0, 1.0 - kept / total)
    else:
        residual = 0.0
    return scaled, residual


def embed_atlas(atlas: Atlas, d: int) -> list[ChartEmbedding]:
    """Embed every chart of an atlas independently at dimension d.

    Raises
    ------
    DegeneracyError
        If some chart has too few vertices for the requested dimension
        (needs at least d+1); the error names the chart.
    """
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}")
    out = []
    for chart in atlas.charts:
        n = chart.domain.vertex_count
        if n <= d:
            raise DegeneracyError(
                f"chart {chart.id} has {n} vertices, too few for dimension {d}"
            )
        D = geodesic_matrix(chart)
        try:
            coords, residual = classical_mds(D, d)
        except DegeneracyError as exc:
            raise DegeneracyError(f"chart {chart.id}: {exc}") from exc
        out.append(
            ChartEmbedding(
                chart_id=chart.id,
                dim=d,
                vertex_ids=chart.domain.vertices.copy(),
                coords=coords,
                residual=residual,
            )
        )
    return out
