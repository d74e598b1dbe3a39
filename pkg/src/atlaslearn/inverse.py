"""Inverse maps: Delaunay triangulation plus barycentric lifting.

A chart's embedding is triangulated once; any query point inside the
convex hull of the embedded vertices then lands in some simplex, gets
unique affine (barycentric) weights there, and is lifted back to
ambient space as the same weighted combination of the simplex
vertices' original points.  Queries outside the hull are refused
rather than extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay as _SciPyDelaunay
from scipy.spatial import QhullError

from .errors import DegeneracyError, OutOfDomainError, ParameterError
from .graph import PointCloud

__all__ = [
    "Triangulation",
    "BarycentricCoords",
    "delaunay",
    "locate",
    "barycentric",
    "lift",
    "empty_circumsphere_slack",
]

_INSIDE_TOL = 1e-9


@dataclass(frozen=True)
class BarycentricCoords:
    """Affine weights of a point with respect to one simplex."""

    lam: np.ndarray

    @property
    def total(self) -> float:
        return float(self.lam.sum())

    def is_inside(self, tol: float = _INSIDE_TOL) -> bool:
        return bool(self.lam.min() >= -tol)


@dataclass(frozen=True)
class Triangulation:
    """Simplicial decomposition of a chart embedding's convex hull.

    ``simplices`` holds local row indices into ``vertex_coords``; each
    row is sorted ascending and rows are in lexicographic order, so the
    structure (and therefore point location's lowest-index tie rule) is
    reproducible no matter how the triangulation was produced.
    """

    dim: int
    simplices: np.ndarray
    vertex_coords: np.ndarray

    def __post_init__(self) -> None:
        coords = np.asarray(self.vertex_coords, dtype=np.float64)
        simp = np.asarray(self.simplices, dtype=np.int64)
        if coords.ndim != 2 or coords.shape[1] != self.dim:
            raise ParameterError(
                f"vertex_coords must be (N, {self.dim}), got {coords.shape}"
            )
        if simp.ndim != 2 or simp.shape[1] != self.dim + 1:
            raise ParameterError(
                f"simplices must be (S, {self.dim + 1}), got {simp.shape}"
            )
        simp = np.sort(simp, axis=1)
        simp = simp[np.lexsort(simp.T[::-1])]
        object.__setattr__(self, "simplices", simp)
        object.__setattr__(self, "vertex_coords", coords)
        for s, row in enumerate(simp):
            edges = coords[row[1:]] - coords[row[0]]
            norms = np.linalg.norm(edges, axis=1)
            if norms.min() <= 0:
                raise DegeneracyError(f"simplex {s} has coincident vertices")
            if abs(np.linalg.det(edges / norms[:, None])) <= 1e-12:
                raise DegeneracyError(f"simplex {s} is flat (degenerate)")

    @property
    def simplex_count(self) -> int:
        return int(self.simplices.shape[0])

    def simplex_coords(self, index: int) -> np.ndarray:
        return self.vertex_coords[self.simplices[index]]


def delaunay(coords: np.ndarray, d: int) -> Triangulation:
    """Delaunay triangulation of embedded points in any dimension d >= 1.

    For d = 1 the triangulation is the chain of intervals between
    consecutive sorted coordinates; for d >= 2 it comes from the
    Quickhull paraboloid-lift construction, which guarantees the
    empty-circumsphere property.

    Raises
    ------
    DegeneracyError
        If the points are affinely dependent (no full-dimensional
        simplex exists).
    """
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != d:
        raise ParameterError(f"expected (N, {d}) coordinates, got {coords.shape}")
    if coords.shape[0] < d + 1:
        raise DegeneracyError(
            f"need at least {d + 1} points for dimension {d}, got {coords.shape[0]}"
        )
    if d == 1:
        order = np.argsort(coords[:, 0], kind="stable")
        pairs = []
        prev = int(order[0])
        for idx in order[1:]:
            idx = int(idx)
            if coords[idx, 0] > coords[prev, 0]:
                pairs.append((prev, idx))
                prev = idx
        if not pairs:
            raise DegeneracyError("all 1-d coordinates coincide")
        return Triangulation(1, np.array(pairs, dtype=np.int64), coords)
    try:
        tri = _SciPyDelaunay(coords)
    except QhullError as exc:
        raise DegeneracyError(f"points are affinely dependent: {exc}") from exc
    simplices = np.asarray(tri.simplices, dtype=np.int64)
    # Drop zero-volume slivers that triangulating cospherical facets can
    # emit; their interiors are empty so point location never needs them.
    keep = []
    for s, row in enumerate(simplices):
        edges = coords[np.sort(row)[1:]] - coords[np.sort(row)[0]]
        norms = np.linalg.norm(edges, axis=1)
        if norms.min() > 0 and abs(np.linalg.det(edges / norms[:, None])) > 1e-12:
            keep.append(s)
    if not keep:
        raise DegeneracyError("triangulation produced no full-dimensional simplex")
    return Triangulation(d, simplices[keep], coords)


def barycentric(p: np.ndarray, simplex_coords: np.ndarray) -> BarycentricCoords:
    """Unique affine weights expressing p over a (d+1)-vertex simplex.

    Solves the (d+1) x (d+1) system stacking the all-ones row on top of
    the vertex coordinates, so the weights sum to one and reproduce p.
    """
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    simplex_coords = np.asarray(simplex_coords, dtype=np.float64)
    d = p.shape[0]
    if simplex_coords.shape != (d + 1, d):
        raise ParameterError(
            f"simplex must be ({d + 1}, {d}) for a point in R^{d}, "
            f"got {simplex_coords.shape}"
        )
    A = np.vstack([np.ones(d + 1), simplex_coords.T])
    rhs = np.concatenate([[1.0], p])
    try:
        lam = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegeneracyError(f"degenerate simplex: {exc}") from exc
    return BarycentricCoords(lam)


def locate(tri: Triangulation, p: np.ndarray) -> int | None:
    """Index of a simplex containing p, or None outside the hull.

    Scans simplices in stored order and returns the first whose
    barycentric weights are all >= -1e-9, so points on shared
    boundaries resolve to the lowest simplex index.
    """
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    for s in range(tri.simplex_count):
        if barycentric(p, tri.simplex_coords(s)).is_inside():
            return s
    return None


def _nearest_simplex(tri: Triangulation, p: np.ndarray) -> int:
    centroids = tri.vertex_coords[tri.simplices].mean(axis=1)
    return int(np.argmin(np.linalg.norm(centroids - p, axis=1)))


def lift(
    embedding,
    tri: Triangulation,
    cloud: PointCloud,
    p: np.ndarray,
) -> np.ndarray:
    """Map a chart-coordinate point back to ambient space.

    The containing simplex's barycentric weights are applied to the
    original ambient points of its vertices.  ``embedding`` supplies
    the chart's vertex ids (rows of ``tri.vertex_coords`` correspond to
    ``embedding.vertex_ids``), and ``cloud`` the ambient points.

    Raises
    ------
    OutOfDomainError
        If p lies outside the convex hull of the chart's embedding.
        The message names the nearest simplex as a diagnostic.
    """
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if p.shape[0] != tri.dim:
        raise ParameterError(
            f"query point has dimension {p.shape[0]}, chart has {tri.dim}"
        )
    s = locate(tri, p)
    if s is None:
        near = _nearest_simplex(tri, p)
        raise OutOfDomainError(
            f"point {p.tolist()} is outside the chart's embedded hull "
            f"(nearest simplex: {near})"
        )
    lam = barycentric(p, tri.simplex_coords(s)).lam
    ambient_ids = embedding.vertex_ids[tri.simplices[s]]
    return lam @ cloud[ambient_ids]


def empty_circumsphere_slack(tri: Triangulation) -> float:
    """Worst relative clearance of the Delaunay empty-sphere property.

    For every simplex, every vertex not in it should lie at distance
    >= circumradius from the circumcenter.  Returns the minimum of
    (distance - radius) / radius over all simplex/vertex pairs; a valid
    Delaunay triangulation keeps this above about -1e-9.
    """
    worst = np.inf
    coords = tri.vertex_coords
    for row in tri.simplices:
        verts = coords[row]
        base = verts[0]
        A = 2.0 * (verts[1:] - base)
        rhs = np.sum(verts[1:] ** 2 - base**2, axis=1)
        try:
            center = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            continue
        radius = float(np.linalg.norm(verts[0] - center))
        if radius == 0:
            continue
        dist = np.linalg.norm(coords - center, axis=1)
        dist[row] = np.inf  # the simplex's own vertices sit on the sphere
        slack = float((dist.min() - radius) / radius)
        worst = min(worst, slack)
    return worst
