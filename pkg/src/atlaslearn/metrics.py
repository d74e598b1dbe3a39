"""Embedding quality via neighborhood trustworthiness.

Trustworthiness penalizes points that look like neighbors in the
embedding but were not neighbors originally: each such intruder costs
its original-space rank beyond k, and the total is rescaled to [0, 1]
where 1 means every embedded neighborhood is honest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ParameterError

__all__ = ["TrustworthinessReport", "trustworthiness", "report"]


@dataclass(frozen=True)
class TrustworthinessReport:
    """Per-chart trustworthiness scores with aggregates."""

    per_chart: tuple[tuple[int, float], ...]
    worst: float
    mean: float
    k_neighbors: int

    def __post_init__(self) -> None:
        if not self.per_chart:
            raise ParameterError("report needs at least one chart score")


def _neighbor_order(dist_row: np.ndarray, self_index: int) -> np.ndarray:
    """Indices sorted by distance then index, with the point itself removed."""
    order = np.lexsort((np.arange(dist_row.shape[0]), dist_row))
    return order[order != self_index]


def trustworthiness(original: np.ndarray, embedded: np.ndarray, k: int) -> float:
    """Score how faithfully embedded k-neighborhoods reflect the original.

    Parameters
    ----------
    original : np.ndarray
        ``(N, n)`` ambient points (or any reference coordinates).
    embedded : np.ndarray
        ``(N, d)`` embedded coordinates, rows aligned with original.
    k : int
        Neighborhood size; requires N >= 2k + 2 so the normalizer
        2N - 3k - 1 stays positive.

    Notes
    -----
    Computes 1 - 2 / (N k (2N - 3k - 1)) * sum over points i and over
    j that are embedded k-neighbors of i but not original k-neighbors,
    of (rank(i, j) - k), where rank is j's 1-based position by original
    distance from i.  Distance ties always resolve toward the lower
    index.
    """
    original = np.asarray(original, dtype=np.float64)
    embedded = np.asarray(embedded, dtype=np.float64)
    if original.ndim != 2 or embedded.ndim != 2:
        raise ParameterError("inputs must be 2-d arrays")
    N = original.shape[0]
    if embedded.shape[0] != N:
        raise ParameterError(
            f"row mismatch: original has {N}, embedded has {embedded.shape[0]}"
        )
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if N < 2 * k + 2:
        raise ParameterError(f"need N >= 2k+2 = {2 * k + 2} points, got {N}")

    d_orig = cdist(original, original)
    d_emb = cdist(embedded, embedded)
    penalty = 0.0
    for i in range(N):
        order_orig = _neighbor_order(d_orig[i], i)
        order_emb = _neighbor_order(d_emb[i], i)
        ranks = np.empty(N, dtype=np.int64)
        ranks[order_orig] = np.arange(1, N)
        true_neighbors = set(map(int, order_orig[:k]))
        for j in order_emb[:k]:
            j = int(j)
            if j not in true_neighbors:
                penalty += ranks[j] - k
    return 1.0 - 2.0 * penalty / (N * k * (2.0 * N - 3.0 * k - 1.0))


def report(embeddings, cloud: np.ndarray, k: int = 10) -> TrustworthinessReport:
    """Per-chart trustworthiness plus worst/mean aggregates.

    ``embeddings`` is a list of chart embeddings (vertex_ids + coords);
    each chart is scored against the ambient points it covers.
    """
    scores = []
    for emb in embeddings:
        original = cloud[emb.vertex_ids]
        try:
            s = trustworthiness(original, emb.coords, k)
        except ParameterError as exc:
            raise ParameterError(f"chart {emb.chart_id}: {exc}") from exc
        scores.append((int(emb.chart_id), float(s)))
    values = [s for _, s in scores]
    return TrustworthinessReport(
        per_chart=tuple(scores),
        worst=float(min(values)),
        mean=float(np.mean(values)),
        k_neighbors=int(k),
    )
