"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive — plain loops, no code shared
with the package under test — so a disagreement points at a real bug
rather than a common mistake.  Graphs are given as a vertex count plus
an iterable of (u, v) index pairs; vertices are 0..n-1.
"""

from __future__ import annotations

import numpy as np


def neighbor_sets(n: int, edges) -> list[set[int]]:
    nbr: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError("self-loop in oracle input")
        nbr[u].add(v)
        nbr[v].add(u)
    return nbr


def bfs_hops(n: int, edges) -> list[list[int]]:
    """All-pairs hop counts by repeated BFS; -1 marks unreachable."""
    nbr = neighbor_sets(n, edges)
    out = []
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for w in nbr[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        out.append(dist)
    return out


def floyd_warshall(n: int, edges, weights) -> np.ndarray:
    """Classic O(n^3) all-pairs shortest paths on a weighted graph."""
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    for (u, v), w in zip(edges, weights):
        u, v, w = int(u), int(v), float(w)
        if w < D[u, v]:
            D[u, v] = w
            D[v, u] = w
    for k in range(n):
        np.minimum(D, D[:, k : k + 1] + D[k : k + 1, :], out=D)
    return D


def chordless_cycles(n: int, edges) -> list[tuple[int, ...]]:
    """Every chordless simple cycle, each reported exactly once.

    Canonical form: the cycle is rooted at its smallest vertex r and
    oriented so the second vertex is smaller than the last.  A path is
    grown only through vertices larger than r; a vertex adjacent to an
    interior path vertex would become a chord, so such extensions are
    pruned, and a vertex adjacent to r either closes the cycle or is
    dead (extending through it would leave the closing edge as a
    chord).
    """
    nbr = neighbor_sets(n, edges)
    out: list[tuple[int, ...]] = []

    def grow(path: list[int], inpath: set[int], r: int) -> None:
        last = path[-1]
        for w in sorted(nbr[last]):
            if w <= r or w in inpath:
                continue
            if any(u in nbr[w] for u in path[1:-1]):
                continue
            if r in nbr[w]:
                if path[1] < w:
                    out.append(tuple(path) + (w,))
                continue
            path.append(w)
            inpath.add(w)
            grow(path, inpath, r)
            path.pop()
            inpath.discard(w)

    for r in range(n):
        for v1 in sorted(nbr[r]):
            if v1 > r:
                grow([r, v1], {r, v1}, r)
    return out


def cycle_is_atomic(cycle, hops, chord_bound: int | None = None) -> bool:
    """No vertex pair of the cycle admits a strictly shorter outside path.

    A pair violates atomicity when its graph hop distance is strictly
    below its around-the-cycle distance; with a chord bound, only
    shortcuts of at most that many hops count.
    """
    L = len(cycle)
    for i in range(L):
        for j in range(i + 1, L):
            around = min(j - i, L - (j - i))
            direct = hops[cycle[i]][cycle[j]]
            if direct < around and (chord_bound is None or direct <= chord_bound):
                return False
    return True


def atomic_cycles(n: int, edges, chord_bound: int | None = None) -> list[tuple[int, ...]]:
    """All atomic cycles, by filtering the chordless enumeration.

    Every atomic cycle is chordless (an edge chord is a 1-hop shortcut,
    shorter than any around-distance of at least 2 and within every
    bound), so filtering chordless cycles by the shortcut predicate is
    an exhaustive enumeration of atomic cycles.
    """
    hops = bfs_hops(n, edges)
    return [
        c for c in chordless_cycles(n, edges) if cycle_is_atomic(c, hops, chord_bound)
    ]


def max_atomic_length(n: int, edges, chord_bound: int | None = None) -> int:
    cycles = atomic_cycles(n, edges, chord_bound)
    return max((len(c) for c in cycles), default=0)


def rank_matrix(original: np.ndarray) -> np.ndarray:
    """rank[i, j] = position of j when sorting others by distance from i.

    Ranks start at 1 for the nearest point; distance ties are broken
    toward the lower point index.  The diagonal is 0 by convention.
    """
    X = np.asarray(original, dtype=np.float64)
    N = X.shape[0]
    ranks = np.zeros((N, N), dtype=np.int64)
    for i in range(N):
        d = np.sqrt(((X - X[i]) ** 2).sum(axis=1))
        order = sorted((float(d[j]), j) for j in range(N) if j != i)
        for pos, (_, j) in enumerate(order, start=1):
            ranks[i, j] = pos
    return ranks


def knn_indices(points: np.ndarray, k: int) -> list[set[int]]:
    """k nearest neighbors of each point, ties toward the lower index."""
    X = np.asarray(points, dtype=np.float64)
    N = X.shape[0]
    out = []
    for i in range(N):
        d = np.sqrt(((X - X[i]) ** 2).sum(axis=1))
        order = sorted((float(d[j]), j) for j in range(N) if j != i)
        out.append({j for _, j in order[:k]})
    return out


def naive_trustworthiness(original: np.ndarray, embedded: np.ndarray, k: int) -> float:
    """Direct transcription of the rank-sum trustworthiness formula."""
    X = np.asarray(original, dtype=np.float64)
    N = X.shape[0]
    ranks = rank_matrix(X)
    orig_nn = knn_indices(X, k)
    emb_nn = knn_indices(np.asarray(embedded, dtype=np.float64), k)
    total = 0.0
    for i in range(N):
        for j in emb_nn[i] - orig_nn[i]:
            total += ranks[i, j] - k
    return 1.0 - 2.0 / (N * k * (2.0 * N - 3.0 * k - 1.0)) * total


def procrustes_residual(result: np.ndarray, target: np.ndarray) -> float:
    """Misfit after the best rigid alignment (rotation/reflection).

    Both configurations are centered, an orthogonal matrix is fitted by
    SVD, and the remaining Frobenius error is reported relative to the
    target's norm.
    """
    A = np.asarray(result, dtype=np.float64)
    B = np.asarray(target, dtype=np.float64)
    A = A - A.mean(axis=0, keepdims=True)
    B = B - B.mean(axis=0, keepdims=True)
    U, _, Vt = np.linalg.svd(A.T @ B)
    R = U @ Vt
    denom = max(float(np.linalg.norm(B)), 1e-300)
    return float(np.linalg.norm(A @ R - B)) / denom
