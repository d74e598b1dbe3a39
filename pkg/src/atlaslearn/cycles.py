"""Detection of long atomic cycles in subgraphs.

A simple cycle is *atomic* when the surrounding graph offers no
shortcut between any two of its vertices: for every pair ``u, v`` on
the cycle, the graph hop distance ``d_G(u, v)`` is at least the hop
distance measured around the cycle itself.  An optional ``chord_bound``
relaxes this so only shortcuts of at most that many hops count; with
the default unbounded setting a cycle is atomic exactly when it is
isometrically embedded in the graph.

Long atomic cycles are evidence of a hole: on a mesh sampled from a
simply-connected region every large cycle can be shortcut across the
interior, while a cycle circling a void cannot.  Chart combining uses
:func:`has_atomic_cycle_longer_than` to reject merges whose overlap
region carries such a hole.

The detector is two-tiered:

* a sound scan that runs breadth-first searches from a spread of
  roots, collects the fundamental cycle of every non-tree edge, and
  shrinks each candidate along discovered shortcuts until a verified
  atomic cycle emerges (or the candidate falls below the threshold);
* an exhaustive canonical search, run only on graphs with at most
  ``exhaustive_limit`` vertices, which makes the answer exact there.

On larger graphs a negative answer is therefore heuristic, but the
scan provably finds a witness whenever the graph has an essential
(non-contractible) cycle longer than the threshold, which is the case
chart combining relies on.  A single root already carries that
guarantee: the fundamental cycles of one search tree generate the
whole cycle space, and splitting a cycle leaves its class on one of
the two pieces, so an essential class can never shrink away — extra
roots only diversify which witness is found first.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import ParameterError, StructuralError
from .graph import Subgraph, hop_distance_matrix

__all__ = [
    "is_atomic_cycle",
    "find_atomic_cycle_longer_than",
    "has_atomic_cycle_longer_than",
    "DEFAULT_EXHAUSTIVE_LIMIT",
    "DEFAULT_SCAN_ROOTS",
]

DEFAULT_EXHAUSTIVE_LIMIT = 64
DEFAULT_SCAN_ROOTS = 4


def _first_violation(cycle: list[int], D: np.ndarray, chord_bound: int | None) -> tuple[int, int] | None:
    """First cycle-position pair (i, j) admitting a shortcut, or None.

    A pair violates atomicity when its graph distance is strictly below
    its around-the-cycle distance and (if bounded) within the chord
    bound.  Scan order is row-major over positions, so the result is
    deterministic.
    """
    L = len(cycle)
    idx = np.asarray(cycle, dtype=np.int64)
    sub = D[np.ix_(idx, idx)]
    pos = np.arange(L)
    sep = np.abs(pos[:, None] - pos[None, :])
    around = np.minimum(sep, L - sep)
    viol = sub < around
    if chord_bound is not None:
        viol &= sub <= chord_bound
    hits = np.argwhere(viol)
    if hits.shape[0] == 0:
        return None
    i, j = hits[0]
    return int(i), int(j)


def _shortest_path_via(
    adj: list[np.ndarray], D: np.ndarray, start: int, goal: int
) -> list[int]:
    """Deterministic shortest path recovered by descending the hop matrix.

    From each vertex, step to its smallest-indexed neighbor that is one
    hop closer to the goal; the precomputed distances guarantee such a
    neighbor exists, so no search is needed.
    """
    dist = int(D[start, goal])
    if dist < 0:
        raise StructuralError(f"no path between {start} and {goal}")
    path = [start]
    cur = start
    for remaining in range(dist, 0, -1):
        for y in adj[cur]:
            if D[y, goal] == remaining - 1:
                cur = int(y)
                break
        else:  # pragma: no cover - impossible with a consistent matrix
            raise StructuralError(f"hop matrix inconsistent at vertex {cur}")
        path.append(cur)
    return path


def _shrink_to_atomic(
    cycle: list[int],
    adj: list[np.ndarray],
    D: np.ndarray,
    threshold: int,
    chord_bound: int | None,
) -> list[int] | None:
    """Split a candidate cycle along shortcuts until an atomic piece survives.

    Every split replaces a cycle by two strictly shorter simple cycles
    whose union of edges covers the original plus the splitting path,
    so the process terminates.  Pieces no longer than ``threshold`` are
    discarded.  Returns a verified atomic cycle longer than
    ``threshold`` or None.
    """
    stack = [cycle]
    while stack:
        cyc = stack.pop()
        L = len(cyc)
        if L <= threshold:
            continue
        pair = _first_violation(cyc, D, chord_bound)
        if pair is None:
            return cyc
        i, j = pair
        path = _shortest_path_via(adj, D, cyc[i], cyc[j])
        # Walk the shortcut path and find a stretch between consecutive
        # cycle vertices that is shorter than the arc it bypasses; one
        # must exist because the whole path undercuts the whole arc.
        on_cycle = {v: p for p, v in enumerate(cyc)}
        hit_positions = [t for t, v in enumerate(path) if v in on_cycle]
        for a, b in zip(hit_positions, hit_positions[1:]):
            seg = path[a : b + 1]
            pi, pj = on_cycle[seg[0]], on_cycle[seg[-1]]
            sep = abs(pi - pj)
            around = min(sep, L - sep)
            if len(seg) - 1 >= around:
                continue
            lo, hi = min(pi, pj), max(pi, pj)
            arc_inner = cyc[lo : hi + 1]  # lo..hi the direct way
            arc_outer = cyc[hi:] + cyc[: lo + 1]  # hi..end..lo the wrap way
            if cyc[lo] != seg[0]:
                seg = seg[::-1]
            interior = seg[1:-1]
            piece_a = arc_inner + interior[::-1]
            piece_b = arc_outer + interior
            for piece in (piece_a, piece_b):
                if len(piece) > threshold:
                    stack.append(piece)
            break
        else:  # pragma: no cover - guarded by the averaging argument
            raise StructuralError("shortcut path yielded no splitting segment")
    return None


def _spread_roots(D: np.ndarray, count: int) -> list[int]:
    """Greedy far-apart root selection in hop distance, starting at 0.

    Unreachable vertices count as infinitely far, so every connected
    component receives a root before spreading continues within one.
    """
    n = D.shape[0]
    roots = [0]
    if count <= 1 or n <= 1:
        return roots[:count]
    reach = np.where(D[0] < 0, np.inf, D[0]).astype(np.float64)
    while len(roots) < min(count, n):
        best = int(np.argmax(reach))  # argmax takes the lowest index on ties
        if reach[best] <= 0:
            break
        roots.append(best)
        row = np.where(D[best] < 0, np.inf, D[best]).astype(np.float64)
        reach = np.minimum(reach, row)
    return roots


def _collision_candidates(
    adj: list[np.ndarray], root: int, threshold: int
) -> list[list[int]]:
    """Fundamental cycles of non-tree edges under a BFS tree from root.

    Only candidates that can exceed ``threshold`` are traced.  When the
    graph has a hole, the search wavefront meets itself across it and
    the corresponding non-tree edge closes a cycle around the hole.
    """
    n = len(adj)
    parent = [-2] * n
    level = [-1] * n
    parent[root] = -1
    level[root] = 0
    order = deque([root])
    seen_edges: set[tuple[int, int]] = set()
    out: list[list[int]] = []
    while order:
        x = order.popleft()
        for y in adj[x]:
            y = int(y)
            if level[y] < 0:
                level[y] = level[x] + 1
                parent[y] = x
                order.append(y)
            elif y != parent[x]:
                key = (x, y) if x < y else (y, x)
                if key in seen_edges:
                    continue
                seen_edges.add(key)
                if level[x] + level[y] + 1 <= threshold:
                    continue
                cyc = _trace_fundamental_cycle(parent, level, x, y)
                if len(cyc) > threshold:
                    out.append(cyc)
    return out


def _trace_fundamental_cycle(parent: list[int], level: list[int], a: int, b: int) -> list[int]:
    """Cycle formed by tree paths from a and b to their meeting ancestor."""
    pa, pb = [a], [b]
    x, y = a, b
    while level[x] > level[y]:
        x = parent[x]
        pa.append(x)
    while level[y] > level[x]:
        y = parent[y]
        pb.append(y)
    while x != y:
        x = parent[x]
        pa.append(x)
        y = parent[y]
        pb.append(y)
    return pa + pb[-2::-1]


def _exhaustive_witness(
    adj: list[np.ndarray],
    adj_sets: list[set[int]],
    D: np.ndarray,
    threshold: int,
    chord_bound: int | None,
) -> list[int] | None:
    """Exact search for an atomic cycle longer than the threshold.

    Enumerates candidate cycles canonically: the lowest-index vertex is
    the root, two arms grow alternately away from it along paths whose
    pairwise distances stay consistent with some atomic completion, and
    arms close when their tips become adjacent.  Constraint checks only
    prune extensions that no atomic cycle could use, so the search is
    complete; every closed candidate is then verified outright.
    """
    n = len(adj)
    dist = D.tolist()

    def required(sep: int, lmin: int) -> int:
        raw = min(sep, lmin - sep)
        if chord_bound is not None:
            return min(raw, chord_bound + 1)
        return raw

    def admissible(w: int, own: list[int], other: list[int], r: int) -> bool:
        P = len(own) + 1
        lmin = P + len(other) + 1
        if dist[w][r] < required(P, lmin):
            return False
        for i, u in enumerate(own):
            if dist[w][u] < required(P - (i + 1), lmin):
                return False
        for j, u in enumerate(other):
            if dist[w][u] < required(P + (j + 1), lmin):
                return False
        return True

    def grow(r: int, A: list[int], B: list[int]) -> list[int] | None:
        if A[-1] in adj_sets[B[-1]]:
            L = len(A) + len(B) + 1
            if L > threshold:
                cyc = [r] + A + B[::-1]
                if _first_violation(cyc, D, chord_bound) is None:
                    return cyc
        own, other = (A, B) if len(A) <= len(B) else (B, A)
        for w in adj[own[-1]]:
            w = int(w)
            if w <= r or not admissible(w, own, other, r):
                continue
            own.append(w)
            found = grow(r, A, B)
            own.pop()
            if found is not None:
                return found
        return None

    for r in range(n):
        nbrs = [int(v) for v in adj[r] if int(v) > r]
        for ai, a1 in enumerate(nbrs):
            for b1 in nbrs[ai + 1 :]:
                found = grow(r, [a1], [b1])
                if found is not None:
                    return found
    return None


def is_atomic_cycle(sub: Subgraph, cycle: np.ndarray, chord_bound: int | None = None) -> bool:
    """Check whether a given simple cycle is atomic within a subgraph.

    Parameters
    ----------
    sub : Subgraph
        Graph supplying the shortcut distances.
    cycle : array-like of int
        Distinct vertex ids (original indexing) in cyclic order;
        consecutive entries and the wrap-around pair must be edges.
    chord_bound : int or None
        Maximum hop length of shortcuts considered; None means any.
    """
    cyc = np.asarray(cycle, dtype=np.int64).reshape(-1)
    if cyc.shape[0] < 3:
        raise ParameterError("a cycle needs at least 3 vertices")
    if np.unique(cyc).shape[0] != cyc.shape[0]:
        raise ParameterError("cycle vertices must be distinct")
    index = sub.local_index()
    try:
        local = [index[int(v)] for v in cyc]
    except KeyError as exc:
        raise ParameterError(f"cycle vertex {exc.args[0]} not in subgraph") from None
    adj_sets = [set(map(int, a)) for a in sub.adjacency_lists()]
    for p, x in enumerate(local):
        if local[(p + 1) % len(local)] not in adj_sets[x]:
            raise ParameterError("consecutive cycle vertices are not adjacent")
    D = hop_distance_matrix(sub)
    return _first_violation(local, D, _check_bound(chord_bound)) is None


def _check_bound(chord_bound: int | None) -> int | None:
    if chord_bound is None:
        return None
    if int(chord_bound) < 1:
        raise ParameterError(f"chord_bound must be >= 1 or None, got {chord_bound}")
    return int(chord_bound)


def find_atomic_cycle_longer_than(
    sub: Subgraph,
    threshold: int,
    chord_bound: int | None = None,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    scan_roots: int = DEFAULT_SCAN_ROOTS,
) -> np.ndarray | None:
    """Find an atomic cycle with more than ``threshold`` vertices.

    Returns the witness cycle as original vertex ids in cyclic order,
    or None if the detector finds none.  Any returned cycle is verified
    atomic; on graphs with at most ``exhaustive_limit`` vertices a None
    answer is exact as well.

    Parameters
    ----------
    sub : Subgraph
        Graph to inspect.
    threshold : int
        Strict lower bound on the cycle length being sought.
    chord_bound : int or None
        Shortcut length cap used by the atomicity test (None = any).
    exhaustive_limit : int
        Largest vertex count at which the exact search runs.
    scan_roots : int
        Number of spread-out BFS roots for the candidate scan.
    """
    if int(threshold) < 3:
        raise ParameterError(f"threshold must be >= 3, got {threshold}")
    threshold = int(threshold)
    chord_bound = _check_bound(chord_bound)
    if scan_roots < 1:
        raise ParameterError("scan_roots must be >= 1")
    n = sub.vertex_count
    if n < 3 or sub.edge_count < 3:
        return None

    adj = sub.adjacency_lists()
    D = hop_distance_matrix(sub)
    for root in _spread_roots(D, min(scan_roots, n)):
        for cand in _collision_candidates(adj, root, threshold):
            witness = _shrink_to_atomic(cand, adj, D, threshold, chord_bound)
            if witness is not None:
                return sub.vertices[np.asarray(witness, dtype=np.int64)]

    if n <= exhaustive_limit:
        adj_sets = [set(map(int, a)) for a in adj]
        witness = _exhaustive_witness(adj, adj_sets, D, threshold, chord_bound)
        if witness is not None:
            return sub.vertices[np.asarray(witness, dtype=np.int64)]
    return None


def has_atomic_cycle_longer_than(
    sub: Subgraph,
    threshold: int,
    chord_bound: int | None = None,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    scan_roots: int = DEFAULT_SCAN_ROOTS,
) -> bool:
    """Boolean form of :func:`find_atomic_cycle_longer_than`."""
    return (
        find_atomic_cycle_longer_than(
            sub,
            threshold,
            chord_bound=chord_bound,
            exhaustive_limit=exhaustive_limit,
            scan_roots=scan_roots,
        )
        is not None
    )
