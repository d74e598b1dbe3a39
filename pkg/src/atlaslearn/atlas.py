"""Chart seeding, expansion, and topology-gated combining.

Charts start as single far-apart vertices, grow into overlapping balls
on the neighborhood graph, and are then greedily merged.  A merge is
accepted only when the two charts' overlap region is connected and
carries no long atomic cycle, i.e. looks like a piece of Euclidean
space rather than a band around a hole.  The loop runs until no pair
of remaining charts can merge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cycles import (
    DEFAULT_EXHAUSTIVE_LIMIT,
    DEFAULT_SCAN_ROOTS,
    has_atomic_cycle_longer_than,
)
from .errors import ParameterError, StructuralError
from .graph import (
    NeighborhoodGraph,
    Subgraph,
    connected_components,
    shortest_path_distances,
)

__all__ = [
    "ChartDomain",
    "Atlas",
    "farthest_point_sample",
    "initialize_charts",
    "intersect",
    "is_hole_free",
    "can_combine",
    "combine_until_fixpoint",
]


@dataclass(frozen=True)
class ChartDomain:
    """One chart's domain: an id plus a subgraph of the parent graph."""

    id: int
    domain: Subgraph

    def __post_init__(self) -> None:
        if self.domain.vertex_count == 0:
            raise ParameterError(f"chart {self.id} has an empty vertex set")

    @property
    def vertices(self) -> np.ndarray:
        return self.domain.vertices

    @property
    def edges(self) -> np.ndarray:
        return self.domain.edges

    def vertex_set(self) -> set[int]:
        return set(map(int, self.domain.vertices))


@dataclass(frozen=True)
class Atlas:
    """A family of chart domains covering the whole neighborhood graph.

    ``meta`` snapshots the parameters that produced the atlas (neighbor
    rule, cycle threshold, seed, chart counts); it is carried along for
    provenance but never consulted by the algorithms.
    """

    graph: NeighborhoodGraph
    charts: tuple[ChartDomain, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        charts = tuple(sorted(self.charts, key=lambda c: c.id))
        ids = [c.id for c in charts]
        if len(set(ids)) != len(ids):
            raise ParameterError(f"duplicate chart ids: {ids}")
        object.__setattr__(self, "charts", charts)

    @property
    def chart_count(self) -> int:
        return len(self.charts)

    def chart(self, chart_id: int) -> ChartDomain:
        for c in self.charts:
            if c.id == chart_id:
                return c
        raise ParameterError(f"no chart with id {chart_id}")

    def validate(self) -> None:
        """Check coverage and (for multi-chart atlases) overlap.

        Raises StructuralError when the union of chart vertex sets
        misses graph vertices or some chart is disjoint from all the
        others.
        """
        covered: set[int] = set()
        for c in self.charts:
            covered |= c.vertex_set()
        missing = set(range(self.graph.point_count)) - covered
        if missing:
            raise StructuralError(
                f"atlas does not cover vertices (first few: {sorted(missing)[:5]})"
            )
        if self.chart_count > 1:
            for c in self.charts:
                others: set[int] = set()
                for o in self.charts:
                    if o.id != c.id:
                        others |= o.vertex_set()
                if not (c.vertex_set() & others):
                    raise StructuralError(f"chart {c.id} overlaps no other chart")


def farthest_point_sample(
    graph: NeighborhoodGraph,
    count: int,
    seed: int,
    start: int | None = None,
) -> np.ndarray:
    """Greedy max-min landmark selection under the graph metric.

    The first landmark is drawn uniformly by the seeded generator
    (unless ``start`` pins it); each later landmark is the vertex
    farthest from everything already chosen, ties going to the lowest
    index.

    Raises
    ------
    StructuralError
        If the graph is disconnected (max-min distances would be
        infinite); the error names the components.
    """
    m = graph.point_count
    if not 1 <= count <= m:
        raise ParameterError(f"count must be in [1, {m}], got {count}")
    full = graph.full_subgraph()
    comps = connected_components(full)
    if len(comps) != 1:
        sizes = [len(c) for c in comps]
        raise StructuralError(
            f"farthest point sampling needs a connected graph; found "
            f"{len(comps)} components with sizes {sizes}"
        )
    if start is None:
        rng = np.random.default_rng(seed)
        first = int(rng.integers(m))
    else:
        if not 0 <= start < m:
            raise ParameterError(f"start vertex {start} out of range")
        first = int(start)
    chosen = [first]
    min_dist = shortest_path_distances(full, np.array([first]))[0]
    while len(chosen) < count:
        order = np.lexsort((np.arange(m), -min_dist))
        nxt = int(order[0])
        chosen.append(nxt)
        row = shortest_path_distances(full, np.array([nxt]))[0]
        min_dist = np.minimum(min_dist, row)
    return np.array(chosen, dtype=np.int64)


def initialize_charts(graph: NeighborhoodGraph, seeds: np.ndarray) -> Atlas:
    """Grow one chart per seed by synchronized one-hop rounds.

    Every chart adds the neighbors of its current members each round
    (charts may overlap freely); rounds continue until the whole graph
    is covered, then exactly one more round runs so adjacent charts
    share a band of vertices.  Each chart ends up as the ball of a
    common hop radius around its seed, with all induced edges.
    """
    seeds = np.asarray(seeds, dtype=np.int64).reshape(-1)
    if seeds.shape[0] == 0:
        raise ParameterError("need at least one seed")
    if np.unique(seeds).shape[0] != seeds.shape[0]:
        raise ParameterError("seeds must be distinct")
    if seeds.min() < 0 or seeds.max() >= graph.point_count:
        raise ParameterError("seed vertex out of range")

    full = graph.full_subgraph()
    from scipy.sparse import csgraph as _csgraph

    hops = _csgraph.dijkstra(
        full.local_csr(weighted=False), directed=False, indices=seeds, unweighted=True
    )
    hops = np.atleast_2d(hops)
    nearest = hops.min(axis=0)
    if np.isinf(nearest).any():
        raise StructuralError(
            "seeds cannot reach every vertex; the graph is disconnected"
        )
    radius = int(nearest.max()) + 1  # one extra round beyond full coverage
    charts = []
    for row, _seed in enumerate(seeds):
        members = np.flatnonzero(hops[row] <= radius)
        charts.append(ChartDomain(row, graph.induced(members)))
    atlas = Atlas(
        graph,
        tuple(charts),
        meta={"seeds": [int(s) for s in seeds], "ball_radius": radius},
    )
    atlas.validate()
    return atlas


def intersect(a: ChartDomain, b: ChartDomain, graph: NeighborhoodGraph) -> Subgraph:
    """Overlap of two charts: shared vertices plus all induced edges.

    Taking every parent-graph edge between shared vertices (rather than
    only edges stored by both charts) avoids phantom disconnections
    when the two charts acquired the same region along different
    growth paths.
    """
    shared = np.intersect1d(a.vertices, b.vertices, assume_unique=True)
    return graph.induced(shared)


def is_hole_free(
    sub: Subgraph,
    threshold: int,
    chord_bound: int | None = None,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    scan_roots: int = DEFAULT_SCAN_ROOTS,
) -> bool:
    """True iff a region is connected and carries no long atomic cycle.

    This is the disk-likeness test used throughout: on chart overlaps
    it gates merging, and on the charts themselves it tells whether a
    region wrapped around a hole of the underlying manifold.  Both
    properties together are what make a merged chart safe: gluing two
    hole-free charts along a hole-free connected overlap cannot create
    a loop or close the union into a sphere.
    """
    if len(connected_components(sub)) != 1:
        return False
    return not has_atomic_cycle_longer_than(
        sub,
        threshold,
        chord_bound=chord_bound,
        exhaustive_limit=exhaustive_limit,
        scan_roots=scan_roots,
    )


def can_combine(
    inter: Subgraph,
    threshold: int,
    chord_bound: int | None = None,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    scan_roots: int = DEFAULT_SCAN_ROOTS,
) -> bool:
    """Decide whether an overlap region permits merging its two charts.

    True iff the overlap has exactly one connected component and no
    atomic cycle longer than ``threshold`` — together a proxy for the
    overlap being hole-free, which keeps the merged chart embeddable.
    An empty overlap fails the component test.
    """
    if inter.vertex_count == 0:
        return False
    return is_hole_free(
        inter,
        threshold,
        chord_bound=chord_bound,
        exhaustive_limit=exhaustive_limit,
        scan_roots=scan_roots,
    )


def combine_until_fixpoint(
    atlas: Atlas,
    threshold: int,
    seed: int,
    chord_bound: int | None = None,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    scan_roots: int = DEFAULT_SCAN_ROOTS,
) -> Atlas:
    """Greedily merge chart pairs until no merge is admissible.

    Candidate pairs (those sharing at least one vertex) sit in a work
    queue; the seeded generator draws one, the overlap criteria decide,
    and an accepted merge unions the pair into the lower id and
    re-enqueues that chart's pairings.  Pairs with empty overlap can
    never combine and are never enqueued.  The result is deterministic
    for fixed inputs and seed.

    A merge must leave the merged chart hole-free, so candidate unions
    are checked too, not just overlaps.  The overlap criteria alone
    cannot see one failure mode: a chart shaped like a long band whose
    ends approach within a hop of each other still looks like a disk,
    and a ball absorbed at the near-touch supplies the edges that close
    the loop while the overlap stays connected and shortcut-free.
    Checking the union catches exactly that closing merge.  For the
    same reason merged charts keep every parent-graph edge among their
    vertices (the induced subgraph): a union that carried only the two
    parents' own edges could self-touch invisibly, and its geodesics
    would detour around edges the manifold actually has.
    """
    graph = atlas.graph

    def merge_domains(a: Subgraph, b: Subgraph) -> Subgraph:
        return graph.induced(np.union1d(a.vertices, b.vertices))

    live: dict[int, ChartDomain] = {c.id: c for c in atlas.charts}
    vsets: dict[int, set[int]] = {c.id: c.vertex_set() for c in atlas.charts}
    pending: set[tuple[int, int]] = set()
    ids = sorted(live)
    for pos, i in enumerate(ids):
        for j in ids[pos + 1 :]:
            if vsets[i] & vsets[j]:
                pending.add((i, j))
    rng = np.random.default_rng(seed)
    while pending:
        queue = sorted(pending)
        i, j = queue[int(rng.integers(len(queue)))]
        pending.discard((i, j))
        inter = intersect(live[i], live[j], graph)
        if not can_combine(
            inter,
            threshold,
            chord_bound=chord_bound,
            exhaustive_limit=exhaustive_limit,
            scan_roots=scan_roots,
        ):
            continue
        merged = merge_domains(live[i].domain, live[j].domain)
        if not is_hole_free(
            merged,
            threshold,
            chord_bound=chord_bound,
            exhaustive_limit=exhaustive_limit,
            scan_roots=scan_roots,
        ):
            continue
        live[i] = ChartDomain(i, merged)
        vsets[i] = live[i].vertex_set()
        del live[j]
        del vsets[j]
        pending = {p for p in pending if j not in p and i not in p}
        for l in sorted(live):
            if l != i and (vsets[i] & vsets[l]):
                pending.add((min(i, l), max(i, l)))
    meta = dict(atlas.meta)
    meta.update({"cycle_threshold": int(threshold), "combine_seed": int(seed)})
    result = Atlas(graph, tuple(live[i] for i in sorted(live)), meta=meta)
    result.validate()
    return result
