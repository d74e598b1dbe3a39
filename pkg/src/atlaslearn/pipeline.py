"""End-to-end orchestration, CSV ingestion, and artifact persistence.

A run takes a point cloud through graph construction, chart seeding,
topology-gated combining, per-chart embedding, triangulation, and
trustworthiness scoring, and packs everything needed to answer lift
queries later into a single self-contained text artifact.  Artifacts
are deterministic: the same config and input produce byte-identical
files, with floats written at 17 significant digits so values survive
the round trip exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .atlas import (
    Atlas,
    ChartDomain,
    combine_until_fixpoint,
    farthest_point_sample,
    initialize_charts,
    is_hole_free,
)
from .embed import ChartEmbedding, embed_atlas
from .errors import (
    ArtifactFormatError,
    ArtifactVersionError,
    ParameterError,
    ParseError,
    StructuralError,
)
from .graph import (
    as_point_cloud,
    build_epsilon_graph,
    build_knn_graph,
    connected_components,
)
from .inverse import Triangulation, delaunay, lift
from .metrics import TrustworthinessReport, report
from .synthetic import add_gaussian_noise

__all__ = [
    "PipelineConfig",
    "AtlasArtifact",
    "run",
    "ingest_csv",
    "save_artifact",
    "load_artifact",
    "SCHEMA",
    "format_float",
]

SCHEMA = "atlaslearn-artifact/1"
_SCHEMA_MAJOR = 1


@dataclass(frozen=True)
class PipelineConfig:
    """All knobs of one pipeline run.

    Exactly one of ``knn``/``epsilon`` selects the neighbor rule.
    ``initial_charts`` picks the seeding granularity: an integer pins
    the seed count; ``None`` (the default) seeds the coarsest possible
    atlas of two maximally separated charts and lets the overlap
    criteria refuse any merge that would close over a hole; ``"auto"``
    doubles the count from 2 until every freshly grown ball is itself
    hole-free.  The auto rule enforces the precondition that makes the
    overlap criteria sufficient — gluing two hole-free charts along a
    connected hole-free overlap cannot wrap the union around a hole —
    and suits manifolds with features small enough for a coarse ball
    to encircle (necks, handles, tubes).  On data without such
    features the hole test reads the distant rim of a big healthy
    chart as a hole, so finer seeding is wasteful there; hence the
    coarse default.  ``noise_sigma`` adds seeded Gaussian noise to the
    cloud before anything else (0 = no noise).  ``chord_bound`` caps
    the shortcut length the atomic-cycle test considers; None means
    shortcuts of any length count.
    """

    knn: int | None = None
    epsilon: float | None = None
    cycle_threshold: int = 12
    initial_charts: int | str | None = None
    target_dim: int = 2
    seed: int = 0
    trust_k: int = 10
    baseline: bool = False
    noise_sigma: float = 0.0
    chord_bound: int | None = None

    def validate(self) -> None:
        if (self.knn is None) == (self.epsilon is None):
            raise ParameterError("exactly one of knn or epsilon must be set")
        if self.knn is not None and self.knn < 1:
            raise ParameterError(f"knn must be >= 1, got {self.knn}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ParameterError(f"epsilon must be > 0, got {self.epsilon}")
        if self.cycle_threshold < 3:
            raise ParameterError(
                f"cycle threshold must be >= 3, got {self.cycle_threshold}"
            )
        if self.initial_charts is not None:
            if isinstance(self.initial_charts, str):
                if self.initial_charts != "auto":
                    raise ParameterError(
                        "initial_charts must be a positive integer, 'auto', "
                        f"or None, got {self.initial_charts!r}"
                    )
            elif self.initial_charts < 1:
                raise ParameterError("initial_charts must be >= 1 when given")
        if self.target_dim < 1:
            raise ParameterError(f"target_dim must be >= 1, got {self.target_dim}")
        if self.trust_k < 1:
            raise ParameterError(f"trust_k must be >= 1, got {self.trust_k}")
        if self.noise_sigma < 0:
            raise ParameterError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.chord_bound is not None and self.chord_bound < 1:
            raise ParameterError("chord_bound must be >= 1 when given")


@dataclass(frozen=True, eq=False)
class AtlasArtifact:
    """Everything a finished run produced, ready to save or query.

    Self-contained by design: the cloud, chart memberships, embedded
    coordinates, and triangulations stored here answer lift queries
    without recomputing anything.
    """

    config: PipelineConfig
    cloud: np.ndarray
    charts: tuple[tuple[int, np.ndarray], ...]
    embeddings: tuple[ChartEmbedding, ...]
    triangulations: tuple[tuple[int, Triangulation], ...]
    trust: TrustworthinessReport
    atlas_meta: dict
    input_sha256: str
    input_name: str | None = None
    params: tuple[tuple[str, ...], np.ndarray] | None = None
    tool_version: str = __version__
    schema: str = SCHEMA

    @property
    def chart_count(self) -> int:
        return len(self.charts)

    def embedding_for(self, chart_id: int) -> ChartEmbedding:
        for emb in self.embeddings:
            if emb.chart_id == chart_id:
                return emb
        raise ParameterError(f"no chart with id {chart_id}")

    def triangulation_for(self, chart_id: int) -> Triangulation:
        for cid, tri in self.triangulations:
            if cid == chart_id:
                return tri
        raise ParameterError(f"no triangulation for chart {chart_id}")

    def lift_point(self, chart_id: int, p: np.ndarray) -> np.ndarray:
        """Lift chart coordinates to ambient space using stored data."""
        emb = self.embedding_for(chart_id)
        tri = self.triangulation_for(chart_id)
        return lift(emb, tri, self.cloud, p)

    def equals(self, other: "AtlasArtifact") -> bool:
        """Field-exact comparison (used by round-trip tests)."""
        if self.schema != other.schema or self.tool_version != other.tool_version:
            return False
        if self.config != other.config:
            return False
        if self.input_sha256 != other.input_sha256 or self.input_name != other.input_name:
            return False
        if not np.array_equal(self.cloud, other.cloud):
            return False
        if self.atlas_meta != other.atlas_meta:
            return False
        if len(self.charts) != len(other.charts):
            return False
        for (ida, va), (idb, vb) in zip(self.charts, other.charts):
            if ida != idb or not np.array_equal(va, vb):
                return False
        if len(self.embeddings) != len(other.embeddings):
            return False
        for ea, eb in zip(self.embeddings, other.embeddings):
            if (
                ea.chart_id != eb.chart_id
                or ea.dim != eb.dim
                or ea.residual != eb.residual
                or not np.array_equal(ea.vertex_ids, eb.vertex_ids)
                or not np.array_equal(ea.coords, eb.coords)
            ):
                return False
        if len(self.triangulations) != len(other.triangulations):
            return False
        for (ca, ta), (cb, tb) in zip(self.triangulations, other.triangulations):
            if ca != cb or ta.dim != tb.dim:
                return False
            if not np.array_equal(ta.simplices, tb.simplices):
                return False
            if not np.array_equal(ta.vertex_coords, tb.vertex_coords):
                return False
        if self.trust != other.trust:
            return False
        if (self.params is None) != (other.params is None):
            return False
        if self.params is not None:
            if self.params[0] != other.params[0]:
                return False
            if not np.array_equal(self.params[1], other.params[1]):
                return False
        return True


def _derived_seeds(seed: int) -> tuple[int, int, int]:
    """Independent child seeds for noise, sampling, and combining."""
    state = np.random.SeedSequence(seed).generate_state(3)
    return int(state[0]), int(state[1]), int(state[2])


def cloud_sha256(cloud: np.ndarray) -> str:
    """Hash of the cloud's canonical 17-digit text form."""
    text = "\n".join(
        ",".join(format_float(v) for v in row) for row in np.asarray(cloud, np.float64)
    )
    return hashlib.sha256(text.encode()).hexdigest()


_SEEDING_DRAWS = 8
_HOLED_COUNT_CAP = 4


def _seed_until_hole_free(graph, config: PipelineConfig, fps_seed: int) -> Atlas:
    """Pick the seed count by escalating until initial balls carry no hole.

    Merging preserves hole-freeness only when the charts being merged
    are hole-free to begin with, so coarse seedings whose balls wrap
    around part of the manifold (detected as a long atomic cycle inside
    a ball) are rejected in favor of a finer one.  Whether a given count
    produces a wrapped ball depends on where the farthest-point pass
    happens to land, so each count gets several independent draws before
    escalating; keeping the count low matters because finer seedings
    tend to stall at fixpoints with more charts, so counts step by two
    while small and grow geometrically only past eight.  Two economies
    keep this affordable: hole counting within a draw stops early (the
    exact tally beyond a few is irrelevant), and a count whose balls are
    all wrapped in two consecutive draws is escalated immediately, since
    wrapping every ball reflects the ball radius rather than layout
    luck.  If no seeding up to the cap comes out clean, the one with
    the fewest offending balls is used and flagged in the atlas meta.
    """
    m = graph.point_count
    cap = max(2, m // 25)
    attempts: list[list[int]] = []
    best: tuple[int, Atlas] | None = None
    count = 2
    while True:
        current = min(count, cap, m)
        all_holed_streak = 0
        for draw in range(_SEEDING_DRAWS):
            draw_seed = int(
                np.random.SeedSequence([fps_seed, current, draw]).generate_state(1)[0]
            )
            seeds = farthest_point_sample(graph, current, draw_seed)
            grown = initialize_charts(graph, seeds)
            cutoff = min(current, _HOLED_COUNT_CAP)
            holed = 0
            for c in grown.charts:
                if not is_hole_free(
                    c.domain, config.cycle_threshold, chord_bound=config.chord_bound
                ):
                    holed += 1
                    if holed >= cutoff:
                        break
            attempts.append([current, holed])
            if best is None or holed < best[0]:
                best = (holed, grown)
            if holed == 0:
                break
            all_holed_streak = all_holed_streak + 1 if holed >= current else 0
            if all_holed_streak >= 2:
                break
        if best[0] == 0 or current >= min(cap, m):
            break
        count = count + 2 if count < 8 else math.ceil(count * 1.5)
    holed, grown = best
    meta = dict(grown.meta)
    meta["seeding_attempts"] = attempts
    meta["initialization_hole_free"] = holed == 0
    return Atlas(graph, grown.charts, meta=meta)


def run(
    config: PipelineConfig,
    cloud: np.ndarray,
    params: tuple[tuple[str, ...], np.ndarray] | None = None,
    input_name: str | None = None,
) -> AtlasArtifact:
    """Execute the full pipeline and return the artifact.

    In baseline mode chart seeding and combining are skipped and the
    whole graph is embedded as a single chart — the classic one-map
    treatment the atlas approach is compared against.
    """
    config.validate()
    cloud = as_point_cloud(cloud)
    noise_seed, fps_seed, combine_seed = _derived_seeds(config.seed)
    if config.noise_sigma > 0:
        cloud = add_gaussian_noise(cloud, config.noise_sigma, noise_seed)

    if config.knn is not None:
        graph = build_knn_graph(cloud, config.knn)
    else:
        graph = build_epsilon_graph(cloud, config.epsilon)

    comps = connected_components(graph.full_subgraph())
    if len(comps) != 1:
        sizes = sorted((len(c) for c in comps), reverse=True)
        raise StructuralError(
            f"neighborhood graph is disconnected: {len(comps)} components "
            f"with sizes {sizes[:10]}{'...' if len(sizes) > 10 else ''}"
        )

    m = graph.point_count
    if config.baseline:
        atlas = Atlas(
            graph,
            (ChartDomain(0, graph.full_subgraph()),),
            meta={"mode": "baseline"},
        )
    else:
        if config.initial_charts == "auto":
            grown = _seed_until_hole_free(graph, config, fps_seed)
        else:
            count = 2 if config.initial_charts is None else config.initial_charts
            seeds = farthest_point_sample(graph, min(count, m), fps_seed)
            grown = initialize_charts(graph, seeds)
        atlas = combine_until_fixpoint(
            grown,
            config.cycle_threshold,
            combine_seed,
            chord_bound=config.chord_bound,
        )

    embeddings = tuple(embed_atlas(atlas, config.target_dim))
    triangulations = tuple(
        (emb.chart_id, delaunay(emb.coords, config.target_dim)) for emb in embeddings
    )
    trust = report(embeddings, cloud, config.trust_k)
    meta = dict(atlas.meta)
    meta["neighbor_rule"] = (
        f"knn:{config.knn}" if config.knn is not None else f"epsilon:{config.epsilon}"
    )
    return AtlasArtifact(
        config=config,
        cloud=cloud,
        charts=tuple((c.id, c.vertices.copy()) for c in atlas.charts),
        embeddings=embeddings,
        triangulations=triangulations,
        trust=trust,
        atlas_meta=meta,
        input_sha256=cloud_sha256(cloud),
        input_name=input_name,
        params=params,
    )


def ingest_csv(path: str) -> np.ndarray:
    """Read a numeric CSV into a point cloud.

    Rows become points.  A single leading header row is allowed and
    detected by failing to parse as numbers; lines starting with '#'
    are comments.  Ragged or non-numeric rows raise ParseError naming
    the 1-based line number.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    rows: list[list[float]] = []
    width: int | None = None
    header_allowed = True
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in line.split(",")]
        try:
            values = [float(c) for c in cells]
        except ValueError:
            if header_allowed:
                header_allowed = False
                continue
            raise ParseError(f"{path}:{lineno}: non-numeric cell") from None
        header_allowed = False
        if any(not math.isfinite(v) for v in values):
            raise ParseError(f"{path}:{lineno}: non-finite value")
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise ParseError(
                f"{path}:{lineno}: expected {width} columns, found {len(values)}"
            )
        rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


# --------------------------------------------------------------------------
# Artifact text format: JSON-compatible, but written by hand so floats are
# always 17-significant-digit decimals and key order is fixed.


def format_float(x: float) -> str:
    """Decimal text that parses back to exactly the same float."""
    if not math.isfinite(x):
        raise ParameterError(f"cannot serialize non-finite value {x}")
    s = format(float(x), ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _emit(value, out: list[str], indent: int) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        items = list(value.items())
        for pos, (key, val) in enumerate(items):
            out.append(f'{pad}  "{key}": ')
            _emit(val, out, indent + 1)
            out.append(",\n" if pos < len(items) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        seq = list(value)
        if any(isinstance(v, (dict, list, tuple)) for v in seq):
            out.append("[\n")
            for pos, val in enumerate(seq):
                out.append(pad + "  ")
                _emit(val, out, indent + 1)
                out.append(",\n" if pos < len(seq) - 1 else "\n")
            out.append(pad + "]")
        else:
            out.append("[" + ", ".join(_scalar(v) for v in seq) + "]")
    else:
        out.append(_scalar(value))


def _scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    raise ParameterError(f"cannot serialize {type(value).__name__}")


def _artifact_document(artifact: AtlasArtifact) -> dict:
    cfg = artifact.config
    doc = {
        "schema": artifact.schema,
        "tool_version": artifact.tool_version,
        "config": {
            "knn": cfg.knn,
            "epsilon": cfg.epsilon,
            "cycle_threshold": cfg.cycle_threshold,
            "initial_charts": cfg.initial_charts,
            "target_dim": cfg.target_dim,
            "seed": cfg.seed,
            "trust_k": cfg.trust_k,
            "baseline": cfg.baseline,
            "noise_sigma": cfg.noise_sigma,
            "chord_bound": cfg.chord_bound,
        },
        "input_sha256": artifact.input_sha256,
        "input_name": artifact.input_name,
        "atlas_meta": artifact.atlas_meta,
        "cloud": [list(row) for row in artifact.cloud],
        "charts": [
            {"id": cid, "vertices": [int(v) for v in verts]}
            for cid, verts in artifact.charts
        ],
        "embeddings": [
            {
                "chart_id": emb.chart_id,
                "dim": emb.dim,
                "vertex_ids": [int(v) for v in emb.vertex_ids],
                "coords": [list(row) for row in emb.coords],
                "residual": emb.residual,
            }
            for emb in artifact.embeddings
        ],
        "triangulations": [
            {
                "chart_id": cid,
                "dim": tri.dim,
                "simplices": [[int(v) for v in row] for row in tri.simplices],
            }
            for cid, tri in artifact.triangulations
        ],
        "trust": {
            "k_neighbors": artifact.trust.k_neighbors,
            "per_chart": [[cid, score] for cid, score in artifact.trust.per_chart],
            "worst": artifact.trust.worst,
            "mean": artifact.trust.mean,
        },
    }
    if artifact.params is not None:
        names, values = artifact.params
        doc["params"] = {
            "names": list(names),
            "values": [list(row) for row in values],
        }
    else:
        doc["params"] = None
    return doc


def save_artifact(artifact: AtlasArtifact, path: str) -> None:
    """Write the artifact as deterministic structured text."""
    out: list[str] = []
    _emit(_artifact_document(artifact), out, 0)
    out.append("\n")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("".join(out))


def _require(doc: dict, key: str):
    if key not in doc:
        raise ArtifactFormatError(f"artifact is missing required field '{key}'")
    return doc[key]


def load_artifact(path: str) -> AtlasArtifact:
    """Read an artifact back; exact inverse of save_artifact."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ArtifactFormatError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArtifactFormatError(f"{path} is not a valid artifact: {exc}") from exc
    if not isinstance(doc, dict):
        raise ArtifactFormatError(f"{path} does not contain an artifact document")

    schema = _require(doc, "schema")
    try:
        name, major = str(schema).rsplit("/", 1)
        major_num = int(major)
    except ValueError:
        raise ArtifactFormatError(f"unrecognized schema id {schema!r}") from None
    if name != SCHEMA.rsplit("/", 1)[0]:
        raise ArtifactFormatError(f"unrecognized schema id {schema!r}")
    if major_num != _SCHEMA_MAJOR:
        raise ArtifactVersionError(
            f"artifact schema major version {major_num} is not supported "
            f"(this build reads version {_SCHEMA_MAJOR})"
        )

    raw_cfg = _require(doc, "config")
    config = PipelineConfig(
        knn=raw_cfg.get("knn"),
        epsilon=raw_cfg.get("epsilon"),
        cycle_threshold=raw_cfg.get("cycle_threshold", 12),
        initial_charts=raw_cfg.get("initial_charts"),
        target_dim=raw_cfg.get("target_dim", 2),
        seed=raw_cfg.get("seed", 0),
        trust_k=raw_cfg.get("trust_k", 10),
        baseline=raw_cfg.get("baseline", False),
        noise_sigma=raw_cfg.get("noise_sigma", 0.0),
        chord_bound=raw_cfg.get("chord_bound"),
    )
    try:
        cloud = np.array(_require(doc, "cloud"), dtype=np.float64)
        charts = tuple(
            (int(c["id"]), np.array(c["vertices"], dtype=np.int64))
            for c in _require(doc, "charts")
        )
        embeddings = tuple(
            ChartEmbedding(
                chart_id=int(e["chart_id"]),
                dim=int(e["dim"]),
                vertex_ids=np.array(e["vertex_ids"], dtype=np.int64),
                coords=np.array(e["coords"], dtype=np.float64),
                residual=float(e["residual"]),
            )
            for e in _require(doc, "embeddings")
        )
        coords_by_chart = {emb.chart_id: emb.coords for emb in embeddings}
        triangulations = tuple(
            (
                int(t["chart_id"]),
                Triangulation(
                    dim=int(t["dim"]),
                    simplices=np.array(t["simplices"], dtype=np.int64),
                    vertex_coords=coords_by_chart[int(t["chart_id"])],
                ),
            )
            for t in _require(doc, "triangulations")
        )
        raw_trust = _require(doc, "trust")
        trust = TrustworthinessReport(
            per_chart=tuple(
                (int(cid), float(score)) for cid, score in raw_trust["per_chart"]
            ),
            worst=float(raw_trust["worst"]),
            mean=float(raw_trust["mean"]),
            k_neighbors=int(raw_trust["k_neighbors"]),
        )
        raw_params = doc.get("params")
        params = None
        if raw_params is not None:
            params = (
                tuple(str(n) for n in raw_params["names"]),
                np.array(raw_params["values"], dtype=np.float64),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactFormatError(f"{path} has malformed content: {exc}") from exc

    return AtlasArtifact(
        config=config,
        cloud=cloud,
        charts=charts,
        embeddings=embeddings,
        triangulations=triangulations,
        trust=trust,
        atlas_meta=doc.get("atlas_meta", {}),
        input_sha256=str(_require(doc, "input_sha256")),
        input_name=doc.get("input_name"),
        params=params,
        tool_version=str(_require(doc, "tool_version")),
        schema=str(schema),
    )
