"""Command-line interface.

Subcommands: generate (synthetic clouds), learn (run the pipeline),
report (trustworthiness table), lift (chart coords -> ambient point),
export (plot-ready CSV).  Exit codes: 0 success, 1 usage error,
2 data/structural error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import AtlasError, ParseError
from .pipeline import (
    PipelineConfig,
    format_float,
    ingest_csv,
    load_artifact,
    run,
    save_artifact,
)
from .synthetic import GENERATORS, add_gaussian_noise

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; this CLI uses 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _chart_count(text: str):
    if text == "auto":
        return "auto"
    return int(text)


def _build_parser() -> _Parser:
    parser = _Parser(prog="atlaslearn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="sample a synthetic manifold to CSV")
    gen.add_argument("manifold", choices=sorted(GENERATORS))
    gen.add_argument("--n", type=int, required=True, help="number of points")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--noise-sigma", type=float, default=0.0)
    gen.add_argument("--out", required=True, help="output CSV path")

    learn = sub.add_parser("learn", help="learn an atlas from a CSV cloud")
    learn.add_argument("--input", required=True, help="input CSV path")
    rule = learn.add_mutually_exclusive_group(required=True)
    rule.add_argument("--knn", type=int, help="k-nearest-neighbor graph")
    rule.add_argument("--epsilon", type=float, help="distance-threshold graph")
    learn.add_argument(
        "--lambda",
        dest="cycle_threshold",
        type=int,
        default=12,
        help="atomic-cycle length threshold (default 12)",
    )
    learn.add_argument(
        "--charts",
        type=_chart_count,
        default=None,
        help="initial chart count: an integer, or 'auto' to double the "
        "count from 2 until every initial ball is hole-free "
        "(default: 2, the coarsest seeding)",
    )
    learn.add_argument("--dim", type=int, default=2, help="embedding dimension")
    learn.add_argument("--seed", type=int, default=0)
    learn.add_argument("--baseline", action="store_true", help="single-chart mode")
    learn.add_argument("--trust-k", type=int, default=10)
    learn.add_argument(
        "--chord-bound",
        type=int,
        default=None,
        help="max shortcut length for the atomic-cycle test (default: unbounded)",
    )
    learn.add_argument(
        "--params",
        default=None,
        help="optional CSV of per-point ground-truth parameters to embed in the artifact",
    )
    learn.add_argument("--out", required=True, help="artifact output path")

    rep = sub.add_parser("report", help="print the trustworthiness table")
    rep.add_argument("--artifact", required=True)
    rep.add_argument(
        "--trust-k",
        type=int,
        default=None,
        help="neighborhood size (default: the k stored in the artifact)",
    )

    lif = sub.add_parser("lift", help="map chart coordinates to ambient space")
    lif.add_argument("--artifact", required=True)
    lif.add_argument("--chart", type=int, required=True)
    lif.add_argument("--point", required=True, help="comma-separated reals")

    exp = sub.add_parser("export", help="write plot-ready CSV")
    exp.add_argument("--artifact", required=True)
    exp.add_argument("--what", choices=["embeddings", "charts"], required=True)
    exp.add_argument("--out", required=True)
    return parser


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _params_path(out: str) -> str:
    stem = out[:-4] if out.endswith(".csv") else out
    return stem + ".params.csv"


def _cmd_generate(args) -> int:
    labeled = GENERATORS[args.manifold](args.n, args.seed)
    cloud = labeled.cloud
    if args.noise_sigma > 0:
        # Derive the noise stream from the generation seed; the params
        # file still records the exact manifold parameters.
        cloud = add_gaussian_noise(cloud, args.noise_sigma, args.seed + 1)
    dim = cloud.shape[1]
    _write_csv(
        args.out,
        [f"x{i}" for i in range(dim)],
        ([format_float(v) for v in row] for row in cloud),
    )
    ppath = _params_path(args.out)
    with open(ppath, "w", encoding="utf-8") as fh:
        fh.write(f"# generator: {labeled.generator}\n")
        for key, val in sorted(labeled.meta.items()):
            fh.write(f"# {key}: {val}\n")
        fh.write(",".join(labeled.param_names) + "\n")
        for row in labeled.params:
            fh.write(",".join(format_float(v) for v in row) + "\n")
    print(f"wrote {cloud.shape[0]} x {dim} cloud to {args.out}")
    print(f"wrote ground-truth parameters to {ppath}")
    return 0


def _cmd_learn(args) -> int:
    cloud = ingest_csv(args.input)
    params = None
    if args.params is not None:
        values = ingest_csv(args.params)
        if values.shape[0] != cloud.shape[0]:
            raise ParseError(
                f"{args.params} has {values.shape[0]} rows but the cloud has "
                f"{cloud.shape[0]}"
            )
        names = _params_header(args.params, values.shape[1])
        params = (names, values)
    config = PipelineConfig(
        knn=args.knn,
        epsilon=args.epsilon,
        cycle_threshold=args.cycle_threshold,
        initial_charts=args.charts,
        target_dim=args.dim,
        seed=args.seed,
        trust_k=args.trust_k,
        baseline=args.baseline,
        chord_bound=args.chord_bound,
    )
    artifact = run(config, cloud, params=params, input_name=args.input)
    save_artifact(artifact, args.out)
    print(
        f"learned {artifact.chart_count} chart(s); worst trustworthiness "
        f"(k={artifact.trust.k_neighbors}) = {artifact.trust.worst:.4f}; "
        f"artifact: {args.out}"
    )
    return 0


def _params_header(path: str, width: int) -> tuple[str, ...]:
    """Column names from the params CSV header, or positional names."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                cells = [c.strip() for c in line.split(",")]
                try:
                    [float(c) for c in cells]
                except ValueError:
                    return tuple(cells)
                break
    except OSError:
        pass
    return tuple(f"p{i}" for i in range(width))


def _cmd_report(args) -> int:
    artifact = load_artifact(args.artifact)
    k = args.trust_k if args.trust_k is not None else artifact.trust.k_neighbors
    if k == artifact.trust.k_neighbors:
        trust = artifact.trust
    else:
        from .metrics import report as _report

        trust = _report(artifact.embeddings, artifact.cloud, k)
    print(f"charts: {artifact.chart_count}")
    print(f"trustworthiness k: {trust.k_neighbors}")
    print(f"worst: {trust.worst:.6f}")
    print(f"mean:  {trust.mean:.6f}")
    width = max(len(str(cid)) for cid, _ in trust.per_chart)
    for (cid, score), (_, verts) in zip(trust.per_chart, artifact.charts):
        print(f"  chart {cid:>{width}}: {score:.6f}  ({len(verts)} vertices)")
    return 0


def _cmd_lift(args) -> int:
    artifact = load_artifact(args.artifact)
    try:
        point = np.array([float(c) for c in args.point.split(",")])
    except ValueError:
        raise ParseError(f"--point must be comma-separated reals, got {args.point!r}")
    lifted = artifact.lift_point(args.chart, point)
    print(" ".join(format_float(v) for v in lifted))
    return 0


def _cmd_export(args) -> int:
    artifact = load_artifact(args.artifact)
    param_names: tuple[str, ...] = ()
    param_values = None
    if artifact.params is not None:
        param_names, param_values = artifact.params

    rows = []
    if args.what == "embeddings":
        dim = artifact.config.target_dim
        header = ["vertex", "chart"] + [f"e{i}" for i in range(dim)]
        for emb in artifact.embeddings:
            for vid, coord in zip(emb.vertex_ids, emb.coords):
                row = [str(int(vid)), str(emb.chart_id)]
                row += [format_float(v) for v in coord]
                if param_values is not None:
                    row += [format_float(v) for v in param_values[int(vid)]]
                rows.append(row)
    else:
        dim = artifact.cloud.shape[1]
        header = ["vertex", "chart"] + [f"x{i}" for i in range(dim)]
        for cid, verts in artifact.charts:
            for vid in verts:
                row = [str(int(vid)), str(cid)]
                row += [format_float(v) for v in artifact.cloud[int(vid)]]
                if param_values is not None:
                    row += [format_float(v) for v in param_values[int(vid)]]
                rows.append(row)
    header += list(param_names)
    _write_csv(args.out, header, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "learn": _cmd_learn,
    "report": _cmd_report,
    "lift": _cmd_lift,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except AtlasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
