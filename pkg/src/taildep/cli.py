"""Command-line front end: simulate, plot, estimate.

``simulate`` runs a seeded Monte Carlo study for one data-generating
process and writes a metrics CSV plus a JSON manifest echoing the fully
resolved configuration. ``plot`` turns metric CSVs into static SVG charts,
one per (process, metric), with the fixed per-estimator color identities.
``estimate`` applies a configured estimator to a user-supplied data file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from taildep import __version__
from taildep.dgp import DGP_NAMES
from taildep.estimators import compute_ranks
from taildep.simulate import (
    DEFAULT_ESTIMATORS,
    ESTIMATOR_TABLE,
    PLOT_STYLES,
    EstimatorSpec,
    ExperimentConfig,
    config_from_flat,
    config_to_flat,
    evaluate_estimator,
    read_metrics_csv,
    run_experiment,
    write_metrics_csv,
)
from taildep.svgplot import Series, render_line_chart

_METRICS = ("squared_bias", "variance", "mse")
_METRIC_TITLES = {"squared_bias": "Squared Bias", "variance": "Variance", "mse": "MSE"}

# Keys of the flat config format that hold lists of numbers / points / names.
_INT_LIST_KEYS = {"k_grid", "dot.kset", "penalized.index_set"}
_FLOAT_LIST_KEYS = {"penalized.grid", "penalized.weights"}
_POINT_LIST_KEYS = {"eval_points", "rho_points", "penalized.eval_points"}
_STR_LIST_KEYS = {"estimators"}
_INT_KEYS = {"n", "reps", "seed", "workers", "ratio.kbar", "beirlant.kbar"}
_STR_KEYS = {"dgp"}


def _parse_point_list(text: str) -> list[list[float]]:
    return [[float(c) for c in chunk.split(",")] for chunk in text.split(";") if chunk.strip()]


def _parse_flat_value(key: str, text: str):
    text = text.strip()
    if key in _STR_KEYS:
        return text
    if key in _STR_LIST_KEYS:
        return [item.strip() for item in text.split(",") if item.strip()]
    if key in _INT_LIST_KEYS:
        return [int(item) for item in text.split(",") if item.strip()]
    if key in _FLOAT_LIST_KEYS:
        return [float(item) for item in text.split(",") if item.strip()]
    if key in _POINT_LIST_KEYS:
        return _parse_point_list(text)
    if key in _INT_KEYS:
        return int(text)
    return float(text)


def load_flat_config(path: Path) -> dict:
    """Read a flat key-value config file, or the config block of a manifest."""
    text = path.read_text()
    if path.suffix == ".json":
        payload = json.loads(text)
        return payload.get("config", payload)
    flat = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        try:
            flat[key] = _parse_flat_value(key, value)
        except ValueError:
            raise ValueError(f"{path}: line {lineno}: cannot parse value for {key!r}") from None
    return flat


def _write_manifest(config: ExperimentConfig, csv_path: Path, manifest_path: Path) -> None:
    import scipy

    manifest = {
        "config": config_to_flat(config),
        "seed": config.seed,
        "output": csv_path.name,
        "versions": {
            "taildep": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def cmd_simulate(args) -> int:
    flat = {}
    if args.config:
        flat.update(load_flat_config(Path(args.config)))
    if args.dgp:
        flat["dgp"] = args.dgp
    if "dgp" not in flat:
        print(
            f"error: no DGP given; pass --dgp or a config file (valid names: {', '.join(DGP_NAMES)})",
            file=sys.stderr,
        )
        return 2
    for key, value in (
        ("n", args.n),
        ("reps", args.reps),
        ("seed", args.seed),
        ("workers", args.workers),
    ):
        if value is not None:
            flat[key] = value
    if args.estimators:
        flat["estimators"] = [e.strip() for e in args.estimators.split(",") if e.strip()]
    if "workers" not in flat and os.environ.get("TAILDEP_WORKERS"):
        flat["workers"] = int(os.environ["TAILDEP_WORKERS"])

    config = config_from_flat(flat)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = run_experiment(config)
    csv_path = out_dir / f"{config.dgp}.csv"
    write_metrics_csv(table, csv_path)
    _write_manifest(config, csv_path, out_dir / f"{config.dgp}.manifest.json")
    print(f"wrote {csv_path}")
    return 0


def cmd_plot(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    known_order = list(ESTIMATOR_TABLE)
    for csv_file in args.inputs:
        rows = read_metrics_csv(csv_file)
        by_dgp: dict[str, list[dict]] = {}
        for row in rows:
            by_dgp.setdefault(row["dgp"], []).append(row)
        for dgp, dgp_rows in by_dgp.items():
            estimators = sorted(
                {r["estimator"] for r in dgp_rows},
                key=lambda e: (known_order.index(e) if e in known_order else len(known_order), e),
            )
            for metric in _METRICS:
                series = []
                for est in estimators:
                    pts = sorted(
                        ((r["k"], r[metric]) for r in dgp_rows if r["estimator"] == est),
                        key=lambda p: p[0],
                    )
                    color, dash = PLOT_STYLES.get(est, ("gray", None))
                    series.append(
                        Series(
                            est,
                            color,
                            dash,
                            tuple(float(k) for k, _ in pts),
                            tuple(v for _, v in pts),
                        )
                    )
                svg = render_line_chart(
                    series,
                    title=f"{dgp}: {_METRIC_TITLES[metric]}",
                    x_label="k",
                    y_label=_METRIC_TITLES[metric],
                    log_y=args.log_y,
                )
                target = out_dir / f"{dgp}-{metric}.svg"
                target.write_text(svg)
                print(f"wrote {target}")
    return 0


def _load_data_csv(path: Path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for i, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            parsed = []
            for j, cell in enumerate(cells, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ValueError(f"{path}: row {i}, column {j}: not a number: {cell!r}") from None
            rows.append(parsed)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: inconsistent column counts {sorted(widths)}")
    return np.asarray(rows)


_RHO_METHOD_FLAGS = {
    "none": "none",
    "fougeres": "fougeres_pointwise",
    "fougeres-agg": "fougeres_agg",
    "beirlant": "beirlant_pointwise",
    "goegebeur": "goegebeur_pointwise",
    "penalized-agg": "penalized_agg",
}


def cmd_estimate(args) -> int:
    data = _load_data_csv(Path(args.data))
    ranks = compute_ranks(data)
    points = _parse_point_list(args.points)
    d = data.shape[1]
    for pt in points:
        if len(pt) != d:
            raise ValueError(f"point {pt} has {len(pt)} coordinates but the data has {d} columns")

    stdf_method = args.estimator
    rho_method = _RHO_METHOD_FLAGS[args.rho_method]
    if stdf_method == "empirical":
        rho_method = "none"
    elif rho_method == "none":
        rho_method = "penalized_agg"
    spec = next(
        (
            s
            for s in ESTIMATOR_TABLE.values()
            if s.stdf_method == stdf_method and s.rho_method == rho_method
        ),
        None,
    )
    if spec is None:
        spec = EstimatorSpec(f"{stdf_method}+{rho_method}", stdf_method, rho_method)

    coord_header = ",".join(f"x{j + 1}" for j in range(d))
    print(f"{coord_header},k,estimator,rho_method,value")
    for pt in points:
        value = evaluate_estimator(spec, ranks, args.k, np.asarray(pt))
        coords = ",".join(f"{c:g}" for c in pt)
        print(f"{coords},{args.k},{stdf_method},{rho_method},{value:.10g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taildep",
        description="Stable tail dependence estimation and Monte Carlo benchmarking",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo study for one DGP")
    sim.add_argument("--dgp", choices=DGP_NAMES, help="data-generating process")
    sim.add_argument("--n", type=int, help="sample size per replication (default 1000)")
    sim.add_argument("--reps", type=int, help="number of replications (default 1000)")
    sim.add_argument("--seed", type=int, help="base seed (default 0)")
    sim.add_argument(
        "--workers", type=int, help="parallel workers (default $TAILDEP_WORKERS or 1)"
    )
    sim.add_argument("--out", default="out", help="output directory")
    sim.add_argument(
        "--estimators",
        help=f"comma-separated estimator ids (default all: {','.join(DEFAULT_ESTIMATORS)})",
    )
    sim.add_argument("--config", help="key-value config file or a previously written manifest")
    sim.set_defaults(func=cmd_simulate)

    plot = sub.add_parser("plot", help="render metric CSVs as SVG charts")
    plot.add_argument("--in", dest="inputs", nargs="+", required=True, help="metrics CSV files")
    plot.add_argument("--out", default="plots", help="output directory")
    plot.add_argument("--log-y", action="store_true", help="log-scale the y axis")
    plot.set_defaults(func=cmd_plot)

    est = sub.add_parser("estimate", help="apply an estimator to a data file")
    est.add_argument("--data", required=True, help="headerless CSV of n rows x d columns")
    est.add_argument("--k", type=int, required=True, help="number of tail order statistics")
    est.add_argument(
        "--points", required=True, help="evaluation points, e.g. '1,1;0.5,0.5'"
    )
    est.add_argument(
        "--estimator",
        choices=("empirical", "dot", "dot_aggregated", "beirlant"),
        default="empirical",
    )
    est.add_argument(
        "--rho-method",
        choices=tuple(_RHO_METHOD_FLAGS),
        default="none",
        help="rho estimator for the bias-corrected methods (default penalized-agg)",
    )
    est.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
