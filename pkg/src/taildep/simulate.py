"""Seeded Monte Carlo benchmarking of the tail dependence estimators.

A run draws N independent samples from one data-generating process, ranks
each once, evaluates every configured estimator at every (k, x) pair, and
aggregates squared bias, variance (1/N convention, so the bias-variance
identity is exact) and MSE per (estimator, k), averaging over the
evaluation points. Replications use disjoint random streams keyed by
(seed, process, replication), so the resulting table is byte-identical
regardless of how many workers share the loop.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from taildep.dgp import DGP_TABLE, RngStream, dgp_index, sample_dgp, true_stdf
from taildep.estimators import (
    StdfEvaluator,
    _as_evaluator,
    beirlant_stdf,
    compute_ranks,
    dot_aggregated_stdf,
    dot_stdf,
    empirical_stdf,
    LevelOutOfRangeError,
)
from taildep.rho import (
    DEFAULT_RHO_EVAL_POINTS,
    DegenerateCurveError,
    DegenerateRatioError,
    PenalizedRhoConfig,
    RatioRhoConfig,
    proportional_weights,
    rho_beirlant,
    rho_fougeres,
    rho_fougeres_agg,
    rho_goegebeur,
    rho_penalized_agg,
)

DEFAULT_K_GRID = tuple(range(1, 952, 50))
DEFAULT_EVAL_POINTS = tuple((i / 10, (10 - i) / 10) for i in range(1, 11))

STDF_METHODS = ("empirical", "dot", "dot_aggregated", "beirlant")
RHO_METHODS = (
    "none",
    "fougeres_pointwise",
    "fougeres_agg",
    "beirlant_pointwise",
    "goegebeur_pointwise",
    "penalized_agg",
)
_AGGREGATED_RHO = ("fougeres_agg", "penalized_agg")


@dataclass(frozen=True)
class Tuning:
    """All estimator tuning parameters, defaulted to the benchmark settings."""

    ratio: RatioRhoConfig = RatioRhoConfig()
    penalized: PenalizedRhoConfig = PenalizedRhoConfig()
    rho_eval_points: tuple[tuple[float, ...], ...] = DEFAULT_RHO_EVAL_POINTS
    dot_a: float = 0.4
    dot_kset: tuple[int, ...] = DEFAULT_K_GRID
    beirlant_kbar: int = 990
    beirlant_tau: float = 5.0
    beirlant_tau_b: float = 0.5
    goegebeur_tau: float = 10.0
    goegebeur_xi1: float = 4.0
    goegebeur_xi2: float = 4.0


@dataclass(frozen=True)
class EstimatorSpec:
    """One estimator configuration: an stdf method paired with a rho method."""

    estimator_id: str
    stdf_method: str
    rho_method: str

    def __post_init__(self):
        if self.stdf_method not in STDF_METHODS:
            raise ValueError(f"unknown stdf method {self.stdf_method!r}")
        if self.rho_method not in RHO_METHODS:
            raise ValueError(f"unknown rho method {self.rho_method!r}")
        if (self.stdf_method == "empirical") != (self.rho_method == "none"):
            raise ValueError("the plain empirical estimator is exactly the rho-free one")


# The eight benchmark rows, with their plot identities.
ESTIMATOR_TABLE: dict[str, EstimatorSpec] = {
    spec.estimator_id: spec
    for spec in (
        EstimatorSpec("empirical", "empirical", "none"),
        EstimatorSpec("dot-fougeres", "dot", "fougeres_pointwise"),
        EstimatorSpec("dot-fougeres-agg", "dot", "fougeres_agg"),
        EstimatorSpec("dot-agg-fougeres-agg", "dot_aggregated", "fougeres_agg"),
        EstimatorSpec("dot-agg-penalized", "dot_aggregated", "penalized_agg"),
        EstimatorSpec("beirlant-beirlant", "beirlant", "beirlant_pointwise"),
        EstimatorSpec("beirlant-goegebeur", "beirlant", "goegebeur_pointwise"),
        EstimatorSpec("beirlant-penalized", "beirlant", "penalized_agg"),
    )
}

# (stroke color, SVG dash pattern or None)
PLOT_STYLES: dict[str, tuple[str, str | None]] = {
    "empirical": ("black", None),
    "dot-fougeres": ("purple", None),
    "dot-fougeres-agg": ("red", None),
    "dot-agg-fougeres-agg": ("orange", None),
    "dot-agg-penalized": ("orange", "8 5"),
    "beirlant-beirlant": ("blue", None),
    "beirlant-goegebeur": ("blue", "2 4"),
    "beirlant-penalized": ("blue", "8 5"),
}

DEFAULT_ESTIMATORS = tuple(ESTIMATOR_TABLE)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved description of one Monte Carlo run."""

    dgp: str
    n: int = 1000
    reps: int = 1000
    k_grid: tuple[int, ...] = DEFAULT_K_GRID
    eval_points: tuple[tuple[float, ...], ...] = DEFAULT_EVAL_POINTS
    estimators: tuple[str, ...] = DEFAULT_ESTIMATORS
    seed: int = 0
    workers: int = 1
    tuning: Tuning = field(default_factory=Tuning)

    def __post_init__(self):
        if self.dgp not in DGP_TABLE:
            raise ValueError(f"unknown DGP {self.dgp!r}; valid names: {', '.join(DGP_TABLE)}")
        if self.n < 1 or self.reps < 1 or self.workers < 1:
            raise ValueError("n, reps and workers must be >= 1")
        if not self.k_grid or any(k < 1 for k in self.k_grid):
            raise ValueError("k_grid must be nonempty with positive entries")
        if not self.eval_points:
            raise ValueError("eval_points must be nonempty")
        for est in self.estimators:
            if est not in ESTIMATOR_TABLE:
                raise ValueError(
                    f"unknown estimator {est!r}; valid ids: {', '.join(ESTIMATOR_TABLE)}"
                )


@dataclass(frozen=True)
class MetricsRow:
    estimator: str
    k: int
    squared_bias: float
    variance: float
    mse: float
    reps: int
    failures: int


@dataclass(frozen=True)
class MetricsTable:
    dgp: str
    rows: tuple[MetricsRow, ...]
    fingerprint: str

    def row(self, estimator: str, k: int) -> MetricsRow:
        for r in self.rows:
            if r.estimator == estimator and r.k == k:
                return r
        raise KeyError((estimator, k))


def config_fingerprint(config: ExperimentConfig) -> str:
    payload = json.dumps(config_to_flat(config), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:16]


def _pointwise_rho(method: str, ev, tuning: Tuning, x) -> float:
    ratio = tuning.ratio
    try:
        if method == "fougeres_pointwise":
            return rho_fougeres(ev, ratio, x).value
        if method == "beirlant_pointwise":
            return rho_beirlant(ev, ratio, tuning.beirlant_tau, x).value
        return rho_goegebeur(
            ev, ratio, tuning.goegebeur_tau, tuning.goegebeur_xi1, tuning.goegebeur_xi2, x
        ).value
    except DegenerateRatioError:
        return ratio.fallback_value


def _aggregated_rho(method: str, ev, tuning: Tuning) -> float:
    if method == "fougeres_agg":
        return rho_fougeres_agg(ev, tuning.ratio, tuning.rho_eval_points).value
    return rho_penalized_agg(ev, tuning.penalized).value


def _stdf_estimate(ev, spec: EstimatorSpec, k: int, x, rho: float | None, tuning: Tuning) -> float:
    method = spec.stdf_method
    if method == "empirical":
        return empirical_stdf(ev, k, x)
    if method == "dot":
        return dot_stdf(ev, k, tuning.dot_a, rho, x)
    if method == "dot_aggregated":
        return dot_aggregated_stdf(ev, tuning.dot_kset, tuning.dot_a, rho, x)
    return beirlant_stdf(
        ev, k, tuning.beirlant_kbar, tuning.beirlant_tau, tuning.beirlant_tau_b, rho, x
    )


def evaluate_estimator(spec: EstimatorSpec, ranks, k: int, x, tuning: Tuning | None = None) -> float:
    """One-off evaluation of a configured estimator at a single (k, x).

    Aggregated rho methods estimate rho over the tuning evaluation points;
    pointwise methods estimate it at the same x. Inside a simulation the
    per-replication loop caches these; this entry point recomputes them.
    """
    tuning = tuning or Tuning()
    ev = _as_evaluator(ranks)
    if spec.rho_method == "none":
        rho = None
    elif spec.rho_method in _AGGREGATED_RHO:
        rho = _aggregated_rho(spec.rho_method, ev, tuning)
    else:
        rho = _pointwise_rho(spec.rho_method, ev, tuning, np.asarray(x, dtype=np.float64))
    return _stdf_estimate(ev, spec, k, x, rho, tuning)


def _evaluate_replication(ranks, config: ExperimentConfig) -> np.ndarray:
    """All estimates of one replication, shaped (estimators, k, x); failures are NaN."""
    tuning = config.tuning
    ev = StdfEvaluator(ranks)
    specs = [ESTIMATOR_TABLE[e] for e in config.estimators]
    points = [np.asarray(p, dtype=np.float64) for p in config.eval_points]
    out = np.full((len(specs), len(config.k_grid), len(points)), np.nan)

    agg_cache: dict[str, float] = {}

    def rho_for(spec: EstimatorSpec, x) -> float | None:
        if spec.rho_method == "none":
            return None
        if spec.rho_method in _AGGREGATED_RHO:
            if spec.rho_method not in agg_cache:
                agg_cache[spec.rho_method] = _aggregated_rho(spec.rho_method, ev, tuning)
            return agg_cache[spec.rho_method]
        return _pointwise_rho(spec.rho_method, ev, tuning, x)

    for ei, spec in enumerate(specs):
        k_free = spec.stdf_method == "dot_aggregated"
        for xi, x in enumerate(points):
            try:
                rho = rho_for(spec, x)
            except (LevelOutOfRangeError, DegenerateCurveError):
                continue
            if k_free:
                try:
                    out[ei, :, xi] = _stdf_estimate(ev, spec, config.k_grid[0], x, rho, tuning)
                except LevelOutOfRangeError:
                    pass
                continue
            for ki, k in enumerate(config.k_grid):
                try:
                    out[ei, ki, xi] = _stdf_estimate(ev, spec, k, x, rho, tuning)
                except LevelOutOfRangeError:
                    pass
    return out


def _replication_chunk(args) -> tuple[list[int], np.ndarray]:
    config, reps = args
    spec = DGP_TABLE[config.dgp]
    stream_index = dgp_index(config.dgp)
    chunk = np.empty(
        (len(reps), len(config.estimators), len(config.k_grid), len(config.eval_points))
    )
    for pos, rep in enumerate(reps):
        sample = sample_dgp(spec, config.n, RngStream(config.seed, stream_index, rep))
        chunk[pos] = _evaluate_replication(compute_ranks(sample), config)
    return list(reps), chunk


def run_experiment(config: ExperimentConfig) -> MetricsTable:
    """Run the full replication loop and aggregate the metric table.

    Estimator evaluations that fail are excluded and counted per
    (estimator, k) row; a row whose failure share exceeds 1% of its
    replication-point budget is reported as NaN. Under the default
    configuration no evaluation fails.
    """
    spec = DGP_TABLE[config.dgp]
    n_est, n_k, n_x = len(config.estimators), len(config.k_grid), len(config.eval_points)
    estimates = np.empty((config.reps, n_est, n_k, n_x))

    rep_ids = list(range(config.reps))
    if config.workers > 1 and config.reps > 1:
        pieces = np.array_split(rep_ids, min(config.workers * 4, config.reps))
        jobs = [(config, [int(r) for r in piece]) for piece in pieces if len(piece)]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for done_reps, chunk in pool.map(_replication_chunk, jobs):
                estimates[done_reps] = chunk
    else:
        _, estimates[:] = _replication_chunk((config, rep_ids))

    truth = np.array([true_stdf(spec, p) for p in config.eval_points])
    rows = _aggregate(config, estimates, truth)
    return MetricsTable(config.dgp, rows, config_fingerprint(config))


def _aggregate(config: ExperimentConfig, estimates: np.ndarray, truth: np.ndarray):
    reps = estimates.shape[0]
    valid = ~np.isnan(estimates)
    count = valid.sum(axis=0)
    filled = np.where(valid, estimates, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = filled.sum(axis=0) / count
        dev = np.where(valid, estimates - mean[None], 0.0)
        var_x = (dev * dev).sum(axis=0) / count
        err = np.where(valid, estimates - truth[None, None, None, :], 0.0)
        mse_x = (err * err).sum(axis=0) / count
        bias2_x = (mean - truth[None, None, :]) ** 2

    rows = []
    budget = reps * len(config.eval_points)
    for ei, est in enumerate(config.estimators):
        for ki, k in enumerate(config.k_grid):
            failures = int(budget - count[ei, ki].sum())
            if failures > 0.01 * budget:
                sb = var = mse = float("nan")
            else:
                sb = float(bias2_x[ei, ki].mean())
                var = float(var_x[ei, ki].mean())
                mse = float(mse_x[ei, ki].mean())
            rows.append(MetricsRow(est, int(k), sb, var, mse, reps, failures))
    rows.sort(key=lambda r: (r.estimator, r.k))
    return tuple(rows)


CSV_HEADER = "dgp,estimator,k,squared_bias,variance,mse,reps,failures"


def write_metrics_csv(table: MetricsTable, path) -> None:
    """Write the metric table as deterministic CSV (10 significant digits)."""
    lines = [CSV_HEADER]
    for r in sorted(table.rows, key=lambda r: (r.estimator, r.k)):
        lines.append(
            f"{table.dgp},{r.estimator},{r.k},{r.squared_bias:.10g},"
            f"{r.variance:.10g},{r.mse:.10g},{r.reps},{r.failures}"
        )
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write metrics to {path}: {exc}") from exc


def read_metrics_csv(path) -> list[dict]:
    """Parse a metrics CSV back into row dicts, reporting the offending row on error."""
    rows = []
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: row 1: expected header {CSV_HEADER!r}")
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 8:
            raise ValueError(f"{path}: row {lineno}: expected 8 fields, got {len(parts)}")
        try:
            rows.append(
                {
                    "dgp": parts[0],
                    "estimator": parts[1],
                    "k": int(parts[2]),
                    "squared_bias": float(parts[3]),
                    "variance": float(parts[4]),
                    "mse": float(parts[5]),
                    "reps": int(parts[6]),
                    "failures": int(parts[7]),
                }
            )
        except ValueError:
            raise ValueError(f"{path}: row {lineno}: malformed numeric field") from None
    return rows


def config_to_flat(config: ExperimentConfig) -> dict:
    """Flatten a config into the key-value form used by config files and manifests."""
    t = config.tuning
    p = t.penalized
    return {
        "dgp": config.dgp,
        "n": config.n,
        "reps": config.reps,
        "seed": config.seed,
        "workers": config.workers,
        "k_grid": list(config.k_grid),
        "eval_points": [list(pt) for pt in config.eval_points],
        "estimators": list(config.estimators),
        "rho_points": [list(pt) for pt in t.rho_eval_points],
        "ratio.kbar": t.ratio.kbar,
        "ratio.a": t.ratio.a,
        "ratio.r": t.ratio.r,
        "ratio.fallback_threshold": t.ratio.fallback_threshold,
        "ratio.fallback_value": t.ratio.fallback_value,
        "dot.a": t.dot_a,
        "dot.kset": list(t.dot_kset),
        "beirlant.kbar": t.beirlant_kbar,
        "beirlant.tau": t.beirlant_tau,
        "beirlant.tau_b": t.beirlant_tau_b,
        "goegebeur.tau": t.goegebeur_tau,
        "goegebeur.xi1": t.goegebeur_xi1,
        "goegebeur.xi2": t.goegebeur_xi2,
        "penalized.index_set": list(p.index_set),
        "penalized.k_rho": p.k_rho,
        "penalized.weights": list(p.weights),
        "penalized.k_lo": p.k_lo,
        "penalized.k_hi": p.k_hi,
        "penalized.eta": p.eta,
        "penalized.grid": list(p.grid),
        "penalized.eval_points": [list(pt) for pt in p.eval_points],
    }


def config_from_flat(flat: dict) -> ExperimentConfig:
    """Inverse of :func:`config_to_flat`; missing keys keep their defaults."""
    base = ExperimentConfig(dgp=flat["dgp"])
    t = base.tuning

    def points(key, default):
        if key not in flat:
            return default
        return tuple(tuple(float(c) for c in pt) for pt in flat[key])

    ratio = replace(
        t.ratio,
        kbar=int(flat.get("ratio.kbar", t.ratio.kbar)),
        a=float(flat.get("ratio.a", t.ratio.a)),
        r=float(flat.get("ratio.r", t.ratio.r)),
        fallback_threshold=float(flat.get("ratio.fallback_threshold", t.ratio.fallback_threshold)),
        fallback_value=float(flat.get("ratio.fallback_value", t.ratio.fallback_value)),
    )
    pen_default = t.penalized
    index_set = tuple(int(i) for i in flat.get("penalized.index_set", pen_default.index_set))
    if "penalized.weights" in flat:
        weights = tuple(float(wv) for wv in flat["penalized.weights"])
    elif "penalized.index_set" in flat:
        weights = proportional_weights(index_set)
    else:
        weights = pen_default.weights
    penalized = PenalizedRhoConfig(
        index_set=index_set,
        k_rho=float(flat.get("penalized.k_rho", pen_default.k_rho)),
        weights=weights,
        k_lo=float(flat.get("penalized.k_lo", pen_default.k_lo)),
        k_hi=float(flat.get("penalized.k_hi", pen_default.k_hi)),
        eta=float(flat.get("penalized.eta", pen_default.eta)),
        grid=tuple(float(g) for g in flat.get("penalized.grid", pen_default.grid)),
        eval_points=points("penalized.eval_points", pen_default.eval_points),
    )
    tuning = Tuning(
        ratio=ratio,
        penalized=penalized,
        rho_eval_points=points("rho_points", t.rho_eval_points),
        dot_a=float(flat.get("dot.a", t.dot_a)),
        dot_kset=tuple(int(k) for k in flat.get("dot.kset", t.dot_kset)),
        beirlant_kbar=int(flat.get("beirlant.kbar", t.beirlant_kbar)),
        beirlant_tau=float(flat.get("beirlant.tau", t.beirlant_tau)),
        beirlant_tau_b=float(flat.get("beirlant.tau_b", t.beirlant_tau_b)),
        goegebeur_tau=float(flat.get("goegebeur.tau", t.goegebeur_tau)),
        goegebeur_xi1=float(flat.get("goegebeur.xi1", t.goegebeur_xi1)),
        goegebeur_xi2=float(flat.get("goegebeur.xi2", t.goegebeur_xi2)),
    )
    return ExperimentConfig(
        dgp=flat["dgp"],
        n=int(flat.get("n", base.n)),
        reps=int(flat.get("reps", base.reps)),
        k_grid=tuple(int(k) for k in flat.get("k_grid", base.k_grid)),
        eval_points=points("eval_points", base.eval_points),
        estimators=tuple(flat.get("estimators", base.estimators)),
        seed=int(flat.get("seed", base.seed)),
        workers=int(flat.get("workers", base.workers)),
        tuning=tuning,
    )
