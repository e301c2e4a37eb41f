"""Estimators of the second-order tail parameter rho (< 0).

Two families live here. The ratio estimators compare a scale-shift
difference of an estimated stdf curve at two points and read rho off the
log-ratio; each one is capped at zero and replaced by -1 when it lands
above -0.1. The penalized estimator fits ``b0 + b1 * (i / k_rho)^(-r)`` to
the empirical stdf curve over an index window by profiled weighted least
squares on a grid of candidate r, adding ``eta / |r|`` times the best
unpenalized fit so that minimizers near zero are discouraged.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from taildep.estimators import _as_evaluator, kernel_smoothed_stdf, power_kernel_stdf


class DegenerateRatioError(ArithmeticError):
    """A scale-shift difference vanished; the log-ratio is undefined."""


class DegenerateCurveError(ArithmeticError):
    """The stdf curve is flat; the profiled regression is undefined."""


@dataclass(frozen=True)
class RatioRhoConfig:
    """Tuning bundle for the ratio estimators of rho."""

    kbar: int = 990
    a: float = 0.4
    r: float = 0.4
    fallback_threshold: float = -0.1
    fallback_value: float = -1.0

    def __post_init__(self):
        if self.kbar < 1:
            raise ValueError(f"kbar must be >= 1, got {self.kbar}")
        if not 0 < self.a < 1:
            raise ValueError(f"a must lie in (0, 1), got {self.a}")
        if not 0 < self.r < 1:
            raise ValueError(f"r must lie in (0, 1), got {self.r}")
        if not self.fallback_threshold < 0:
            raise ValueError("fallback_threshold must be negative")
        if not self.fallback_value <= self.fallback_threshold:
            raise ValueError("fallback_value must not exceed fallback_threshold")


def proportional_weights(index_set) -> tuple[float, ...]:
    """Weights proportional to the index, normalized to sum to one."""
    idx = np.asarray(index_set, dtype=np.float64)
    if idx.size == 0 or (idx <= 0).any():
        raise ValueError("index set must be nonempty with positive entries")
    return tuple(idx / idx.sum())


_DEFAULT_INDEX_SET = tuple(range(50, 1001, 50))
_DEFAULT_WEIGHTS = proportional_weights(_DEFAULT_INDEX_SET)
_DEFAULT_GRID = tuple(-(i / 10) for i in range(40, 0, -1))
DEFAULT_RHO_EVAL_POINTS = tuple((i / 100, i / 100) for i in range(30, 71, 5))


@dataclass(frozen=True)
class PenalizedRhoConfig:
    """Tuning bundle for the penalized nonlinear least-squares estimator.

    Defaults: index window {50, 100, ..., 1000} with weights proportional to
    the index, scale k_rho = 1000, bounds [-4, -0.1], penalty weight 0.5,
    search grid {-4, -3.9, ..., -0.1}, and nine diagonal evaluation points
    (0.3, 0.3) .. (0.7, 0.7).
    """

    index_set: tuple[int, ...] = _DEFAULT_INDEX_SET
    k_rho: float = 1000.0
    weights: tuple[float, ...] = _DEFAULT_WEIGHTS
    k_lo: float = -4.0
    k_hi: float = -0.1
    eta: float = 0.5
    grid: tuple[float, ...] = _DEFAULT_GRID
    eval_points: tuple[tuple[float, ...], ...] = DEFAULT_RHO_EVAL_POINTS

    def __post_init__(self):
        if len(self.index_set) < 2:
            raise ValueError("index_set needs at least two levels")
        if any(i <= 0 for i in self.index_set):
            raise ValueError("index_set entries must be positive")
        if list(self.index_set) != sorted(self.index_set):
            raise ValueError("index_set must be ascending")
        if len(self.weights) != len(self.index_set):
            raise ValueError("weights must align with index_set")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if abs(math.fsum(self.weights) - 1.0) > 1e-9:
            raise ValueError("weights must sum to one")
        if not self.k_rho > 0:
            raise ValueError("k_rho must be positive")
        if not self.k_lo < self.k_hi < 0:
            raise ValueError("bounds must satisfy k_lo < k_hi < 0")
        if not self.grid:
            raise ValueError("grid must be nonempty")
        if list(self.grid) != sorted(self.grid):
            raise ValueError("grid must be ascending")
        if self.grid[0] < self.k_lo - 1e-12 or self.grid[-1] > self.k_hi + 1e-12:
            raise ValueError("grid must lie within [k_lo, k_hi]")
        if not self.eta >= 0:
            raise ValueError("eta must be nonnegative")
        if not self.eval_points:
            raise ValueError("eval_points must be nonempty")


@dataclass
class RhoEstimate:
    """A rho estimate, optionally with the per-point values behind it."""

    value: float
    per_point: dict[tuple[float, ...], float] | None = None


def delta_fougeres(ranks, kbar: int, a: float, x) -> float:
    """Scale-shift difference of the empirical stdf at level kbar."""
    if not 0 < a < 1:
        raise ValueError(f"a must lie in (0, 1), got {a}")
    ev = _as_evaluator(ranks)
    x = np.asarray(x, dtype=np.float64)
    return ev.at(kbar, a * x) / a - ev.at(kbar, x)


def _log_ratio_rho(delta_scaled: float, delta_base: float, r: float, cfg: RatioRhoConfig) -> float:
    if delta_base == 0.0 or delta_scaled == 0.0:
        raise DegenerateRatioError("scale-shift difference vanished")
    raw = 1.0 - math.log(abs(delta_scaled / delta_base)) / math.log(r)
    value = min(raw, 0.0)
    if value > cfg.fallback_threshold:
        return cfg.fallback_value
    return value


def rho_fougeres(ranks, cfg: RatioRhoConfig, x) -> RhoEstimate:
    """Log-ratio rho estimator built on the raw empirical stdf.

    Raises :class:`DegenerateRatioError` when either difference vanishes;
    aggregating callers map that to the fallback value.
    """
    ev = _as_evaluator(ranks)
    x = np.asarray(x, dtype=np.float64)
    d_base = delta_fougeres(ev, cfg.kbar, cfg.a, x)
    d_scaled = delta_fougeres(ev, cfg.kbar, cfg.a, cfg.r * x)
    return RhoEstimate(_log_ratio_rho(d_scaled, d_base, cfg.r, cfg))


def rho_beirlant(ranks, cfg: RatioRhoConfig, tau: float, x) -> RhoEstimate:
    """Log-ratio rho estimator built on the kernel-smoothed stdf."""
    ev = _as_evaluator(ranks)
    x = np.asarray(x, dtype=np.float64)

    def delta(pt):
        return kernel_smoothed_stdf(ev, cfg.kbar, tau, cfg.a * pt) / cfg.a - kernel_smoothed_stdf(
            ev, cfg.kbar, tau, pt
        )

    return RhoEstimate(_log_ratio_rho(delta(cfg.r * x), delta(x), cfg.r, cfg))


def rho_goegebeur(ranks, cfg: RatioRhoConfig, tau: float, xi1: float, xi2: float, x) -> RhoEstimate:
    """Log-ratio rho estimator built on power-kernel transforms of the stdf."""
    if not (xi1 > 0 and xi2 > 0):
        raise ValueError("xi1 and xi2 must be positive")
    ev = _as_evaluator(ranks)
    x = np.asarray(x, dtype=np.float64)

    def delta(pt):
        lhs = (cfg.a ** (-xi1) * power_kernel_stdf(ev, cfg.kbar, tau, xi1, cfg.a * pt)) ** (1.0 / xi1)
        rhs = power_kernel_stdf(ev, cfg.kbar, tau, xi2, pt) ** (1.0 / xi2)
        return lhs - rhs

    return RhoEstimate(_log_ratio_rho(delta(cfg.r * x), delta(x), cfg.r, cfg))


def rho_fougeres_agg(ranks, cfg: RatioRhoConfig, eval_points) -> RhoEstimate:
    """Mean of the pointwise log-ratio estimates after the per-point fallback."""
    eval_points = [tuple(float(c) for c in p) for p in eval_points]
    if not eval_points:
        raise ValueError("eval_points must be nonempty")
    ev = _as_evaluator(ranks)
    per_point: dict[tuple[float, ...], float] = {}
    for pt in eval_points:
        try:
            per_point[pt] = rho_fougeres(ev, cfg, pt).value
        except DegenerateRatioError:
            per_point[pt] = cfg.fallback_value
    value = math.fsum(per_point[pt] for pt in eval_points) / len(eval_points)
    return RhoEstimate(value, per_point)


def _curve_values(curve, cfg: PenalizedRhoConfig) -> np.ndarray:
    if isinstance(curve, Mapping):
        try:
            y = np.array([curve[i] for i in cfg.index_set], dtype=np.float64)
        except KeyError as missing:
            raise ValueError(f"curve is missing index {missing.args[0]}") from None
    else:
        y = np.asarray(curve, dtype=np.float64)
        if y.shape != (len(cfg.index_set),):
            raise ValueError(
                f"curve must align with index_set (length {len(cfg.index_set)}), got shape {y.shape}"
            )
    return y


def rss_plain(curve, cfg: PenalizedRhoConfig, b0: float, b1: float, r: float) -> float:
    """Weighted residual sum of squares of the curve against b0 + b1 (i/k_rho)^(-r)."""
    if not r < 0:
        raise ValueError(f"r must be negative, got {r}")
    y = _curve_values(curve, cfg)
    w = np.asarray(cfg.weights)
    p = (np.asarray(cfg.index_set, dtype=np.float64) / cfg.k_rho) ** (-r)
    return float(w @ (y - b0 - b1 * p) ** 2)


def _profile_stats(y, w, p):
    ybar = float(w @ y)
    xbar = float(w @ p)
    dy = y - ybar
    dp = p - xbar
    syy = float(w @ dy**2)
    sxx = float(w @ dp**2)
    sxy = float(w @ (dy * dp))
    return ybar, xbar, syy, sxx, sxy


def profile_rss(curve, cfg: PenalizedRhoConfig, r: float) -> tuple[float, float, float]:
    """Closed-form minimizers (b0, b1) of the weighted RSS at fixed r, and the minimum.

    The minimum equals ``S_yy * (1 - corr^2)`` for the weighted correlation
    between the curve and the predictor. A flat curve (``S_yy = 0``) raises
    :class:`DegenerateCurveError`.
    """
    if not r < 0:
        raise ValueError(f"r must be negative, got {r}")
    y = _curve_values(curve, cfg)
    if np.all(y == y[0]):
        raise DegenerateCurveError("curve is flat; correlation with the predictor is undefined")
    w = np.asarray(cfg.weights)
    p = (np.asarray(cfg.index_set, dtype=np.float64) / cfg.k_rho) ** (-r)
    ybar, xbar, syy, sxx, sxy = _profile_stats(y, w, p)
    if syy == 0.0:
        raise DegenerateCurveError("curve has zero weighted variance")
    b1 = sxy / sxx
    b0 = ybar - b1 * xbar
    rss = max(syy - sxy * sxy / sxx, 0.0)
    return b0, b1, rss


@lru_cache(maxsize=16)
def _grid_design(index_set: tuple, k_rho: float, grid: tuple, weights: tuple):
    """Per-config predictor design shared by every curve: read-only arrays."""
    w = np.asarray(weights, dtype=np.float64)
    scaled = np.asarray(index_set, dtype=np.float64) / k_rho
    p = scaled[None, :] ** (-np.asarray(grid, dtype=np.float64)[:, None])
    xbar = p @ w
    dp = p - xbar[:, None]
    sxx = (dp * dp) @ w
    for arr in (w, p, xbar, dp, sxx):
        arr.setflags(write=False)
    return w, p, xbar, dp, sxx


def rho_penalized_pointwise(curve, cfg: PenalizedRhoConfig) -> tuple[float, float, float]:
    """Two-pass grid search for the penalized estimator at one point.

    Pass one profiles (b0, b1) out at every grid value of r and records the
    smallest unpenalized RSS; pass two picks the grid value minimizing
    ``RSS(r) + (eta / |r|) * min RSS``, ties going to the most negative r.
    Returns the profiled (b0, b1) at the winner together with the winning r.
    """
    y = _curve_values(curve, cfg)
    if np.all(y == y[0]):
        raise DegenerateCurveError("curve is flat; correlation with the predictor is undefined")
    w, p, xbar, dp, sxx = _grid_design(cfg.index_set, cfg.k_rho, cfg.grid, cfg.weights)
    ybar = float(w @ y)
    dy = y - ybar
    syy = float(w @ dy**2)
    if syy == 0.0:
        raise DegenerateCurveError("curve has zero weighted variance")
    sxy = dp @ (w * dy)
    rss = np.maximum(syy - sxy * sxy / sxx, 0.0)
    grid = np.asarray(cfg.grid)
    penalized = rss + (cfg.eta / np.abs(grid)) * rss.min()
    # argmin takes the first occurrence; the grid is ascending from k_lo, so
    # ties resolve toward the most negative candidate.
    idx = int(np.argmin(penalized))
    b1 = sxy[idx] / sxx[idx]
    b0 = ybar - b1 * xbar[idx]
    return float(b0), float(b1), float(grid[idx])


def curve_from_ranks(ranks, cfg: PenalizedRhoConfig, x) -> np.ndarray:
    """Empirical stdf curve over the index window at one point."""
    ev = _as_evaluator(ranks)
    return ev.at_levels(np.asarray(cfg.index_set, dtype=np.float64), np.asarray(x, dtype=np.float64))


def rho_penalized_agg(ranks, cfg: PenalizedRhoConfig) -> RhoEstimate:
    """Mean of the pointwise penalized estimates over the evaluation points.

    Points whose curve is flat fall back to -1, mirroring the convention of
    the ratio estimators.
    """
    ev = _as_evaluator(ranks)
    per_point: dict[tuple[float, ...], float] = {}
    for raw_pt in cfg.eval_points:
        pt = tuple(float(c) for c in raw_pt)
        try:
            _, _, r = rho_penalized_pointwise(curve_from_ranks(ev, cfg, pt), cfg)
        except DegenerateCurveError:
            r = -1.0
        per_point[pt] = r
    value = math.fsum(per_point[tuple(float(c) for c in p)] for p in cfg.eval_points) / len(
        cfg.eval_points
    )
    return RhoEstimate(value, per_point)
