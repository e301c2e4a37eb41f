import math

import numpy as np
import pytest


class FnEvaluator:
    """Synthetic stdf layer for mocking: value = fn(level, x)."""

    def __init__(self, fn):
        self.fn = fn

    def at(self, level, x, validate=True):
        return float(self.fn(float(level), np.asarray(x, dtype=np.float64)))

    def at_levels(self, levels, x, validate=True):
        pt = np.asarray(x, dtype=np.float64)
        return np.array([self.fn(float(m), pt) for m in np.asarray(levels, dtype=np.float64)])


def naive_empirical_stdf(sample, k, x):
    """Sort-and-compare reference implementation of the exceedance count."""
    sample = np.asarray(sample, dtype=np.float64)
    n, d = sample.shape
    x = np.asarray(x, dtype=np.float64)
    thresholds = np.full(d, np.inf)
    for j in range(d):
        fj = math.floor(k * x[j])
        if fj > n:
            raise ValueError("threshold index out of range")
        if fj >= 1:
            col = np.sort(sample[:, j])
            thresholds[j] = col[n - fj]
    hits = (sample >= thresholds).any(axis=1)
    return float(hits.sum()) / k


def lattice_refined_min_rss(curve, cfg, r):
    """Brute-force (b0, b1) lattice for the weighted RSS, polished by lstsq."""
    y = np.asarray(curve, dtype=np.float64)
    w = np.asarray(cfg.weights)
    p = (np.asarray(cfg.index_set, dtype=np.float64) / cfg.k_rho) ** (-r)
    spread = max(1.0, y.max() - y.min())
    b0s = np.linspace(y.min() - spread, y.max() + spread, 41)
    b1s = np.linspace(-3.0 * spread, 3.0 * spread, 41)
    resid = y[None, None, :] - b0s[:, None, None] - b1s[None, :, None] * p[None, None, :]
    lattice_best = float((resid**2 @ w).min())
    root_w = np.sqrt(w)
    design = np.column_stack([root_w, root_w * p])
    coef, _, _, _ = np.linalg.lstsq(design, root_w * y, rcond=None)
    polish = root_w * y - design @ coef
    return min(lattice_best, float(polish @ polish))


@pytest.fixture
def fn_evaluator():
    return FnEvaluator
