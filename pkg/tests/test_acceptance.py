"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete. Every tolerance and budget is pinned here; the
statistical checks are seeded and deterministic.
"""

import math
import time
from dataclasses import replace

import numpy as np

from taildep import (
    DGP_NAMES,
    DGP_TABLE,
    ExperimentConfig,
    PenalizedRhoConfig,
    RatioRhoConfig,
    RngStream,
    Tuning,
    compute_ranks,
    dot_stdf,
    empirical_stdf,
    mc_stdf_oracle,
    profile_rss,
    proportional_weights,
    rho_penalized_agg,
    rho_penalized_pointwise,
    run_experiment,
    sample_dgp,
    true_stdf,
    write_metrics_csv,
)
from conftest import FnEvaluator, lattice_refined_min_rss, naive_empirical_stdf

SEED = 0
PEN_CFG = PenalizedRhoConfig()
PEN_IDX = np.asarray(PEN_CFG.index_set, dtype=np.float64)


def _report(num, name, ok, elapsed, budget, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num} {name}: {status} [{elapsed:.1f}s / {budget:.0f}s] {detail}")
    assert elapsed < budget, f"criterion {num} exceeded its {budget}s runtime budget"
    assert ok, f"criterion {num} failed: {detail}"


def test_criterion_1_empirical_oracle_equivalence():
    start = time.time()
    rng = np.random.default_rng(SEED)
    checked = 0
    ok = True
    for _ in range(200):
        n = int(rng.integers(2, 51))
        d = int(rng.choice([2, 3]))
        sample = rng.random((n, d))
        ranks = compute_ranks(sample)
        for k in range(1, n + 1):
            for _ in range(2):
                x = rng.random(d) * (n / k)
                if rng.random() < 0.2:
                    x[int(rng.integers(d))] = 0.0
                got = empirical_stdf(ranks, k, x)
                want = naive_empirical_stdf(sample, k, x)
                ok &= got == want
                checked += 1
    _report(1, "empirical-stdf oracle equivalence", ok, time.time() - start, 5.0,
            f"{checked} exact comparisons")


def test_criterion_2_dot_telescoping():
    start = time.time()
    rng = np.random.default_rng(SEED)
    k = 137
    worst = 0.0
    for _ in range(100):
        intercept = float(rng.uniform(0.55, 0.95))
        amp = float(rng.uniform(0.2, 1.0) * rng.choice([-1.0, 1.0]))
        rho = float(rng.uniform(-3.0, -0.2))
        ev = FnEvaluator(lambda m, x, a=amp, r=rho: intercept + a * (m / k) ** (-r))
        got = dot_stdf(ev, k, 0.4, rho, (0.5, 0.5))
        worst = max(worst, abs(got - intercept))
    _report(2, "dot-estimator telescoping", worst <= 1e-12, time.time() - start, 1.0,
            f"worst |error| = {worst:.2e}")


def test_criterion_3_penalized_exact_recovery():
    start = time.time()
    rng = np.random.default_rng(SEED)
    ok = True
    for r0 in PEN_CFG.grid:
        b0 = float(rng.uniform(-1.0, 2.0))
        b1 = float(rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0]))
        curve = b0 + b1 * (PEN_IDX / PEN_CFG.k_rho) ** (-r0)
        for eta in (0.0, 0.5, 2.0):
            _, _, r = rho_penalized_pointwise(curve, replace(PEN_CFG, eta=eta))
            ok &= r == r0
    _report(3, "penalized-rho exact recovery", ok, time.time() - start, 5.0,
            f"{len(PEN_CFG.grid)} grid points x 3 eta values")


def test_criterion_4_profiling_matches_brute_force():
    start = time.time()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        expo = float(rng.uniform(0.1, 3.0))
        curve = (
            rng.uniform(0.0, 2.0)
            + rng.uniform(-1.0, 1.0) * (PEN_IDX / PEN_CFG.k_rho) ** expo
            + rng.normal(0, 0.05, len(PEN_IDX))
        )
        r = -float(rng.uniform(0.1, 4.0))
        _, _, rss = profile_rss(curve, PEN_CFG, r)
        oracle = lattice_refined_min_rss(curve, PEN_CFG, r)
        worst = max(worst, abs(rss - oracle) / max(1.0, oracle))
    _report(4, "profiled regression vs brute force", worst <= 1e-9, time.time() - start, 10.0,
            f"worst relative gap = {worst:.2e}")


def test_criterion_5_penalty_monotonicity_and_scale_invariance():
    start = time.time()
    rng = np.random.default_rng(SEED)
    etas = (0.0, 0.25, 0.5, 1.0, 2.0)
    mono_ok = True
    for _ in range(50):
        curve = (
            rng.uniform(0.5, 2.0)
            + rng.uniform(-0.5, 0.5) * (PEN_IDX / PEN_CFG.k_rho) ** rng.uniform(0.2, 3.0)
            + rng.normal(0, 0.02, len(PEN_IDX))
        )
        magnitudes = [
            abs(rho_penalized_pointwise(curve, replace(PEN_CFG, eta=eta))[2]) for eta in etas
        ]
        mono_ok &= all(b >= a - 1e-15 for a, b in zip(magnitudes, magnitudes[1:]))
    scale_ok = True
    for _ in range(50):
        curve = (
            rng.uniform(0.5, 2.0)
            + rng.uniform(-0.5, 0.5) * (PEN_IDX / 1000.0) ** rng.uniform(0.2, 3.0)
            + rng.normal(0, 0.02, len(PEN_IDX))
        )
        picks = {
            rho_penalized_pointwise(curve, replace(PEN_CFG, k_rho=k_rho))[2]
            for k_rho in (1.0, 250.0, 1000.0)
        }
        scale_ok &= len(picks) == 1
    _report(5, "penalty monotonicity and scale invariance", mono_ok and scale_ok,
            time.time() - start, 10.0, f"monotone={mono_ok} scale-invariant={scale_ok}")


def test_criterion_6_true_stdf_vs_monte_carlo_oracle():
    start = time.time()
    points = [(1.0, 1.0), (0.3, 0.7), (1.5, 0.5)]
    ok = True
    details = []
    for di, name in enumerate(DGP_NAMES):
        spec = DGP_TABLE[name]
        for pi, pt in enumerate(points):
            est = mc_stdf_oracle(spec, pt, t=200.0, m=2_000_000, rng=RngStream(SEED, di, pi))
            tol = max(0.01, 4.0 * est.se)
            diff = abs(est.value - true_stdf(spec, pt))
            if diff > tol:
                ok = False
                details.append(f"{name}@{pt}: |diff|={diff:.4f} > tol={tol:.4f}")
    anchors_ok = (
        abs(true_stdf(DGP_TABLE["archimax-logistic"], (1.0, 1.0)) - math.sqrt(2.0)) < 1e-12
        and abs(true_stdf(DGP_TABLE["archimax-mixed"], (1.0, 1.0)) - 1.5) < 1e-12
    )
    _report(6, "true stdf vs Monte Carlo oracle", ok and anchors_ok, time.time() - start, 120.0,
            "; ".join(details) or "all 24 points within tolerance, anchors sqrt(2) and 1.5 exact")


def test_criterion_7_penalized_rho_recovery_on_t4_t6():
    start = time.time()
    medians = {}
    for name in ("t4", "t6"):
        spec = DGP_TABLE[name]
        di = DGP_NAMES.index(name)
        values = []
        for rep in range(100):
            sample = sample_dgp(spec, 1000, RngStream(SEED, di, rep))
            values.append(rho_penalized_agg(compute_ranks(sample), PEN_CFG).value)
        medians[name] = float(np.median(values))
    ok = -0.8 <= medians["t4"] <= -0.3 and -0.6 <= medians["t6"] <= -0.15
    _report(
        7,
        "penalized-rho recovery on t4/t6",
        ok,
        time.time() - start,
        300.0,
        f"median t4 = {medians['t4']:.3f} (window [-0.8, -0.3]); "
        f"median t6 = {medians['t6']:.3f} (window [-0.6, -0.15])",
    )


def test_criterion_8_mse_ordering_at_desk_scale():
    start = time.time()
    config = ExperimentConfig(dgp="cauchy", n=1000, reps=200, seed=SEED)
    table = run_experiment(config)
    mse_emp = {r.k: r.mse for r in table.rows if r.estimator == "empirical"}
    mse_pen = {r.k: r.mse for r in table.rows if r.estimator == "dot-agg-penalized"}
    var_pen = {r.k: r.variance for r in table.rows if r.estimator == "dot-agg-penalized"}
    var_fou = {r.k: r.variance for r in table.rows if r.estimator == "dot-agg-fougeres-agg"}
    ks = sorted(mse_emp)
    mse_ok = all(mse_pen[k] < mse_emp[k] for k in ks if k >= 501)
    var_frac = float(np.mean([var_pen[k] <= var_fou[k] for k in ks]))
    ok = mse_ok and var_frac >= 0.7
    _report(
        8,
        "desk-scale MSE ordering (Cauchy)",
        ok,
        time.time() - start,
        900.0,
        f"MSE(dot-agg-penalized) < MSE(empirical) for k >= 501: {mse_ok}; "
        f"variance(penalized) <= variance(ratio-agg) at {var_frac:.0%} of k",
    )


def test_criterion_9_identity_and_worker_determinism(tmp_path):
    start = time.time()
    index_set = tuple(range(20, 401, 20))
    tuning = Tuning(
        ratio=RatioRhoConfig(kbar=390),
        penalized=PenalizedRhoConfig(
            index_set=index_set, weights=proportional_weights(index_set), k_rho=400.0
        ),
        dot_kset=(1, 51, 101, 151, 201),
        beirlant_kbar=390,
    )
    config = ExperimentConfig(
        dgp="cauchy", n=400, reps=30, k_grid=(1, 51, 101, 151, 201), seed=SEED, tuning=tuning
    )
    t1 = run_experiment(config)
    identity_ok = all(
        abs(r.mse - (r.squared_bias + r.variance)) <= 1e-10 * max(abs(r.mse), 1e-300)
        for r in t1.rows
    )
    t3 = run_experiment(replace(config, workers=3))
    p1, p3 = tmp_path / "w1.csv", tmp_path / "w3.csv"
    write_metrics_csv(t1, p1)
    write_metrics_csv(t3, p3)
    bytes_ok = p1.read_bytes() == p3.read_bytes()
    _report(
        9,
        "bias-variance identity and worker determinism",
        identity_ok and bytes_ok,
        time.time() - start,
        120.0,
        f"identity={identity_ok} byte-identical CSVs across 1 vs 3 workers={bytes_ok}",
    )
