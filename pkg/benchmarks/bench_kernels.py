"""Benchmark the compiled counting kernels against the pure-NumPy fallback.

Times the two primitives (per-row exceedance thresholds, counts at a level
batch) and an end-to-end kernel-smoothed estimator evaluation, which is the
hot path of the Monte Carlo study. Run as:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from taildep import _kernels_py
from taildep.estimators import StdfEvaluator, compute_ranks, kernel_smoothed_stdf

try:
    from taildep import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def best_of(fn, repeats=5):
    timings = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        timings.append(time.perf_counter() - t0)
    return min(timings)


def bench_primitives(n, d, n_levels, loops):
    rng = np.random.default_rng(0)
    ranks = compute_ranks(rng.random((n, d)))
    x = np.array([0.6, 0.4] + [0.5] * (d - 2))
    levels = rng.random(n_levels) * n
    rows = []
    for label, impl in backends():
        tsorted = np.sort(impl.exceedance_thresholds(ranks, x))

        def run_thresholds():
            for _ in range(loops):
                impl.exceedance_thresholds(ranks, x)

        def run_counts():
            for _ in range(loops):
                impl.counts_at_levels(tsorted, levels)

        rows.append((label, best_of(run_thresholds) / loops, best_of(run_counts) / loops))
    return rows


def bench_estimator(n, k, loops):
    rng = np.random.default_rng(1)
    sample = rng.random((n, 2))
    rows = []
    for label, impl in backends():
        import taildep._backend as backend
        import taildep.estimators as estimators

        saved = backend.exceedance_thresholds, backend.counts_at_levels
        backend.exceedance_thresholds = impl.exceedance_thresholds
        backend.counts_at_levels = impl.counts_at_levels
        estimators.exceedance_thresholds = impl.exceedance_thresholds
        estimators.counts_at_levels = impl.counts_at_levels
        try:
            ranks = compute_ranks(sample)

            def run():
                for _ in range(loops):
                    ev = StdfEvaluator(ranks)
                    for x in [(0.3, 0.7), (0.5, 0.5), (0.9, 0.1)]:
                        kernel_smoothed_stdf(ev, k, 5.0, x)

            rows.append((label, best_of(run) / loops))
        finally:
            backend.exceedance_thresholds, backend.counts_at_levels = saved
            estimators.exceedance_thresholds, estimators.counts_at_levels = saved
    return rows


def backends():
    pairs = [("numpy", _kernels_py)]
    if _kernels_c is not None:
        pairs.append(("compiled", _kernels_c))
    return pairs


def main():
    if _kernels_c is None:
        print("compiled kernels not built; benchmarking the NumPy fallback only\n")

    print("primitives (time per call)")
    print(f"{'case':<28}{'backend':<10}{'thresholds':>14}{'counts':>14}")
    for n, d, n_levels, loops in [(1_000, 2, 1_000, 200), (100_000, 2, 5_000, 20), (1_000_000, 3, 5_000, 3)]:
        results = bench_primitives(n, d, n_levels, loops)
        for label, t_thresh, t_counts in results:
            case = f"n={n:,} d={d} L={n_levels}"
            print(f"{case:<28}{label:<10}{t_thresh * 1e6:>11.1f} us{t_counts * 1e6:>11.1f} us")
        if len(results) == 2:
            speedup = results[0][1] / results[1][1]
            print(f"{'':<28}{'speedup':<10}{speedup:>11.1f} x")

    print("\nkernel-smoothed estimator, 3 points (time per evaluation set)")
    print(f"{'case':<28}{'backend':<10}{'time':>14}")
    for n, k, loops in [(1_000, 990, 50), (100_000, 5_000, 5)]:
        results = bench_estimator(n, k, loops)
        for label, t in results:
            case = f"n={n:,} k={k}"
            print(f"{case:<28}{label:<10}{t * 1e3:>11.2f} ms")
        if len(results) == 2:
            print(f"{'':<28}{'speedup':<10}{results[0][1] / results[1][1]:>11.1f} x")


if __name__ == "__main__":
    main()
