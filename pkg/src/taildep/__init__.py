"""Stable tail dependence estimation with bias correction.

Rank-based empirical estimation of the stable tail dependence function,
bias-corrected variants, second-order parameter estimators (including the
penalized grid-search one), bivariate copula samplers with closed-form
oracles, and a seeded Monte Carlo benchmarking harness.
"""

from taildep._backend import USING_COMPILED_KERNELS
from taildep.dgp import (
    DGP_NAMES,
    DGP_TABLE,
    DgpSpec,
    OracleEstimate,
    RngStream,
    mc_stdf_oracle,
    sample_dgp,
    student_t_cdf,
    tail_uniforms,
    true_stdf,
)
from taildep.estimators import (
    LevelOutOfRangeError,
    StdfEvaluator,
    beirlant_alpha,
    beirlant_stdf,
    clamp_stdf,
    compute_ranks,
    dot_aggregated_stdf,
    dot_stdf,
    empirical_stdf,
    empirical_stdf_at_level,
    kernel_smoothed_stdf,
    power_kernel_stdf,
)
from taildep.rho import (
    DegenerateCurveError,
    DegenerateRatioError,
    PenalizedRhoConfig,
    RatioRhoConfig,
    RhoEstimate,
    delta_fougeres,
    profile_rss,
    proportional_weights,
    rho_beirlant,
    rho_fougeres,
    rho_fougeres_agg,
    rho_goegebeur,
    rho_penalized_agg,
    rho_penalized_pointwise,
    rss_plain,
)
from taildep.simulate import (
    DEFAULT_ESTIMATORS,
    DEFAULT_EVAL_POINTS,
    DEFAULT_K_GRID,
    ESTIMATOR_TABLE,
    EstimatorSpec,
    ExperimentConfig,
    MetricsRow,
    MetricsTable,
    Tuning,
    evaluate_estimator,
    run_experiment,
    write_metrics_csv,
)

__version__ = "0.1.0"

__all__ = [
    "USING_COMPILED_KERNELS",
    "DGP_NAMES",
    "DGP_TABLE",
    "DgpSpec",
    "OracleEstimate",
    "RngStream",
    "mc_stdf_oracle",
    "sample_dgp",
    "student_t_cdf",
    "tail_uniforms",
    "true_stdf",
    "LevelOutOfRangeError",
    "StdfEvaluator",
    "beirlant_alpha",
    "beirlant_stdf",
    "clamp_stdf",
    "compute_ranks",
    "dot_aggregated_stdf",
    "dot_stdf",
    "empirical_stdf",
    "empirical_stdf_at_level",
    "kernel_smoothed_stdf",
    "power_kernel_stdf",
    "DegenerateCurveError",
    "DegenerateRatioError",
    "PenalizedRhoConfig",
    "RatioRhoConfig",
    "RhoEstimate",
    "delta_fougeres",
    "profile_rss",
    "proportional_weights",
    "rho_beirlant",
    "rho_fougeres",
    "rho_fougeres_agg",
    "rho_goegebeur",
    "rho_penalized_agg",
    "rho_penalized_pointwise",
    "rss_plain",
    "DEFAULT_ESTIMATORS",
    "DEFAULT_EVAL_POINTS",
    "DEFAULT_K_GRID",
    "ESTIMATOR_TABLE",
    "EstimatorSpec",
    "ExperimentConfig",
    "MetricsRow",
    "MetricsTable",
    "Tuning",
    "evaluate_estimator",
    "run_experiment",
    "write_metrics_csv",
]
