"""Zeroth-order optimization of nonsmooth functions with polynomially bounded subgradients.

The package certifies and exercises a Gaussian-smoothing toolchain:

* :mod:`spbzo.catalog` — test functions with gradient-growth certificates,
* :mod:`spbzo.smoothing` — Monte Carlo and quadrature smoothing oracles,
* :mod:`spbzo.constants` — every certified coefficient, radius rule, and
  guaranteed rate used by the theory,
* :mod:`spbzo.lambertw` — the negative real Lambert branch behind the
  Gaussian tail radius,
* :mod:`spbzo.optimizers` — the projected and unconstrained two-point
  schemes with norm-adaptive stepsizes,
* :mod:`spbzo.stationarity` — reach-set subdifferential geometry and the
  smoothed-gradient inclusion check,
* :mod:`spbzo.harness` — multi-seed experiments, persistence, aggregation
  against guaranteed bounds, and verification suites.
"""

from .catalog import (
    Piece1D,
    SpbCertificate,
    SpbFunction,
    UnsupportedFunctionError,
    clarke_norm_bound,
    evaluate,
    function_ids,
    get_function,
    lipschitz_envelope,
    validate_certificate,
)
from .constants import (
    GoldsteinSchedule,
    RateInputs,
    SigmaRule,
    SmoothingConstants,
    approx_error_coeff,
    approx_error_coeff_unit,
    convex_rate_rhs,
    fractional_power_bound,
    goldstein_schedule,
    goldstein_sigma_rule,
    growth_constants,
    level_bounded_constants,
    moment_coeff,
    moment_coeff_unit,
    sigma_cap_constant,
    smoothing_constants,
    t_min_explicit_bound,
    tail_radius,
    tail_radius_check,
    unconstrained_rate_rhs,
)
from .harness import (
    METRICS,
    OUTPUT_DIR_ENV,
    SUITE_NAMES,
    ExperimentConfig,
    RunRecord,
    aggregate_run,
    resolve_sigma,
    run_experiment,
    verify_suite,
)
from .lambertw import WEval, w_minus1, w_minus1_from_log
from .optimizers import (
    FeasibleSet,
    Schedule,
    Trajectory,
    best_index,
    relative_gap_series,
    run_algorithm1,
    run_algorithm2,
    wtilde_sq_series,
)
from .smoothing import (
    McEstimate,
    QuadratureResult,
    check_approx_error,
    check_descent_lemma,
    check_moment_bound,
    gaussian_norm_moment_mc,
    gs_grad_fd_oracle,
    gs_grad_onepoint_mc,
    gs_grad_oracle,
    gs_grad_twopoint_mc,
    gs_value_mc,
    gs_value_oracle,
    gs_value_quadrature,
)
from .stationarity import (
    GoldsteinInterval,
    check_goldstein_inclusion,
    clarke_interval_1d,
    goldstein_distance,
    goldstein_interval_1d,
    gradient_consistency_probe,
    min_norm_point,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # catalog
    "UnsupportedFunctionError",
    "SpbCertificate",
    "Piece1D",
    "SpbFunction",
    "evaluate",
    "clarke_norm_bound",
    "lipschitz_envelope",
    "validate_certificate",
    "function_ids",
    "get_function",
    # constants
    "SmoothingConstants",
    "SigmaRule",
    "RateInputs",
    "GoldsteinSchedule",
    "smoothing_constants",
    "approx_error_coeff",
    "approx_error_coeff_unit",
    "moment_coeff",
    "moment_coeff_unit",
    "fractional_power_bound",
    "tail_radius",
    "tail_radius_check",
    "goldstein_sigma_rule",
    "convex_rate_rhs",
    "level_bounded_constants",
    "unconstrained_rate_rhs",
    "growth_constants",
    "sigma_cap_constant",
    "goldstein_schedule",
    "t_min_explicit_bound",
    # lambert
    "WEval",
    "w_minus1",
    "w_minus1_from_log",
    # smoothing
    "McEstimate",
    "QuadratureResult",
    "gs_value_mc",
    "gs_grad_onepoint_mc",
    "gs_grad_twopoint_mc",
    "gs_value_quadrature",
    "gs_grad_fd_oracle",
    "gs_value_oracle",
    "gs_grad_oracle",
    "check_descent_lemma",
    "check_approx_error",
    "check_moment_bound",
    "gaussian_norm_moment_mc",
    # optimizers
    "FeasibleSet",
    "Schedule",
    "Trajectory",
    "run_algorithm1",
    "run_algorithm2",
    "relative_gap_series",
    "wtilde_sq_series",
    "best_index",
    # stationarity
    "GoldsteinInterval",
    "goldstein_interval_1d",
    "clarke_interval_1d",
    "goldstein_distance",
    "min_norm_point",
    "check_goldstein_inclusion",
    "gradient_consistency_probe",
    # harness
    "METRICS",
    "OUTPUT_DIR_ENV",
    "SUITE_NAMES",
    "ExperimentConfig",
    "RunRecord",
    "resolve_sigma",
    "run_experiment",
    "aggregate_run",
    "verify_suite",
]
