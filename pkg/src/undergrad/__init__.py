"""Adaptive universal methods for convex problems over mirror geometries.

The package couples a small zoo of Bregman setups (entropic simplex,
von Neumann spectrahedron, Euclidean ball-free sets, unconstrained space)
with accelerated dual-averaging solvers whose step sizes adapt to observed
gradient variation, plus the fixed-step baselines they are measured against.
"""

from .algorithms import (
    CONSTANT,
    LINEAR,
    MP_BG,
    MP_LG_DETERMINISTIC,
    MP_LG_STOCHASTIC,
    StepWeights,
    Trajectory,
    checkpoint_iterations,
    dual_extrapolation_run,
    fixed_lr_accelerated_run,
    mirror_prox_run,
    undergrad_run,
    unixgrad_run,
)
from .analysis import (
    RateFit,
    bg_bound,
    check_regret_conversion,
    check_sqrt_lemma,
    check_template_inequality,
    check_three_point,
    fit_power_law,
    h_radius,
    lg_bound,
    mp_bounds,
    rate_slope,
    shape_factor,
)
from .errors import (
    ConfigError,
    DomainError,
    InsufficientDataError,
    InvalidInputError,
    NumericalFailureError,
    UndergradError,
)
from .geometry import (
    Regularizer,
    bregman_div,
    conjugate_value,
    entropic_simplex,
    euclidean_simplex,
    euclidean_unbounded,
    fenchel_coupling,
    h_value,
    mirror_map,
    prox_map,
    reg_grad,
    von_neumann_spectrahedron,
)
from .harness import (
    ExperimentConfig,
    RunSummary,
    config_from_dict,
    load_config,
    registry_configs,
    run_experiment,
    run_registry,
)
from .oracle import NoiseModel, OracleHandle, default_noise_model, derive_stream
from .problems import (
    ProblemInstance,
    make_capacity_spectrahedron,
    make_linear_simplex,
    make_quadratic_simplex,
    make_quadratic_unbounded,
    sample_domain,
    self_test,
    water_filling,
)

__version__ = "0.1.0"

__all__ = [
    "CONSTANT",
    "ConfigError",
    "DomainError",
    "ExperimentConfig",
    "InsufficientDataError",
    "InvalidInputError",
    "LINEAR",
    "MP_BG",
    "MP_LG_DETERMINISTIC",
    "MP_LG_STOCHASTIC",
    "NoiseModel",
    "NumericalFailureError",
    "OracleHandle",
    "ProblemInstance",
    "RateFit",
    "Regularizer",
    "RunSummary",
    "StepWeights",
    "Trajectory",
    "UndergradError",
    "bg_bound",
    "bregman_div",
    "check_regret_conversion",
    "check_sqrt_lemma",
    "check_template_inequality",
    "check_three_point",
    "checkpoint_iterations",
    "config_from_dict",
    "conjugate_value",
    "default_noise_model",
    "derive_stream",
    "dual_extrapolation_run",
    "entropic_simplex",
    "euclidean_simplex",
    "euclidean_unbounded",
    "fenchel_coupling",
    "fit_power_law",
    "fixed_lr_accelerated_run",
    "h_radius",
    "h_value",
    "lg_bound",
    "load_config",
    "make_capacity_spectrahedron",
    "make_linear_simplex",
    "make_quadratic_simplex",
    "make_quadratic_unbounded",
    "mirror_map",
    "mirror_prox_run",
    "mp_bounds",
    "prox_map",
    "rate_slope",
    "reg_grad",
    "registry_configs",
    "run_experiment",
    "run_registry",
    "sample_domain",
    "self_test",
    "shape_factor",
    "undergrad_run",
    "unixgrad_run",
    "von_neumann_spectrahedron",
    "water_filling",
]
