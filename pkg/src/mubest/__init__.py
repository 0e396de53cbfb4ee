"""Averaging the mu best points of a single parallel batch.

Exact expected-regret formulas for the sphere, selection-size rules, the
convex-hull prefix statistic, benchmark objectives and a deterministic Monte
Carlo harness.
"""
from .errors import DomainError, InputError, NumericalError
from .harness import (
    CurveSeries,
    ExperimentConfig,
    GaussianSampler,
    RegretEstimate,
    UniformBallSampler,
    log_log_slope,
    one_shot_trial,
    run_rule_comparison,
    run_validation_centered,
    run_validation_noncentered,
)
from .hull import HullPrefixResult, dist_to_hull, frontier_prefix_h, min_norm_point
from .mathkit import BallSpec, RngStream, binomial_cdf, ln_gamma, log_binomial_cdf, sample_gaussian, sample_uniform_ball
from .output import AxesSpec, read_csv, render_svg, write_csv
from .objectives import Kind, Objective, evaluate, make_translated, optimum_regret
from .selection import (
    AVG,
    EAVG,
    HCHAVG,
    STANDARD_RULES,
    SINGLE_BEST,
    TEAVG,
    THCHAVG,
    MuRule,
    RankedBatch,
    Recommendation,
    RuleKind,
    clip,
    compute_mu,
    rank,
    recommend,
)
from .theory import (
    AsymptoticSpec,
    RegretBounds,
    TheoryParams,
    TheoryWarning,
    conditional_regret_mu_avg,
    conditional_regret_one_best,
    regret_asymptotic,
    regret_bounds_noncentered,
    regret_mu_avg_centered,
    regret_one_best_centered,
)

__version__ = "0.1.0"
