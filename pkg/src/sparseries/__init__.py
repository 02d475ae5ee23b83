"""Adaptive hard-thresholded orthogonal series density estimation on [0, 1]."""

from .basis import Basis, DomainError, eval_basis, eval_basis_antiderivative, sup_bound
from .coeffs import CoefficientEstimate, Sample, estimate_coefficients, load_sample, max_deviation
from .numerics import QuadratureRule, integrate, std_normal_cdf, std_normal_quantile
from .project import ProjectedDensity, ProjectionError, eval_projected, p_algorithm
from .sampling import SamplerConfig, cdf, draw, make_rng
from .sim import SimulationConfig, SimulationResult, ise, run_simulation
from .sparsity import (
    SeriesDensity,
    SparsityParams,
    check_membership_ek,
    check_membership_theta,
    design_density,
    eval_series,
    minimal_tail_constant,
    uniform_density,
)
from .threshold import ThresholdReport, build_estimator, check_regularity, compute_lambda, select
from .estimator import AdaptiveEstimate, fit_adaptive

__version__ = "0.1.0"
