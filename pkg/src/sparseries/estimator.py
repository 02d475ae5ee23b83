"""End-to-end adaptive estimator: coefficients, threshold, projection."""

from __future__ import annotations

from dataclasses import dataclass

from .basis import Basis, sup_bound
from .coeffs import CoefficientEstimate, Sample, estimate_coefficients, min_second_moment
from .numerics import QuadratureRule
from .project import DEFAULT_E_STAR, DEFAULT_MAX_ITER, ProjectedDensity, p_algorithm
from .sparsity import SeriesDensity
from .threshold import RegularityCheck, ThresholdReport, build_estimator, check_regularity, compute_lambda, select


@dataclass(frozen=True)
class AdaptiveEstimate:
    coefficients: CoefficientEstimate
    report: ThresholdReport
    raw: SeriesDensity
    density: ProjectedDensity
    regularity: RegularityCheck | None

    def __call__(self, x):
        return self.density(x)

    def summary(self) -> dict:
        est, rep = self.coefficients, self.report
        return {
            "n": est.n,
            "J": est.J,
            "basis": est.basis.value,
            "lambda": rep.lam,
            "multiplier": rep.multiplier,
            "selected_count": int(rep.selected.size),
            "selected": [int(j) for j in rep.selected],
            "theta_tilde": {str(j): v for j, v in rep.sparse().items()},
            "forced_constant": rep.forced_constant,
            "shift": self.density.shift,
            "p_algorithm_iterations": self.density.iterations,
            "min_second_moment": min_second_moment(est),
            "regularity_check": None if self.regularity is None else self.regularity.to_json(),
        }


def fit_adaptive(sample, J: int = 200, basis=Basis.COSINE, multiplier: float = 1.0,
                 rule: QuadratureRule | None = None, e_star: float = DEFAULT_E_STAR,
                 max_iter: int = DEFAULT_MAX_ITER, k: float = 2.0) -> AdaptiveEstimate:
    """Fit the thresholded series estimator and project it onto densities.

    ``k`` only enters the regularity diagnostic; the estimator itself does
    not depend on it.
    """
    if not isinstance(sample, Sample):
        sample = Sample(sample)
    est = estimate_coefficients(sample, basis, J)
    lam = compute_lambda(est)
    report = select(est, lam, multiplier)
    raw = build_estimator(report, basis)
    density = p_algorithm(raw, rule, e_star, max_iter)
    reg = check_regularity(est.n, J, sup_bound(basis, J), k) if est.n >= 3 else None
    return AdaptiveEstimate(est, report, raw, density, reg)
