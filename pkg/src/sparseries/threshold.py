"""Data-driven hard thresholding of estimated series coefficients."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .basis import Basis
from .coeffs import CoefficientEstimate
from .numerics import std_normal_isf
from .sparsity import SeriesDensity

log = logging.getLogger(__name__)


def lambda_tail_probability(J: int) -> float:
    """Upper-tail mass q so that the quantile factor is Phi^{-1}(1 - q)."""
    if J < 2:
        raise ValueError("J must be >= 2 so that log(J) > 0")
    return 1.0 / (2.0 * math.sqrt(2.0 * math.pi) * math.sqrt(2.0 * math.log(J)) * J)


def compute_lambda(est: CoefficientEstimate) -> float:
    r"""Penalty level for hard thresholding.

    .. math::

        \lambda = \sqrt{\log J / n}\;
                  \Phi^{-1}\!\Big(1 - \frac{1}{2\sqrt{2\pi}\sqrt{2\log J}\,J}\Big)
                  \max_j \hat\sigma_j

    where :math:`\hat\sigma_j^2` are ``est.second_moments``.
    """
    J, n = est.J, est.n
    if J < 2:
        raise ValueError("J must be >= 2 so that log(J) > 0")
    if n < 2:
        raise ValueError("need at least two observations")
    z = std_normal_isf(lambda_tail_probability(J))
    sigma_max = math.sqrt(float(np.max(est.second_moments)))
    return math.sqrt(math.log(J) / n) * z * sigma_max


@dataclass(frozen=True, eq=False)
class ThresholdReport:
    lam: float
    multiplier: float
    selected: np.ndarray   # ascending 1-based indices
    theta_tilde: np.ndarray
    forced_constant: bool = False

    @property
    def threshold(self) -> float:
        return self.multiplier * self.lam

    @property
    def J(self) -> int:
        return self.theta_tilde.size

    def sparse(self) -> dict:
        return {int(j): float(self.theta_tilde[j - 1]) for j in self.selected}


def select(est, lam: float, multiplier: float = 1.0, keep_constant: bool = True) -> ThresholdReport:
    """Keep coefficients with ``|theta_hat_j| >= multiplier * lam`` (ties kept).

    ``est`` is a :class:`CoefficientEstimate` or a bare coefficient vector.
    With ``keep_constant`` the first (constant) term is retained even if the
    threshold would drop it; that override is logged and flagged.
    """
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if not multiplier > 0:
        raise ValueError("multiplier must be positive")
    theta_hat = est.theta_hat if isinstance(est, CoefficientEstimate) else np.asarray(est, float)
    keep = np.abs(theta_hat) >= multiplier * lam
    forced = False
    if keep_constant and not keep[0]:
        log.warning("threshold %.6g exceeds |theta_hat_1| = %.6g; keeping the constant term",
                    multiplier * lam, abs(theta_hat[0]))
        keep = keep.copy()
        keep[0] = True
        forced = True
    theta_tilde = np.where(keep, theta_hat, 0.0)
    return ThresholdReport(float(lam), float(multiplier), np.flatnonzero(keep) + 1,
                           theta_tilde, forced)


def build_estimator(report: ThresholdReport, basis=Basis.COSINE) -> SeriesDensity:
    """The thresholded series sum_{j in T} theta_hat_j phi_j."""
    return SeriesDensity(basis, report.theta_tilde)


@dataclass(frozen=True)
class RegularityCheck:
    p: float
    holds_ii: bool
    holds_iii: bool
    holds_iv: bool
    alpha_n: float

    def to_json(self) -> dict:
        return {"p": self.p, "holds_ii": self.holds_ii, "holds_iii": self.holds_iii,
                "holds_iv": self.holds_iv, "alpha_n": self.alpha_n}


def check_regularity(n: int, J: int, M_J: float, k: float) -> RegularityCheck:
    """Check the verifiable regularity conditions for given (n, J, M_J, k).

    - (ii)  J = n^p with p > 0,
    - (iii) M_J^2 <= n / log n,
    - (iv)  (J M_J / n) sqrt(alpha_n) <= n^{-(2k-1)/(2k)},
      with alpha_n = (J n)^-2 + 2 n^-3.

    The variance floor condition (i) is a population statement and is not
    checked here; see :func:`sparseries.coeffs.min_second_moment`.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if not k > 0.5:
        raise ValueError("k must exceed 1/2")
    logn = math.log(n)
    p = math.log(J) / logn
    alpha_n = (J * n) ** -2.0 + 2.0 * n ** -3.0
    holds_iv = (J * M_J / n) * math.sqrt(alpha_n) <= n ** (-(2.0 * k - 1.0) / (2.0 * k))
    # M_J <= sqrt(n / log n) is M_J^2 <= n / log n without a rounding-prone square
    holds_iii = abs(M_J) <= math.sqrt(n / logn)
    return RegularityCheck(p, p > 0, holds_iii, bool(holds_iv), alpha_n)
