"""Quadrature on [0, 1] and the standard normal CDF / quantile."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

DEFAULT_PANELS = 4096

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Simpson rule on a uniform grid of ``panels`` subintervals."""

    panels: int = DEFAULT_PANELS
    kind: str = "composite_simpson"

    def __post_init__(self):
        if self.kind != "composite_simpson":
            raise ValueError(f"unsupported quadrature kind {self.kind!r}")
        if int(self.panels) != self.panels or self.panels < 2 or self.panels % 2:
            raise ValueError("panels must be an even integer >= 2")

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.panels + 1)

    @cached_property
    def _int_weights(self) -> np.ndarray:
        # 1, 4, 2, 4, ..., 4, 1; integer-valued so constants integrate exactly
        w = np.ones(self.panels + 1)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w.flags.writeable = False
        return w

    @property
    def weights(self) -> np.ndarray:
        return self._int_weights / (3.0 * self.panels)

    def integrate_values(self, values) -> float:
        """Integrate function values already sampled at :attr:`nodes`."""
        values = np.asarray(values, dtype=float)
        if values.shape[-1] != self.panels + 1:
            raise ValueError("values do not match the quadrature grid")
        if not np.all(np.isfinite(values)):
            raise QuadratureError("non-finite integrand value at a grid node")
        out = (values @ self._int_weights) / (3.0 * self.panels)
        return float(out) if values.ndim == 1 else out


def integrate(f, rule: QuadratureRule | None = None) -> float:
    """Composite Simpson approximation of the integral of ``f`` over [0, 1].

    ``f`` must accept a numpy array of nodes and return an array of the same
    shape (a scalar is broadcast, so ``lambda x: 1.0`` works).
    """
    rule = rule or QuadratureRule()
    x = rule.nodes
    values = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return rule.integrate_values(values)


def std_normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_sf(x: float) -> float:
    """Upper tail 1 - Phi(x), without cancellation for large x."""
    return 0.5 * math.erfc(x / _SQRT2)


# Acklam's rational approximation to the normal quantile, relative error ~1e-9;
# used only as the starting point for Halley refinement.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _initial_lower_quantile(p: float) -> float:
    # valid for 0 < p <= 0.5
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def _lower_quantile(p: float) -> float:
    """Solve Phi(x) = p for 0 < p <= 0.5 by Halley steps on the lower tail."""
    x = _initial_lower_quantile(p)
    for _ in range(4):
        # Phi(x) - p, computed on the lower tail side for relative accuracy
        e = 0.5 * math.erfc(-x / _SQRT2) - p
        u = e * _SQRT2PI * math.exp(0.5 * x * x)
        step = u / (1.0 + 0.5 * x * u)
        x -= step
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            break
    return x


def std_normal_quantile(p: float) -> float:
    """Inverse of :func:`std_normal_cdf` on (0, 1)."""
    if not (0.0 < p < 1.0):
        raise ValueError("p must lie strictly inside (0, 1)")
    if p <= 0.5:
        return _lower_quantile(p)
    # 1 - p is exact in floating point for p >= 0.5
    return -_lower_quantile(1.0 - p)


def std_normal_isf(q: float) -> float:
    """Phi^{-1}(1 - q), accurate even when 1 - q rounds to 1."""
    if not (0.0 < q < 1.0):
        raise ValueError("q must lie strictly inside (0, 1)")
    if q <= 0.5:
        return -_lower_quantile(q)
    return _lower_quantile(1.0 - q)
