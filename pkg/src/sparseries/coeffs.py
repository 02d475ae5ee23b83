"""Sample-mean Fourier coefficients and residual second moments."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .basis import Basis, design_matrix, sup_bound

# rows per block when forming the n x J basis matrix
_CHUNK = 4096


class SampleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Sample:
    values: np.ndarray = field(repr=False)
    seed: int | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size == 0:
            raise SampleError("sample is empty")
        bad = np.flatnonzero(~np.isfinite(v) | (v < 0.0) | (v > 1.0))
        if bad.size:
            i = int(bad[0])
            raise SampleError(f"value {v[i]!r} at position {i + 1} is outside [0, 1]")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self):
        return self.values.size

    def save(self, path) -> None:
        Path(path).write_text("".join(f"{v:.17g}\n" for v in self.values))


def load_sample(path) -> Sample:
    """Read one value per line; blank lines are skipped.

    Errors name the offending line number.
    """
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            try:
                v = float(text)
            except ValueError:
                raise SampleError(f"line {lineno}: cannot parse {text!r} as a number") from None
            if not (0.0 <= v <= 1.0):
                raise SampleError(f"line {lineno}: value {v!r} is outside [0, 1]")
            values.append(v)
    if not values:
        raise SampleError(f"{path}: sample is empty")
    return Sample(np.asarray(values))


@dataclass(frozen=True, eq=False)
class CoefficientEstimate:
    theta_hat: np.ndarray
    second_moments: np.ndarray
    n: int
    basis: Basis = Basis.COSINE

    @property
    def J(self) -> int:
        return self.theta_hat.size


def estimate_coefficients(sample, basis, J: int) -> CoefficientEstimate:
    """theta_hat_j = mean_i phi_j(X_i) and mean_i (phi_j(X_i) - theta_hat_j)^2.

    ``sample`` may be a :class:`Sample` or any array of values in [0, 1].
    """
    if not isinstance(sample, Sample):
        sample = Sample(sample)
    basis = Basis.parse(basis)
    if J < 1:
        raise ValueError("J must be >= 1")
    x = sample.values
    n = x.size
    s1 = np.zeros(J)
    s2 = np.zeros(J)
    for lo in range(0, n, _CHUNK):
        phi = design_matrix(basis, x[lo:lo + _CHUNK], J)
        s1 += phi.sum(axis=0)
        s2 += np.einsum("ij,ij->j", phi, phi)
    theta_hat = s1 / n
    second = s2 / n - theta_hat ** 2
    # cancellation can leave tiny negatives; anything larger is a bug
    if np.any(second < -1e-12):
        raise ArithmeticError("negative residual second moment")
    second = np.clip(second, 0.0, None)
    # phi_1 == 1: the constant term carries no estimation error
    theta_hat[0] = 1.0
    second[0] = 0.0
    return CoefficientEstimate(theta_hat, second, n, basis)


def max_deviation(est, truth) -> float:
    """Sup-norm distance between estimated and true coefficient vectors."""
    theta_hat = est.theta_hat if isinstance(est, CoefficientEstimate) else np.asarray(est, float)
    truth = np.asarray(truth, dtype=float).ravel()
    if truth.size != theta_hat.size:
        raise ValueError(f"length mismatch: {theta_hat.size} estimated vs {truth.size} true")
    return float(np.max(np.abs(theta_hat - truth)))


def padded_truth(theta, J: int) -> np.ndarray:
    """True coefficients truncated or zero-padded to length J."""
    theta = np.asarray(theta, dtype=float).ravel()[:J]
    return np.pad(theta, (0, J - theta.size))


def min_second_moment(est: CoefficientEstimate) -> float:
    """Empirical stand-in for the population variance floor over j >= 2.

    Diagnostic only; the population condition cannot be checked from data.
    """
    if est.J < 2:
        return float("nan")
    return float(np.min(est.second_moments[1:]))


def second_moment_bound(est: CoefficientEstimate) -> np.ndarray:
    """Per-index upper bound M_j^2 on the residual second moments."""
    return np.array([sup_bound(est.basis, j) ** 2 for j in range(1, est.J + 1)])
