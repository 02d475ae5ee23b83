"""Finite series densities and membership checks for the sparsity classes.

Three coefficient classes are checked on finitely supported vectors, where
every quantifier can be evaluated exactly:

* ordered decay, ``|theta_(j)| <= A j^-k`` after sorting magnitudes,
* unordered decay ``|theta_j| <= A j^-k`` (the inner class),
* tail sums ``sum_{j > J} theta_j^2 <= C J^(1 - 2k)`` for all ``J >= 1``.

The approximate sparsity class combines the first and third conditions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .basis import Basis, DomainError, design_matrix, eval_basis_antiderivative, _check_x


@dataclass(frozen=True)
class SparsityParams:
    A: float
    k: float
    C: float

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("A must be positive")
        if not self.k > 0.5:
            raise ValueError("k must exceed 1/2")
        if not self.C > 0:
            raise ValueError("C must be positive")

    @classmethod
    def parse(cls, text: str) -> "SparsityParams":
        """Parse ``"A,k,C"``; each field may be a fraction such as ``4/3``."""
        from fractions import Fraction

        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError("expected three comma-separated values A,k,C")
        return cls(*(float(Fraction(p)) for p in parts))


@dataclass(frozen=True, eq=False)
class SeriesDensity:
    """``f = sum_j theta[j-1] * phi_j`` with all later coefficients zero."""

    basis: Basis
    theta: np.ndarray = field(repr=False)

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float).ravel()
        if theta.size == 0:
            raise ValueError("theta must have at least one entry")
        if not np.all(np.isfinite(theta)):
            raise ValueError("theta must be finite")
        theta.flags.writeable = False
        object.__setattr__(self, "basis", Basis.parse(self.basis))
        object.__setattr__(self, "theta", theta)

    @property
    def support(self) -> np.ndarray:
        """1-based indices of the nonzero coefficients."""
        return np.flatnonzero(self.theta) + 1

    def __call__(self, x):
        return eval_series(self, x)

    def integral(self) -> float:
        """Exact integral over [0, 1] from the basis antiderivatives."""
        return float(cdf_series(self, 1.0))

    def to_json(self) -> dict:
        return {"basis": self.basis.value, "theta": [float(t) for t in self.theta]}

    @classmethod
    def from_json(cls, obj) -> "SeriesDensity":
        return cls(Basis.parse(obj["basis"]), np.asarray(obj["theta"], dtype=float))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path) -> "SeriesDensity":
        return cls.from_json(json.loads(Path(path).read_text()))


def uniform_density(basis=Basis.COSINE) -> SeriesDensity:
    return SeriesDensity(basis, [1.0])


def design_density(A: float = 2.0) -> SeriesDensity:
    """The simulation design density on the cosine basis.

    Large coefficients deliberately sit at late indices (11, 13, 14) so a
    fixed small cutoff misses them.
    """
    theta = np.zeros(15)
    theta[0] = 1.0
    for j in (2, 3, 7, 8):
        theta[j - 1] = A * j ** -2.0
    for j, m in ((5, 10), (11, 4), (13, 6), (14, 5), (15, 9)):
        theta[j - 1] = A * m ** -2.0
    return SeriesDensity(Basis.COSINE, theta)


def eval_series(f: SeriesDensity, x):
    x = _check_x(x)
    idx = f.support
    if idx.size == 0:
        out = np.zeros_like(x)
    else:
        phi = design_matrix(f.basis, x.ravel(), int(idx[-1]))[:, idx - 1]
        out = (phi @ f.theta[idx - 1]).reshape(x.shape)
    return float(out) if out.ndim == 0 else out


def cdf_series(f: SeriesDensity, x):
    """``F(x) = sum_j theta_j * int_0^x phi_j``."""
    x = _check_x(x)
    idx = f.support
    if idx.size == 0:
        return 0.0 if x.ndim == 0 else np.zeros_like(x)
    anti = eval_basis_antiderivative(f.basis, idx[None, :], x.reshape(-1, 1))
    out = (np.atleast_2d(anti) @ f.theta[idx - 1]).reshape(x.shape)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MembershipReport:
    ordered_ok: bool
    tail_ok: bool
    first_violation: int | None
    # descending-magnitude ordering as 1-based original indices
    ordering: tuple = ()

    @property
    def member(self) -> bool:
        return self.ordered_ok and self.tail_ok


def _as_theta(theta) -> np.ndarray:
    if isinstance(theta, SeriesDensity):
        theta = theta.theta
    theta = np.asarray(theta, dtype=float).ravel()
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta must be finite")
    return theta


def _tail_sums(theta: np.ndarray) -> np.ndarray:
    # tails[J-1] = sum_{j > J} theta_j^2 for J = 1 .. len(theta)
    sq = theta ** 2
    return np.concatenate([np.cumsum(sq[::-1])[::-1][1:], [0.0]])


def _ordering(theta: np.ndarray) -> np.ndarray:
    # stable sort: ties keep ascending original index
    return np.argsort(-np.abs(theta), kind="stable")


def check_membership_theta(theta, params: SparsityParams) -> MembershipReport:
    """Exact membership test for the approximate sparsity class.

    ``first_violation`` is the smallest failing position: the rank ``j`` of
    the sorted sequence if the decay condition fails, otherwise the smallest
    failing tail cutoff ``J``.
    """
    theta = _as_theta(theta)
    A, k, C = params.A, params.k, params.C
    order = _ordering(theta)
    ranks = np.arange(1, theta.size + 1, dtype=float)
    decay_bad = np.flatnonzero(np.abs(theta[order]) > A * ranks ** -k)
    tail_bad = np.flatnonzero(_tail_sums(theta) > C * ranks ** (1.0 - 2.0 * k))
    first = None
    if decay_bad.size:
        first = int(decay_bad[0]) + 1
    elif tail_bad.size:
        first = int(tail_bad[0]) + 1
    return MembershipReport(
        ordered_ok=decay_bad.size == 0,
        tail_ok=tail_bad.size == 0,
        first_violation=first,
        ordering=tuple(int(i) + 1 for i in order),
    )


def check_membership_ek(theta, A: float, k: float) -> bool:
    """Unordered decay ``|theta_j| <= A j^-k`` at every index."""
    theta = _as_theta(theta)
    j = np.arange(1, theta.size + 1, dtype=float)
    return bool(np.all(np.abs(theta) <= A * j ** -k))


def check_membership_ak(theta, A: float, k: float, C: float) -> bool:
    """``|theta_1| <= A`` plus the tail condition."""
    theta = _as_theta(theta)
    J = np.arange(1, theta.size + 1, dtype=float)
    return bool(abs(theta[0]) <= A and np.all(_tail_sums(theta) <= C * J ** (1.0 - 2.0 * k)))


def minimal_tail_constant(theta, k: float) -> float:
    """Smallest C for which the tail condition holds."""
    theta = _as_theta(theta)
    J = np.arange(1, theta.size + 1, dtype=float)
    return float(np.max(J ** (2.0 * k - 1.0) * _tail_sums(theta)))


def grid_minimum(f: SeriesDensity, points: int = 10_000) -> float:
    return float(np.min(eval_series(f, np.linspace(0.0, 1.0, points))))


__all__ = [
    "DomainError",
    "MembershipReport",
    "SeriesDensity",
    "SparsityParams",
    "cdf_series",
    "check_membership_ak",
    "check_membership_ek",
    "check_membership_theta",
    "design_density",
    "eval_series",
    "grid_minimum",
    "minimal_tail_constant",
    "uniform_density",
]
