"""Orthonormal bases of L^2([0, 1]) with 1-based indexing.

Only the cosine system ships::

    phi_1(x) = 1,   phi_j(x) = sqrt(2) cos(pi (j - 1) x),  j >= 2
"""

from __future__ import annotations

import enum
import math

import numpy as np

SQRT2 = math.sqrt(2.0)


class DomainError(ValueError):
    """Argument outside the domain of a basis or density."""


class Basis(str, enum.Enum):
    COSINE = "cosine"

    @classmethod
    def parse(cls, tag) -> "Basis":
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).lower())
        except ValueError:
            raise ValueError(f"unknown basis {tag!r}; known: {[b.value for b in cls]}") from None


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("x must lie in [0, 1]")
    return x


def _check_j(j):
    j = np.asarray(j)
    if np.any(j < 1) or not np.all(np.equal(np.mod(j, 1), 0)):
        raise DomainError("basis index j must be an integer >= 1")
    return j.astype(np.int64)


def _ret(out):
    return float(out) if np.ndim(out) == 0 else out


def eval_basis(basis, j, x):
    """Evaluate phi_j at x. Broadcasts over array-valued j and x."""
    basis = Basis.parse(basis)
    j = _check_j(j)
    x = _check_x(x)
    out = np.where(j == 1, 1.0, SQRT2 * np.cos(np.pi * (j - 1) * x))
    return _ret(out)


def _sinpi(t):
    # sin(pi t) with exact zeros at integer t
    r = np.mod(t, 2.0)
    sign = np.where(r > 1.0, -1.0, 1.0)
    r = np.where(r > 1.0, r - 1.0, r)
    return sign * np.sin(np.pi * np.minimum(r, 1.0 - r))


def eval_basis_antiderivative(basis, j, x):
    """Integral of phi_j from 0 to x."""
    basis = Basis.parse(basis)
    j = _check_j(j)
    x = _check_x(x)
    m = np.maximum(j - 1, 1).astype(float)
    out = np.where(j == 1, x * np.ones_like(m), SQRT2 * _sinpi(m * x) / (np.pi * m))
    return _ret(out)


def sup_bound(basis, J: int) -> float:
    """Tightest known M_J with max_{j <= J} ||phi_j||_inf <= M_J."""
    basis = Basis.parse(basis)
    if J < 1:
        raise DomainError("J must be >= 1")
    return 1.0 if J == 1 else SQRT2


def design_matrix(basis, x, J: int, start: int = 1) -> np.ndarray:
    """Matrix ``Phi[i, j - start] = phi_j(x_i)`` for ``j = start .. J``."""
    basis = Basis.parse(basis)
    x = _check_x(x).ravel()
    if J < start or start < 1:
        raise DomainError("need 1 <= start <= J")
    freqs = np.pi * np.arange(start - 1, J, dtype=float)
    out = SQRT2 * np.cos(np.multiply.outer(x, freqs))
    if start == 1:
        out[:, 0] = 1.0
    return out
