"""Inverse transform sampling from nonnegative series densities.

Uniforms come from numpy's PCG64 generator. Independent streams are derived
from a root seed plus an integer key such as ``(N, replication)`` through
``SeedSequence`` spawn keys, so each replication's draws are reproducible on
any platform independent of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import Basis
from .coeffs import Sample
from .sparsity import SeriesDensity, cdf_series, grid_minimum

# bisection steps before Newton polishing; brackets the root to 2^-30
_BISECT_STEPS = 30
_NEWTON_STEPS = 8
_MAX_BISECT = 64
_DENSITY_FLOOR = 1e-8


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    method: str = "inverse_transform"
    root_tol: float = 1e-12

    def __post_init__(self):
        if self.method != "inverse_transform":
            raise ValueError(f"unsupported sampling method {self.method!r}")
        if not self.root_tol > 0:
            raise ValueError("root_tol must be positive")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise ValueError("seed must be a 64-bit unsigned integer")


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """PCG64 generator for the stream identified by ``(seed, *key)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def cdf(f: SeriesDensity, x):
    """Closed-form CDF. Assumes ``f`` is nonnegative on [0, 1]."""
    return cdf_series(f, x)


def check_density(f: SeriesDensity, points: int = 10_000, atol: float = 1e-12) -> None:
    if abs(f.integral() - 1.0) > 1e-12:
        raise ValueError(f"density integrates to {f.integral():.17g}, not 1")
    m = grid_minimum(f, points)
    if m < -atol:
        raise ValueError(f"density is negative on [0, 1] (grid minimum {m:.3g})")


class _CosineCDF:
    """F and f for a cosine series, without per-call validation."""

    def __init__(self, f: SeriesDensity):
        idx = f.support
        self.c1 = float(f.theta[0])
        rest = idx[idx > 1]
        self.freq = np.pi * (rest - 1).astype(float)
        self.amp = f.theta[rest - 1] * np.sqrt(2.0)

    def cdf(self, x):
        return self.c1 * x + np.sin(np.multiply.outer(x, self.freq)) @ (self.amp / self.freq)

    def pdf(self, x):
        return self.c1 + np.cos(np.multiply.outer(x, self.freq)) @ self.amp


def inverse_cdf(f: SeriesDensity, u, root_tol: float = 1e-12) -> np.ndarray:
    """Solve F(x) = u for each u by bisection with Newton polishing.

    Bisection keeps the bracket F(lo) < u <= F(hi), which pins the left end
    of any flat stretch of F. Newton steps are taken only where the density
    exceeds 1e-8 and only if they stay inside the bracket.
    """
    if f.basis is not Basis.COSINE:
        raise NotImplementedError(f"no sampler for basis {f.basis.value!r}")
    u = np.asarray(u, dtype=float)
    shape = u.shape
    F = _CosineCDF(f)
    u = u.ravel()
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        up = F.cdf(mid) >= u
        hi = np.where(up, mid, hi)
        lo = np.where(up, lo, mid)

    x = hi.copy()
    err = F.cdf(x) - u
    for _ in range(_NEWTON_STEPS):
        active = np.abs(err) > root_tol
        if not active.any():
            break
        dens = F.pdf(x[active])
        ok = dens > _DENSITY_FLOOR
        idx = np.flatnonzero(active)[ok]
        if idx.size == 0:
            break
        step = x[idx] - err[idx] / dens[ok]
        inside = (step >= lo[idx]) & (step <= hi[idx])
        x[idx[inside]] = step[inside]
        err[idx] = F.cdf(x[idx]) - u[idx]

    # whatever is still outside tolerance (flat or steep spots) keeps bisecting
    rest = np.flatnonzero(np.abs(err) > root_tol)
    if rest.size:
        l, h, ur = lo[rest], hi[rest], u[rest]
        for _ in range(_MAX_BISECT - _BISECT_STEPS):
            mid = 0.5 * (l + h)
            up = F.cdf(mid) >= ur
            h = np.where(up, mid, h)
            l = np.where(up, l, mid)
        x[rest] = h
        err[rest] = F.cdf(h) - ur
        # at full float resolution the residual is bounded by density * ulp
        bad = np.abs(err[rest]) > max(root_tol, 1e-14)
        if bad.any():
            raise SamplingError(f"root search failed for {int(bad.sum())} uniforms")
    return x.reshape(shape)


def draw(f: SeriesDensity, n: int, cfg: SamplerConfig | None = None, stream=(),
         rng: np.random.Generator | None = None, check: bool = True) -> Sample:
    """Draw ``n`` i.i.d. values from ``f``.

    The generator is ``make_rng(cfg.seed, *stream)`` unless ``rng`` is given.
    """
    cfg = cfg or SamplerConfig()
    if n < 1:
        raise ValueError("n must be positive")
    if check:
        check_density(f)
    rng = rng if rng is not None else make_rng(cfg.seed, *stream)
    u = rng.random(n)
    return Sample(inverse_cdf(f, u, cfg.root_tol), seed=int(cfg.seed))
