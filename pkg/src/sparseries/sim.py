"""Monte-Carlo MISE comparison of the adaptive and fixed-cutoff estimators.

Replication ``b`` at sample size ``N`` draws its sample from the stream
``(seed, N, b)``. Both estimators see the same sample, so the comparison is
paired. Aggregation uses ``math.fsum`` and is independent of replication
order and scheduling.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coeffs import estimate_coefficients
from .numerics import QuadratureRule
from .project import DEFAULT_E_STAR, DEFAULT_MAX_ITER, ProjectedDensity, ProjectionError, p_algorithm
from .sampling import SamplerConfig, check_density, draw
from .sparsity import SeriesDensity, design_density, eval_series, uniform_density
from .threshold import build_estimator, compute_lambda, select

log = logging.getLogger(__name__)

ESTIMATORS = ("f_star", "f_check")
DEFAULT_SIZES = (5000, 10000, 15000, 20000)

_ROUNDING = ("floor", "round", "ceil")


def comparison_cutoff(N: int, rounding: str = "floor") -> int:
    """Fixed cutoff N^(1/4) rounded to an integer (at least 1)."""
    # integer fourth root: float 10000 ** 0.25 is not guaranteed to be 10.0
    r = math.isqrt(math.isqrt(N))
    if rounding == "floor" or r ** 4 == N:
        return max(1, r)
    if rounding == "ceil":
        return r + 1
    return max(1, r + 1 if N ** 0.25 - r >= 0.5 else r)


@dataclass(frozen=True)
class SimulationConfig:
    truth: SeriesDensity = field(default_factory=design_density)
    sizes: tuple = DEFAULT_SIZES
    replications: int = 100
    J_adaptive: int = 200
    comparison_rounding: str = "floor"
    seed: int = 20240101
    e_star: float = DEFAULT_E_STAR
    quad: QuadratureRule = field(default_factory=QuadratureRule)
    multiplier: float = 1.0
    max_iter: int = DEFAULT_MAX_ITER
    root_tol: float = 1e-12

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        sizes = tuple(int(n) for n in self.sizes)
        if not sizes or min(sizes) < 2:
            raise ValueError("sizes must be a nonempty list of integers >= 2")
        object.__setattr__(self, "sizes", sizes)
        if self.comparison_rounding not in _ROUNDING:
            raise ValueError(f"comparison_rounding must be one of {list(_ROUNDING)}")
        if self.J_adaptive < 2:
            raise ValueError("J_adaptive must be >= 2")

    @classmethod
    def from_json(cls, obj: dict) -> "SimulationConfig":
        obj = dict(obj)
        kw = {}
        if "truth" in obj:
            kw["truth"] = truth_from_spec(obj.pop("truth"))
        if "quad_panels" in obj:
            kw["quad"] = QuadratureRule(int(obj.pop("quad_panels")))
        aliases = {"B": "replications", "J": "J_adaptive"}
        for key, value in obj.items():
            key = aliases.get(key, key)
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"unknown simulation config key {key!r}")
            kw[key] = tuple(value) if key == "sizes" else value
        return cls(**kw)

    def to_json(self) -> dict:
        return {
            "truth": self.truth.to_json(),
            "sizes": list(self.sizes),
            "replications": self.replications,
            "J_adaptive": self.J_adaptive,
            "comparison_rounding": self.comparison_rounding,
            "seed": self.seed,
            "e_star": self.e_star,
            "quad_panels": self.quad.panels,
            "multiplier": self.multiplier,
            "max_iter": self.max_iter,
            "root_tol": self.root_tol,
        }


def truth_from_spec(spec) -> SeriesDensity:
    """``"design"``, ``"uniform"``, a JSON path, or a ``{basis, theta}`` dict."""
    if isinstance(spec, SeriesDensity):
        return spec
    if isinstance(spec, dict):
        return SeriesDensity.from_json(spec)
    if spec == "design":
        return design_density()
    if spec == "uniform":
        return uniform_density()
    return SeriesDensity.load(spec)


def ise(truth: SeriesDensity, estimate, rule: QuadratureRule | None = None) -> float:
    """Quadrature ISE between ``truth`` and a projected or raw series estimate."""
    rule = rule or QuadratureRule()
    t = eval_series(truth, rule.nodes)
    if isinstance(estimate, ProjectedDensity):
        e = estimate.on_nodes(rule)
    else:
        e = eval_series(estimate, rule.nodes)
    return rule.integrate_values((t - e) ** 2)


def _sample(truth, N, cfg, replication):
    scfg = SamplerConfig(seed=cfg.seed, root_tol=cfg.root_tol)
    return draw(truth, N, scfg, stream=(N, replication), check=False)


def run_adaptive_once(truth, N, J, cfg: SimulationConfig, replication: int = 0, sample=None) -> dict:
    """One replication of the thresholded estimator followed by projection.

    Also reports the ISE of the unprojected series and whether the
    coefficient error stayed below lambda, for the projection and coverage
    checks.
    """
    if sample is None:
        sample = _sample(truth, N, cfg, replication)
    est = estimate_coefficients(sample, truth.basis, J)
    lam = compute_lambda(est)
    report = select(est, lam, cfg.multiplier)
    raw = build_estimator(report, truth.basis)
    proj = p_algorithm(raw, cfg.quad, cfg.e_star, cfg.max_iter)
    th = np.zeros(J)
    m = min(J, truth.theta.size)
    th[:m] = truth.theta[:m]
    return {
        "ise": ise(truth, proj, cfg.quad),
        "ise_raw": ise(truth, raw, cfg.quad),
        "lambda": lam,
        "selected_count": int(report.selected.size),
        "covered": bool(np.max(np.abs(est.theta_hat - th)) <= lam),
        "shift": proj.shift,
        "mass": proj.mass,
        "min_value": float(np.min(proj.on_nodes(cfg.quad))),
    }


def run_comparison_once(truth, N, cfg: SimulationConfig, replication: int = 0, sample=None) -> dict:
    """One replication of the fixed-cutoff estimator with cutoff ~ N^(1/4)."""
    if sample is None:
        sample = _sample(truth, N, cfg, replication)
    cutoff = comparison_cutoff(N, cfg.comparison_rounding)
    est = estimate_coefficients(sample, truth.basis, cutoff)
    raw = SeriesDensity(truth.basis, est.theta_hat)
    proj = p_algorithm(raw, cfg.quad, cfg.e_star, cfg.max_iter)
    return {
        "ise": ise(truth, proj, cfg.quad),
        "ise_raw": ise(truth, raw, cfg.quad),
        "cutoff": cutoff,
        "shift": proj.shift,
        "mass": proj.mass,
        "min_value": float(np.min(proj.on_nodes(cfg.quad))),
    }


def _replicate(args):
    cfg, N, b = args
    sample = _sample(cfg.truth, N, cfg, b)
    out = {}
    for name, fn in (("f_star", lambda: run_adaptive_once(cfg.truth, N, cfg.J_adaptive, cfg, b, sample)),
                     ("f_check", lambda: run_comparison_once(cfg.truth, N, cfg, b, sample))):
        try:
            out[name] = fn()
        except ProjectionError as exc:
            log.warning("replication %d at N=%d failed for %s: %s", b, N, name, exc)
            out[name] = None
    return N, b, out


@dataclass
class Cell:
    estimator: str
    N: int
    B: int
    B_effective: int
    mise_hat: float
    std_error: float
    mean_selected_count: float | None
    failures: int


@dataclass
class SimulationResult:
    config: SimulationConfig
    cells: list
    # replicates[(estimator, N)] -> list of per-replication dicts (None on failure)
    replicates: dict = field(repr=False, default_factory=dict)

    def cell(self, estimator: str, N: int) -> Cell:
        for c in self.cells:
            if c.estimator == estimator and c.N == N:
                return c
        raise KeyError((estimator, N))

    def mise(self, estimator: str, N: int) -> float:
        return self.cell(estimator, N).mise_hat

    @property
    def failures(self) -> int:
        return sum(c.failures for c in self.cells)

    def write_csv(self, path) -> None:
        cols = ["estimator", "N", "B", "mise_hat", "std_error", "mean_selected_count", "seed"]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for c in self.cells:
                msc = "" if c.mean_selected_count is None else _fmt(c.mean_selected_count)
                w.writerow([c.estimator, c.N, c.B_effective, _fmt(c.mise_hat),
                            _fmt(c.std_error), msc, self.config.seed])

    def write_plotdata(self, path) -> None:
        """Long format, one row per (estimator, N, replication)."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["estimator", "N", "replication", "ise", "selected_count"])
            for (name, N), reps in sorted(self.replicates.items(), key=lambda kv: (kv[0][1], kv[0][0])):
                for b, r in enumerate(reps):
                    if r is None:
                        continue
                    sc = r.get("selected_count", r.get("cutoff"))
                    w.writerow([name, N, b, _fmt(r["ise"]), sc])


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def read_results_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        r["N"] = int(r["N"])
        r["B"] = int(r["B"])
        r["seed"] = int(r["seed"])
        r["mise_hat"] = float(r["mise_hat"])
        r["std_error"] = float(r["std_error"])
        r["mean_selected_count"] = float(r["mean_selected_count"]) if r["mean_selected_count"] else None
    return rows


def _aggregate(name, N, B, reps) -> Cell:
    good = [r for r in reps if r is not None]
    vals = [r["ise"] for r in good]
    k = len(vals)
    mean = math.fsum(vals) / k if k else float("nan")
    if k > 1:
        var = math.fsum((v - mean) ** 2 for v in vals) / (k - 1)
        se = math.sqrt(var / k)
    else:
        se = float("nan")
    msc = None
    if name == "f_star" and k:
        msc = math.fsum(r["selected_count"] for r in good) / k
    return Cell(name, N, B, k, mean, se, msc, B - k)


def run_simulation(cfg: SimulationConfig, workers: int | None = 1, progress=None) -> SimulationResult:
    """Run every (N, replication) task and aggregate per estimator and N.

    ``workers > 1`` distributes replications over processes; output does not
    depend on the worker count.
    """
    check_density(cfg.truth)
    tasks = [(cfg, N, b) for N in cfg.sizes for b in range(cfg.replications)]
    reps = {(name, N): [None] * cfg.replications for name in ESTIMATORS for N in cfg.sizes}
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = pool.map(_replicate, tasks, chunksize=max(1, len(tasks) // (8 * workers)))
            for N, b, out in results:
                for name in ESTIMATORS:
                    reps[(name, N)][b] = out[name]
                if progress:
                    progress()
    else:
        for t in tasks:
            N, b, out = _replicate(t)
            for name in ESTIMATORS:
                reps[(name, N)][b] = out[name]
            if progress:
                progress()
    cells = [_aggregate(name, N, cfg.replications, reps[(name, N)])
             for N in cfg.sizes for name in ESTIMATORS]
    failed = sum(c.failures for c in cells)
    if failed:
        log.warning("%d replications failed; see B_effective per cell", failed)
    return SimulationResult(cfg, cells, reps)


def fit_log_slope(sizes, mises) -> float:
    """Least-squares slope of log MISE against log N."""
    return float(np.polyfit(np.log(np.asarray(sizes, float)), np.log(np.asarray(mises, float)), 1)[0])
