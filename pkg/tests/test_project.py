import math

import numpy as np
import pytest

from sparseries.coeffs import estimate_coefficients
from sparseries.numerics import QuadratureRule
from sparseries.project import ProjectionError, eval_projected, p_algorithm
from sparseries.sampling import SamplerConfig, draw
from sparseries.sim import ise
from sparseries.sparsity import SeriesDensity, design_density, eval_series, uniform_density
from sparseries.threshold import build_estimator, compute_lambda, select

# root of c -> int max(0, 1 + 2 sqrt(2) cos(pi x) + c) = 1, from the closed
# form (1 + c) x0 + 2 sqrt(2) sin(pi x0) / pi with cos(pi x0) = -(1 + c) / (2 sqrt(2)),
# solved with mpmath.findroot
SHIFT_ONE_PLUS_2SQRT2_COS = -0.8049172800063789133071007230084256798503


def test_uniform_is_fixed_point():
    p = p_algorithm(uniform_density())
    assert p.shift == 0.0 and p.iterations == 0
    assert eval_projected(p, 0.3) == 1.0


def test_constant_two():
    p = p_algorithm(SeriesDensity("cosine", [2.0]))
    assert p.shift == -1.0 and p.iterations == 1
    assert eval_projected(p, 0.9) == 1.0


def test_negative_lobe_shift():
    f0 = SeriesDensity("cosine", [1.0, 2.0])   # 1 + 2 sqrt(2) cos(pi x)
    p = p_algorithm(f0, QuadratureRule(4096), e_star=1e-10)
    assert p.shift == pytest.approx(SHIFT_ONE_PLUS_2SQRT2_COS, abs=1e-5)
    assert abs(p.mass - 1) < 1e-10


def test_negative_lobe_bisection_oracle():
    # independent route: bisection on a 1e5-point trapezoid grid
    x = np.linspace(0, 1, 100_001)
    g = 1 + 2 * math.sqrt(2) * np.cos(math.pi * x)
    lo, hi = -2.0, 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if np.trapezoid(np.maximum(0, g + mid), x) > 1:
            hi = mid
        else:
            lo = mid
    assert 0.5 * (lo + hi) == pytest.approx(SHIFT_ONE_PLUS_2SQRT2_COS, abs=1e-6)


def test_eval_projected_clips():
    p = p_algorithm(SeriesDensity("cosine", [1.0, 2.0]))
    vals = eval_projected(p, np.linspace(0, 1, 10_000))
    assert vals.min() == 0.0
    x = 0.95
    assert eval_series(p.base, x) + p.shift < 0 and eval_projected(p, x) == 0.0


def test_design_density_unchanged():
    d = design_density()
    p = p_algorithm(d)
    x = np.linspace(0, 1, 333)
    assert p.shift == 0.0
    np.testing.assert_array_equal(eval_projected(p, x), eval_series(d, x))


def test_domain_and_arguments():
    p = p_algorithm(uniform_density())
    with pytest.raises(ValueError):
        eval_projected(p, -0.01)
    with pytest.raises(ValueError):
        p_algorithm(uniform_density(), e_star=0)


def test_nonconvergence_reported():
    with pytest.raises(ProjectionError) as info:
        p_algorithm(SeriesDensity("cosine", [1.0, 3.0]), e_star=1e-14, max_iter=2)
    assert info.value.last_error > 0


def small_sample_fit(b, n=150, J=60, mult=0.25):
    f = design_density()
    s = draw(f, n, SamplerConfig(seed=12), stream=(b,))
    est = estimate_coefficients(s, "cosine", J)
    return f, build_estimator(select(est, compute_lambda(est), mult))


def test_projection_properties_on_rough_estimates():
    rule = QuadratureRule(4096)
    clipped = 0
    grid = np.linspace(0, 1, 10_000)
    for b in range(40):
        truth, raw = small_sample_fit(b)
        p = p_algorithm(raw, rule, 1e-6)
        clipped += p.shift < 0
        assert eval_projected(p, grid).min() >= 0.0
        assert abs(rule.integrate_values(p.on_nodes(rule)) - 1) < 1e-6
        assert ise(truth, p, rule) <= ise(truth, raw, rule) + 1e-8
    # make sure the clipping branch was exercised
    assert clipped >= 10


def test_idempotent_on_valid_densities():
    rng = np.random.default_rng(0)
    for _ in range(20):
        # 1 + small cosine perturbation stays positive
        theta = np.r_[1.0, rng.uniform(-1, 1, 8) * 0.08]
        p = p_algorithm(SeriesDensity("cosine", theta))
        assert p.shift == 0.0 and p.iterations == 0
