import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparseries.coeffs import (Sample, SampleError, estimate_coefficients, load_sample,
                               max_deviation, min_second_moment, padded_truth)
from sparseries.basis import sup_bound
from sparseries.sampling import SamplerConfig, draw, make_rng
from sparseries.sparsity import design_density


def test_two_point_sample():
    est = estimate_coefficients([0.25, 0.75], "cosine", 2)
    assert est.theta_hat[0] == 1.0
    assert est.theta_hat[1] == pytest.approx(0.0, abs=1e-15)
    # phi_2 at 0.25 and 0.75 is +-1
    np.testing.assert_allclose(est.second_moments, [0.0, 1.0], atol=1e-15)


def test_constant_term_invariant():
    est = estimate_coefficients(make_rng(3).random(50), "cosine", 5)
    assert est.theta_hat[0] == 1.0 and est.second_moments[0] == 0.0


def test_uniform_coefficients_small():
    est = estimate_coefficients(make_rng(11).random(100_000), "cosine", 16)
    assert np.max(np.abs(est.theta_hat[1:])) < 0.02


def test_matches_direct_definition():
    x = make_rng(5).random(333)
    est = estimate_coefficients(x, "cosine", 12)
    for j in range(1, 13):
        phi = np.ones_like(x) if j == 1 else math.sqrt(2) * np.cos(math.pi * (j - 1) * x)
        assert est.theta_hat[j - 1] == pytest.approx(phi.mean(), abs=1e-14)
        assert est.second_moments[j - 1] == pytest.approx(np.mean((phi - phi.mean()) ** 2), abs=1e-13)


def test_chunking_consistent():
    # crosses the internal block boundary
    x = make_rng(8).random(9000)
    a = estimate_coefficients(x, "cosine", 30)
    b = estimate_coefficients(x[::-1], "cosine", 30)
    np.testing.assert_allclose(a.theta_hat, b.theta_hat, atol=1e-12)
    np.testing.assert_allclose(a.second_moments, b.second_moments, atol=1e-12)


@settings(max_examples=50)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=60), st.randoms())
def test_permutation_invariant_and_bounded(values, rnd):
    perm = list(values)
    rnd.shuffle(perm)
    a = estimate_coefficients(values, "cosine", 10)
    b = estimate_coefficients(perm, "cosine", 10)
    np.testing.assert_allclose(a.theta_hat, b.theta_hat, atol=1e-12)
    np.testing.assert_allclose(a.second_moments, b.second_moments, atol=1e-12)
    bound = np.array([sup_bound("cosine", j) ** 2 for j in range(1, 11)])
    assert np.all(a.second_moments >= 0) and np.all(a.second_moments <= bound + 1e-12)


def test_empty_and_out_of_range():
    with pytest.raises(SampleError):
        Sample([])
    with pytest.raises(SampleError):
        estimate_coefficients([0.2, 1.2], "cosine", 3)


def test_max_deviation():
    est = estimate_coefficients([0.25, 0.75], "cosine", 2)
    assert max_deviation([1, 0.1], [1, 0]) == pytest.approx(0.1)
    assert max_deviation(est, est.theta_hat) == 0.0
    with pytest.raises(ValueError):
        max_deviation(est, [1.0])


def test_min_second_moment_diagnostic():
    est = estimate_coefficients(make_rng(1).random(5000), "cosine", 20)
    assert 0.8 < min_second_moment(est) <= 2.0


def test_load_sample(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("0.1\n\n0.5\n1\n")
    assert list(load_sample(p).values) == [0.1, 0.5, 1.0]
    p.write_text("0.1\n1.5\n")
    with pytest.raises(SampleError, match="line 2"):
        load_sample(p)
    p.write_text("")
    with pytest.raises(SampleError):
        load_sample(p)
    p.write_text("0.3\nabc\n")
    with pytest.raises(SampleError, match="line 2"):
        load_sample(p)


def test_sample_save_round_trip(tmp_path):
    s = Sample(make_rng(2).random(100))
    s.save(tmp_path / "s.txt")
    np.testing.assert_array_equal(load_sample(tmp_path / "s.txt").values, s.values)


@pytest.mark.slow
def test_design_max_deviation_frequency():
    f = design_density()
    truth = padded_truth(f.theta, 200)
    bound = 3 * math.sqrt(math.log(200) / 20000)
    hits = 0
    for b in range(100):
        s = draw(f, 20000, SamplerConfig(seed=99), stream=(b,))
        hits += max_deviation(estimate_coefficients(s, "cosine", 200), truth) < bound
    assert hits >= 99


@pytest.mark.slow
def test_coefficient_consistency_at_1e5():
    f = design_density()
    s = draw(f, 100_000, SamplerConfig(seed=7))
    est = estimate_coefficients(s, "cosine", 200)
    dev = np.abs(est.theta_hat - padded_truth(f.theta, 200))
    assert np.mean(dev <= 5 / math.sqrt(1e5)) >= 0.99
