import math

import numpy as np
import pytest

from models import SensitivityMode, SmoothingParams
from privacy import gaussian_constant, l2_sensitivity, perturb, sensitivity_bound, sigma_for_epsilon
from utils.exceptions import InvalidArgumentError, UnsupportedRegimeError


def normal_isf_by_bisection(delta: float) -> float:
    lo, hi = 0.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 0.5 * math.erfc(mid / math.sqrt(2.0)) > delta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_zero_sigma_is_identity(rng):
    projected = rng.standard_normal((20, 6))
    result = perturb(projected, SmoothingParams(sigma=0.0, seed=1))
    assert np.array_equal(result, projected)
    assert result is not projected


def test_perturb_is_deterministic(rng):
    projected = rng.standard_normal((20, 6))
    params = SmoothingParams(sigma=0.7, seed=99)
    assert np.array_equal(perturb(projected, params), perturb(projected, params))


def test_perturb_noise_scale():
    noisy = perturb(np.zeros((1000, 100)), SmoothingParams(sigma=2.0, seed=4))
    assert abs(noisy.std() - 2.0) < 0.02


def test_perturb_rejects_non_finite():
    with pytest.raises(InvalidArgumentError):
        perturb(np.array([[np.nan]]), SmoothingParams(sigma=1.0))


def test_sensitivity_bound_matches_independent_quantile():
    z = normal_isf_by_bisection(1e-5)
    expected = 70 / 8 + (z / 8) * math.sqrt(2 * 70 * 7 / 10)
    assert sensitivity_bound(70, 1e-5, 8) == pytest.approx(expected, rel=1e-6)
    assert sensitivity_bound(70, 1e-5, 8) == pytest.approx(14.03, abs=0.01)


def test_sensitivity_bound_trends():
    for delta in (1e-3, 1e-5, 1e-7):
        for d in (2, 8, 48):
            values = [sensitivity_bound(n, delta, d) for n in (40, 70, 200)]
            assert values[0] < values[1] < values[2]
            assert sensitivity_bound(2 * 70, delta, d) > sensitivity_bound(70, delta, d)
        for n in (40, 70, 200):
            values = [sensitivity_bound(n, delta, d) for d in (2, 8, 48)]
            assert values[0] > values[1] > values[2]


def test_small_projection_counts_are_unsupported():
    with pytest.raises(UnsupportedRegimeError):
        sensitivity_bound(30, 1e-5, 8)
    # the regime error is still an invalid argument for callers that only catch that
    with pytest.raises(InvalidArgumentError):
        sensitivity_bound(10, 1e-5, 8)


@pytest.mark.parametrize("delta, d", [(0.5, 8), (0.9, 8), (0.0, 8), (1e-5, 1)])
def test_sensitivity_bound_rejects_bad_inputs(delta, d):
    with pytest.raises(InvalidArgumentError):
        sensitivity_bound(70, delta, d)


def test_sensitivity_modes():
    w = sensitivity_bound(70, 1e-5, 8)
    assert l2_sensitivity(70, 1e-5, 8) == pytest.approx(2 * math.sqrt(w))
    assert l2_sensitivity(70, 1e-5, 8, mode=SensitivityMode.LINEAR) == pytest.approx(2 * w)


def test_gaussian_constant_is_strictly_above_classical_value():
    classical = math.sqrt(2 * math.log(1.25 / 1e-5))
    assert gaussian_constant(1e-5) > classical
    assert gaussian_constant(1e-5) == pytest.approx(classical, abs=1e-5)


def test_sigma_for_epsilon_example():
    assert sigma_for_epsilon(10, 1e-5, 70, 8) == pytest.approx(3.63, abs=0.01)


def test_sigma_for_epsilon_scaling():
    base = sigma_for_epsilon(5, 1e-5, 70, 8)
    assert sigma_for_epsilon(10, 1e-5, 70, 8) == pytest.approx(base / 2, rel=1e-15)
    assert sigma_for_epsilon(5, 1e-5, 70, 8, norm_factor=1.0) == pytest.approx(base / 2, rel=1e-15)
    products = [eps * sigma_for_epsilon(eps, 1e-5, 70, 8) for eps in (0.5, 1, 3, 10)]
    np.testing.assert_allclose(products, products[0], rtol=1e-12)


@pytest.mark.parametrize("epsilon", [0.0, -1.0])
def test_sigma_for_epsilon_rejects_non_positive_epsilon(epsilon):
    with pytest.raises(InvalidArgumentError):
        sigma_for_epsilon(epsilon, 1e-5, 70, 8)
