"""
Gaussian mechanism on projected data and the sensitivity analysis behind it.

Releasing XΘ + Z with Z ~ N(0, σ²) entrywise is (ε, δ)-DP when
σ ≥ c·Δ₂/ε and c² > 2 ln(1.25/δ). For random projections of rows that move by
at most 1 in ℓ₂, the squared Frobenius change of XΘ is bounded, with
probability 1 - δ, by

    w(Nθ, δ) = Nθ/d + (z_{1-δ}/d)·sqrt(2·Nθ·(d-1)/(d+2))

where z_{1-δ} is the standard normal quantile. The bound relies on a normal
approximation and is only used for Nθ > 30.
"""

import math

import numpy as np
import structlog
from scipy import stats

from models.config import SensitivityMode, SmoothingParams
from utils.exceptions import InvalidArgumentError, UnsupportedRegimeError

logger = structlog.get_logger(__name__)

MIN_PROJECTIONS = 30
# Keeps c strictly above sqrt(2 ln(1.25/delta))
CONSTANT_MARGIN = 1e-6
# Row normalization to the unit sphere doubles the distance between adjacent rows
UNIT_NORM_FACTOR = 2.0


def perturb(projected: np.ndarray, params: SmoothingParams) -> np.ndarray:
    """
    projected + Z with Z i.i.d. N(0, sigma²); sigma = 0 returns an exact copy
    """
    projected = np.asarray(projected, dtype=np.float64)
    if not np.all(np.isfinite(projected)):
        raise InvalidArgumentError("cannot perturb a matrix with non-finite entries")
    if params.sigma == 0:
        return projected.copy(order="K")

    rng = np.random.default_rng(params.seed)
    noise = rng.standard_normal(projected.shape)
    return projected + params.sigma * noise


def _check_delta(delta: float):
    if not 0 < delta < 1:
        raise InvalidArgumentError(f"delta must be in (0, 1), got {delta}")


def sensitivity_bound(n_theta: int, delta: float, d: int) -> float:
    """
    w(Nθ, δ): high-probability bound on the squared Frobenius norm of XΘ - X'Θ
    for adjacent X, X' whose differing rows are at most 1 apart
    """
    _check_delta(delta)
    if delta >= 0.5:
        # z_{1-delta} would be non-positive and the concentration reading breaks
        raise InvalidArgumentError(f"delta must be below 0.5 for the sensitivity bound, got {delta}")
    if n_theta <= MIN_PROJECTIONS:
        raise UnsupportedRegimeError(
            f"the sensitivity bound needs more than {MIN_PROJECTIONS} projections, got n_theta={n_theta}"
        )
    if d < 2:
        raise InvalidArgumentError(f"the sensitivity bound needs d >= 2, got d={d}")

    z = stats.norm.isf(delta)
    return n_theta / d + (z / d) * math.sqrt(2.0 * n_theta * (d - 1) / (d + 2))


def l2_sensitivity(
    n_theta: int,
    delta: float,
    d: int,
    norm_factor: float = UNIT_NORM_FACTOR,
    mode: SensitivityMode = SensitivityMode.SQRT,
) -> float:
    """
    ℓ₂ sensitivity fed to the Gaussian mechanism.

    SQRT reads w as a bound on the squared Frobenius norm (Δ = sqrt(w)); LINEAR
    uses w itself, as the privacy guarantee is literally stated.
    """
    if norm_factor <= 0:
        raise InvalidArgumentError(f"norm_factor must be positive, got {norm_factor}")
    w = sensitivity_bound(n_theta, delta, d)
    if SensitivityMode(mode) is SensitivityMode.LINEAR:
        return norm_factor * w
    return norm_factor * math.sqrt(w)


def gaussian_constant(delta: float) -> float:
    """
    c = sqrt(2 ln(1.25/δ)) plus a small margin for the strict inequality
    """
    _check_delta(delta)
    return math.sqrt(2.0 * math.log(1.25 / delta)) + CONSTANT_MARGIN


def sigma_for_epsilon(
    epsilon: float,
    delta: float,
    n_theta: int,
    d: int,
    norm_factor: float = UNIT_NORM_FACTOR,
    mode: SensitivityMode = SensitivityMode.SQRT,
) -> float:
    """
    Noise level σ = c·Δ/ε that makes one projected release (ε, δ)-DP
    """
    if not epsilon > 0:
        raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}")
    sensitivity = l2_sensitivity(n_theta, delta, d, norm_factor, mode)
    sigma = gaussian_constant(delta) * sensitivity / epsilon
    logger.debug(
        "sigma_calibrated",
        epsilon=epsilon,
        delta=delta,
        n_theta=n_theta,
        d=d,
        sensitivity=sensitivity,
        sigma=sigma,
    )
    return sigma
