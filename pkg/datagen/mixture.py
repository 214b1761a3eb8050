"""
Gaussian mixture targets, including the built-in five-mode ring.
"""

from dataclasses import dataclass

import numpy as np
import structlog
from scipy import stats

from utils.exceptions import InvalidArgumentError

logger = structlog.get_logger(__name__)

WEIGHT_TOLERANCE = 1e-12
MIN_EIGENVALUE = 1e-12


@dataclass(frozen=True, eq=False)
class GaussianMixture:
    """
    Mixture of K Gaussians in R^d.

    means is K x d, covariances K x d x d (symmetric positive definite) and
    weights a probability vector of length K.
    """

    means: np.ndarray
    covariances: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        means = np.array(self.means, dtype=np.float64)
        covariances = np.array(self.covariances, dtype=np.float64)
        weights = np.array(self.weights, dtype=np.float64)

        if means.ndim != 2 or means.shape[0] < 1 or means.shape[1] < 1:
            raise InvalidArgumentError(f"means must be a K x d matrix, got shape {means.shape}")
        k, d = means.shape
        if covariances.shape != (k, d, d):
            raise InvalidArgumentError(f"covariances must have shape {(k, d, d)}, got {covariances.shape}")
        if weights.shape != (k,):
            raise InvalidArgumentError(f"weights must have shape {(k,)}, got {weights.shape}")
        if np.any(weights <= 0):
            raise InvalidArgumentError("mixture weights must be positive")
        if abs(weights.sum() - 1.0) > WEIGHT_TOLERANCE:
            raise InvalidArgumentError(f"mixture weights must sum to 1, got {weights.sum():.15g}")

        factors = np.empty_like(covariances)
        for i, cov in enumerate(covariances):
            if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12):
                raise InvalidArgumentError(f"covariance {i} is not symmetric")
            smallest = np.linalg.eigvalsh(cov)[0]
            if smallest < MIN_EIGENVALUE:
                raise InvalidArgumentError(
                    f"covariance {i} is not positive definite (smallest eigenvalue {smallest:.3g})"
                )
            try:
                factors[i] = np.linalg.cholesky(cov)
            except np.linalg.LinAlgError as e:
                raise InvalidArgumentError(f"covariance {i}: Cholesky factorization failed ({e})") from e

        for name, value in (("means", means), ("covariances", covariances), ("weights", weights)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        factors.setflags(write=False)
        object.__setattr__(self, "cholesky_factors", factors)

    @property
    def n_components(self) -> int:
        return self.means.shape[0]

    @property
    def dim(self) -> int:
        return self.means.shape[1]

    def density(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if points.shape[1] != self.dim:
            raise InvalidArgumentError(f"points have dimension {points.shape[1]}, mixture has {self.dim}")
        total = np.zeros(points.shape[0])
        for mean, cov, weight in zip(self.means, self.covariances, self.weights):
            total += weight * stats.multivariate_normal(mean=mean, cov=cov).pdf(points).reshape(-1)
        return total

    def __repr__(self):
        return f"<GaussianMixture(components={self.n_components}, dim={self.dim})>"


def sample_mixture(mixture: GaussianMixture, n: int, seed: int) -> np.ndarray:
    """
    n i.i.d. draws: a component by its weight, then mean + L z with L the Cholesky factor
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    labels = rng.choice(mixture.n_components, size=n, p=mixture.weights)
    z = rng.standard_normal((n, mixture.dim))
    return mixture.means[labels] + np.einsum("nij,nj->ni", mixture.cholesky_factors[labels], z)


def toy_ring_mixture(n_components: int = 5, radius: float = 6.0, spread: float = 0.25) -> GaussianMixture:
    """
    Equal-weight isotropic Gaussians (covariance spread * I) with means evenly
    spaced on a centered circle
    """
    if n_components < 1:
        raise InvalidArgumentError(f"n_components must be at least 1, got {n_components}")
    if radius < 0 or spread <= 0:
        raise InvalidArgumentError(f"need radius >= 0 and spread > 0, got radius={radius}, spread={spread}")
    angles = 2.0 * np.pi * np.arange(n_components) / n_components
    means = radius * np.column_stack([np.cos(angles), np.sin(angles)])
    covariances = np.repeat(spread * np.eye(2)[None, :, :], n_components, axis=0)
    return GaussianMixture(means, covariances, np.full(n_components, 1.0 / n_components))


def level_set_threshold(mixture: GaussianMixture, mass: float = 0.99, n_samples: int = 100_000, seed: int = 0) -> float:
    """
    Density level t such that {x : p(x) >= t} holds `mass` of the probability,
    estimated from the density values of mixture samples
    """
    if not 0 < mass < 1:
        raise InvalidArgumentError(f"mass must be in (0, 1), got {mass}")
    values = mixture.density(sample_mixture(mixture, n_samples, seed))
    logger.debug("level_set_estimated", mass=mass, n_samples=n_samples)
    return float(np.quantile(values, 1.0 - mass))


def level_set_grid(mixture: GaussianMixture, extent: float, size: int) -> np.ndarray:
    """
    size² x 3 array of (x, y, density) over [-extent, extent]² for contour plots
    """
    if mixture.dim != 2:
        raise InvalidArgumentError(f"level sets are exported for 2D mixtures only, got dimension {mixture.dim}")
    if extent <= 0 or size < 2:
        raise InvalidArgumentError(f"need extent > 0 and size >= 2, got extent={extent}, size={size}")
    axis = np.linspace(-extent, extent, size)
    xx, yy = np.meshgrid(axis, axis)
    points = np.column_stack([xx.ravel(), yy.ravel()])
    return np.column_stack([points, mixture.density(points)])
