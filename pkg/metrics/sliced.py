"""
Monte Carlo sliced 2-Wasserstein distance, optionally Gaussian-smoothed.

Evaluation draws its directions and noise from dedicated streams of the
metric seed, so it never shares randomness with a flow run.
"""

from typing import Optional

import numpy as np
import structlog

from geometry.sphere import ProjectionSet, project, sample_sphere
from models.config import MetricConfig
from transport.ot1d import build_quantile_table, quantile_coupling_cost
from utils.exceptions import InvalidArgumentError
from utils.rng import StreamRole, derive_seed, generator

logger = structlog.get_logger(__name__)


def _as_samples(points, name: str) -> np.ndarray:
    points = np.asarray(getattr(points, "rows", points), dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
        raise InvalidArgumentError(f"{name} must be an n x d matrix with n, d >= 1, got shape {points.shape}")
    if not np.all(np.isfinite(points)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    return points


def evaluation_directions(d: int, config: MetricConfig) -> ProjectionSet:
    return sample_sphere(d, config.n_theta_eval, derive_seed(config.seed, StreamRole.EVAL_PROJECTIONS))


def sliced_w2(a, b, config: Optional[MetricConfig] = None) -> float:
    """
    SW₂ between the empirical measures of a (n x d) and b (m x d).

    Each direction contributes the 1D W₂² of the (smoothed) projections,
    computed by the quantile coupling at min(n, m) levels; the result is the
    square root of the average.
    """
    config = config or MetricConfig()
    a = _as_samples(a, "a")
    b = _as_samples(b, "b")
    if a.shape[1] != b.shape[1]:
        raise InvalidArgumentError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")

    directions = evaluation_directions(a.shape[1], config)
    projected_a = project(a, directions)
    projected_b = project(b, directions)
    if config.sigma_eval > 0:
        # one noise matrix; row i smooths sample i of either set, whatever its argument position
        rows = max(projected_a.shape[0], projected_b.shape[0])
        noise = config.sigma_eval * generator(config.seed, StreamRole.EVAL_NOISE).standard_normal(
            (rows, directions.n_theta)
        )
        projected_a = projected_a + noise[: projected_a.shape[0]]
        projected_b = projected_b + noise[: projected_b.shape[0]]

    costs = np.array(
        [
            quantile_coupling_cost(
                build_quantile_table(projected_a[:, j]),
                build_quantile_table(projected_b[:, j]),
            )
            for j in range(directions.n_theta)
        ]
    )
    value = float(np.sqrt(max(costs.mean(), 0.0)))
    logger.debug(
        "sliced_w2",
        n=a.shape[0],
        m=b.shape[0],
        n_theta_eval=config.n_theta_eval,
        sigma_eval=config.sigma_eval,
        value=value,
    )
    return value
