"""
Sliced drift and Euler–Maruyama stepping.

For every direction θ_j the particle projections are smoothed with fresh
Gaussian noise, and each particle is displaced by the 1D monotone transport
from the smoothed particle projections to the (already smoothed) target
projections. The drift of a particle is that displacement averaged against
the directions:

    v(x) = (1/Nθ) Σ_j [F_j^{-1}(G_j(p)) - p] θ_j,   p = <x, θ_j> + z_j
"""

from typing import Optional, Sequence

import numpy as np

from geometry.sphere import ProjectionSet, project
from models.config import SmoothingParams
from models.particles import ParticleCloud
from privacy.mechanism import perturb
from transport.ot1d import QuantileTable, build_quantile_table, potential_derivative
from utils.exceptions import InvalidArgumentError


def clip_rows(vectors: np.ndarray) -> np.ndarray:
    """
    Rescale every row to norm at most 1
    """
    norms = np.linalg.norm(vectors, axis=1)
    return vectors / np.maximum(1.0, norms)[:, None]


def drift(
    particles: ParticleCloud,
    target_tables: Sequence[QuantileTable],
    directions: ProjectionSet,
    smoothing: SmoothingParams,
    clip: bool = False,
    noise: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    n x d drift matrix moving each particle toward the smoothed target.

    target_tables[j] holds the noisy target projections on directions[:, j].
    With clip set, every row is rescaled to norm at most 1.

    The particle projections are smoothed with noise drawn from `smoothing.seed`
    unless an explicit n x Nθ standard-normal matrix is passed as `noise`; row i
    of it belongs to particle i, so permuting particles and noise rows together
    permutes the drift rows.
    """
    if len(target_tables) != directions.n_theta:
        raise InvalidArgumentError(
            f"got {len(target_tables)} target tables for {directions.n_theta} directions"
        )

    projected = project(particles.positions, directions)
    if noise is None:
        noisy = perturb(projected, smoothing)
    else:
        noise = np.asarray(noise, dtype=np.float64)
        if noise.shape != projected.shape:
            raise InvalidArgumentError(
                f"noise has shape {noise.shape}, particle projections have shape {projected.shape}"
            )
        noisy = projected + smoothing.sigma * noise

    displacement = np.empty_like(noisy)
    for j, target in enumerate(target_tables):
        column = noisy[:, j]
        source = build_quantile_table(column)
        displacement[:, j] = -potential_derivative(column, source, target)

    velocity = displacement @ directions.directions.T / directions.n_theta
    if clip:
        velocity = clip_rows(velocity)
    return velocity


def em_step(
    particles: ParticleCloud,
    drift_matrix: np.ndarray,
    h: float,
    lam: float,
    seed: int = 0,
    noise: Optional[np.ndarray] = None,
) -> ParticleCloud:
    """
    One Euler–Maruyama step: x + h·v + sqrt(2λh)·G.

    G is drawn from `seed` unless an explicit standard-normal matrix is passed
    as `noise`, which lets callers couple Brownian paths across step sizes.
    """
    if not h > 0:
        raise InvalidArgumentError(f"h must be positive, got {h}")
    if lam < 0:
        raise InvalidArgumentError(f"lambda must be non-negative, got {lam}")
    drift_matrix = np.asarray(drift_matrix, dtype=np.float64)
    if drift_matrix.shape != particles.positions.shape:
        raise InvalidArgumentError(
            f"drift has shape {drift_matrix.shape}, particles have shape {particles.positions.shape}"
        )

    positions = particles.positions + h * drift_matrix
    if lam > 0:
        if noise is None:
            noise = np.random.default_rng(seed).standard_normal(positions.shape)
        elif np.shape(noise) != positions.shape:
            raise InvalidArgumentError(
                f"noise has shape {np.shape(noise)}, particles have shape {positions.shape}"
            )
        positions = positions + np.sqrt(2.0 * lam * h) * np.asarray(noise, dtype=np.float64)

    return ParticleCloud(positions, particles.iteration + 1)
