"""
Uniform directions on the unit sphere and projections onto them.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import structlog

from utils.exceptions import InvalidArgumentError

logger = structlog.get_logger(__name__)

UNIT_NORM_TOLERANCE = 1e-9
DEGENERATE_NORM = 1e-12


@dataclass(frozen=True, eq=False)
class ProjectionSet:
    """
    d x n_theta matrix whose columns are unit directions
    """

    directions: np.ndarray
    seed: int = 0

    def __post_init__(self):
        directions = np.array(self.directions, dtype=np.float64, order="F")
        if directions.ndim != 2 or directions.shape[0] < 1 or directions.shape[1] < 1:
            raise InvalidArgumentError(
                f"directions must be a d x n_theta matrix with d, n_theta >= 1, got shape {directions.shape}"
            )
        norms = np.linalg.norm(directions, axis=0)
        bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_NORM_TOLERANCE)
        if bad.size:
            raise InvalidArgumentError(
                f"direction {bad[0]} has norm {norms[bad[0]]:.12g}, expected 1"
            )
        directions.setflags(write=False)
        object.__setattr__(self, "directions", directions)

    @property
    def dim(self) -> int:
        return self.directions.shape[0]

    @property
    def n_theta(self) -> int:
        return self.directions.shape[1]

    def subset(self, indices: Sequence[int]) -> "ProjectionSet":
        """
        Directions restricted to the given column indices, in that order
        """
        return ProjectionSet(self.directions[:, np.asarray(indices, dtype=np.intp)], self.seed)

    def __repr__(self):
        return f"<ProjectionSet(dim={self.dim}, n_theta={self.n_theta}, seed={self.seed})>"


def sample_sphere(d: int, n_theta: int, seed: int) -> ProjectionSet:
    """
    Draw n_theta i.i.d. uniform directions on S^{d-1} by normalizing standard
    Gaussian vectors. Deterministic given the seed.
    """
    if d < 1 or n_theta < 1:
        raise InvalidArgumentError(f"need d >= 1 and n_theta >= 1, got d={d}, n_theta={n_theta}")

    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((d, n_theta))
    norms = np.linalg.norm(draws, axis=0)

    # Redraw the (practically impossible) near-zero vectors
    degenerate = norms < DEGENERATE_NORM
    while degenerate.any():
        logger.debug("sphere_redraw", count=int(degenerate.sum()))
        draws[:, degenerate] = rng.standard_normal((d, int(degenerate.sum())))
        norms = np.linalg.norm(draws, axis=0)
        degenerate = norms < DEGENERATE_NORM

    return ProjectionSet(draws / norms, seed)


def project(points: np.ndarray, directions: ProjectionSet) -> np.ndarray:
    """
    n x n_theta matrix of inner products <x_i, theta_j>, stored column-major so
    that every direction's projections are contiguous
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise InvalidArgumentError(f"points must be an n x d matrix, got shape {points.shape}")
    if points.shape[1] != directions.dim:
        raise InvalidArgumentError(
            f"points have dimension {points.shape[1]} but directions have dimension {directions.dim}"
        )
    return np.asfortranarray(points @ directions.directions)
