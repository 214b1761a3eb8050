from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from utils.exceptions import InvalidArgumentError, NumericError


@dataclass(frozen=True, eq=False)
class ParticleCloud:
    """
    n particles in R^d after `iteration` steps of the flow.

    Positions are stored as a read-only copy; the flow engine creates a new
    cloud at every step instead of mutating one.
    """

    positions: np.ndarray
    iteration: int = 0

    def __post_init__(self):
        positions = np.array(self.positions, dtype=np.float64)
        if positions.ndim != 2 or positions.shape[0] < 1 or positions.shape[1] < 1:
            raise InvalidArgumentError(
                f"particle positions must be an n x d matrix with n, d >= 1, got shape {positions.shape}"
            )
        if not np.all(np.isfinite(positions)):
            raise NumericError(f"non-finite particle coordinates at iteration {self.iteration}")
        if self.iteration < 0:
            raise InvalidArgumentError(f"iteration must be non-negative, got {self.iteration}")
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def copy(self) -> "ParticleCloud":
        return ParticleCloud(self.positions.copy(), self.iteration)

    def __repr__(self):
        return f"<ParticleCloud(n={self.n}, dim={self.dim}, iteration={self.iteration})>"


@dataclass
class FlowTrajectory:
    """
    Snapshots of the cloud at the configured cadence plus the final cloud
    """

    snapshots: List[Tuple[int, ParticleCloud]] = field(default_factory=list)
    final: Optional[ParticleCloud] = None

    def add_snapshot(self, cloud: ParticleCloud):
        if self.snapshots and cloud.iteration <= self.snapshots[-1][0]:
            raise InvalidArgumentError(
                f"snapshot iterations must be strictly increasing: "
                f"{cloud.iteration} after {self.snapshots[-1][0]}"
            )
        self.snapshots.append((cloud.iteration, cloud.copy()))

    def snapshot_at(self, iteration: int) -> ParticleCloud:
        for k, cloud in self.snapshots:
            if k == iteration:
                return cloud
        raise KeyError(f"no snapshot recorded at iteration {iteration}")

    @property
    def iterations(self) -> List[int]:
        return [k for k, _ in self.snapshots]

    def __repr__(self):
        return f"<FlowTrajectory(snapshots={self.iterations}, final_iteration={self.final.iteration if self.final else None})>"
