import numpy as np

from geometry.sphere import sample_sphere
from models.config import FlowConfig, FlowVariant
from models.particles import ParticleCloud
from utils.rng import StreamRole, derive_seed

from .base_flow import BaseFlow, FlowResult
from .dynamics import drift


class ResamplingFlow(BaseFlow):
    """
    Draws fresh directions every iteration and releases the noisy projected
    target each time, so the ledger gains one event per iteration
    """

    variant = FlowVariant.RESAMPLING

    def step_drift(self, cloud: ParticleCloud, k: int) -> np.ndarray:
        directions = sample_sphere(
            self.dim,
            self.config.n_theta,
            derive_seed(self.config.seed, StreamRole.PROJECTIONS, k),
        )
        target_tables = self.release_target(directions, k)
        return drift(cloud, target_tables, directions, self.particle_smoothing(k), clip=self.clip)


def run_dpswflow_r(target, config: FlowConfig) -> FlowResult:
    """
    Run the flow with resampled directions; `target` is an n x d matrix or a Dataset
    """
    return ResamplingFlow(target, config).run()
