from typing import List, Optional

import numpy as np
import structlog

from geometry.sphere import ProjectionSet, sample_sphere
from models.config import FlowConfig, FlowVariant
from models.particles import ParticleCloud
from transport.ot1d import QuantileTable
from utils.rng import StreamRole, derive_seed, generator

from .base_flow import BaseFlow, FlowResult
from .dynamics import drift

logger = structlog.get_logger(__name__)


class PresampledFlow(BaseFlow):
    """
    Draws all directions up front and releases the noisy projected target
    once; later iterations only subsample those directions and never touch
    the target again.
    """

    variant = FlowVariant.PRESAMPLED

    def __init__(self, target, config: FlowConfig):
        super().__init__(target, config)
        self.m_theta = config.effective_m_theta
        self.directions: Optional[ProjectionSet] = None
        self.target_tables: List[QuantileTable] = []

    def prepare(self):
        self.directions = sample_sphere(
            self.dim,
            self.config.n_theta,
            derive_seed(self.config.seed, StreamRole.PROJECTIONS, 0),
        )
        self.target_tables = self.release_target(self.directions, 0)
        logger.info("target_released", n_theta=self.config.n_theta, m_theta=self.m_theta)

    def subsample(self, k: int) -> np.ndarray:
        """
        Indices of the m_theta directions used at iteration k
        """
        if self.m_theta == self.config.n_theta:
            return np.arange(self.m_theta)
        rng = generator(self.config.seed, StreamRole.SUBSAMPLE, k)
        return rng.choice(self.config.n_theta, size=self.m_theta, replace=False)

    def step_drift(self, cloud: ParticleCloud, k: int) -> np.ndarray:
        indices = self.subsample(k)
        tables = [self.target_tables[i] for i in indices]
        return drift(cloud, tables, self.directions.subset(indices), self.particle_smoothing(k), clip=self.clip)


def run_dpswflow(target, config: FlowConfig) -> FlowResult:
    """
    Run the flow on one presampled direction set; `target` is an n x d matrix or a Dataset
    """
    return PresampledFlow(target, config).run()
