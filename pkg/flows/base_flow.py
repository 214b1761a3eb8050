import time
from abc import ABC, abstractmethod
from typing import List, NamedTuple

import numpy as np
import structlog

from app.config import settings
from geometry.sphere import ProjectionSet, project
from models.config import FlowConfig, FlowVariant, InitKind, SmoothingParams
from models.particles import FlowTrajectory, ParticleCloud
from privacy.accountant import (
    PrivacyLedger,
    amplification_gamma,
    config_sensitivity,
    new_ledger,
    release_gamma,
)
from privacy.mechanism import perturb
from transport.ot1d import QuantileTable, build_quantile_table
from utils.exceptions import InvalidArgumentError, PreconditionError
from utils.rng import StreamRole, derive_seed, generator

from .dynamics import em_step

logger = structlog.get_logger(__name__)

UNIT_ROW_TOLERANCE = 1e-9


class FlowResult(NamedTuple):
    trajectory: FlowTrajectory
    ledger: PrivacyLedger


def rows_are_unit(rows: np.ndarray, tol: float = UNIT_ROW_TOLERANCE) -> bool:
    return bool(np.all(np.abs(np.linalg.norm(rows, axis=1) - 1.0) <= tol))


class BaseFlow(ABC):
    """
    Abstract base class for the sliced Wasserstein particle flows.

    Subclasses decide how directions are chosen and when the target is
    released; the base class owns initialization, stepping, snapshots and the
    privacy ledger.
    """

    variant: FlowVariant

    def __init__(self, target, config: FlowConfig):
        if config.variant is not self.variant:
            raise InvalidArgumentError(
                f"{self.__class__.__name__} runs the {self.variant.value} variant, "
                f"config asks for {config.variant.value}"
            )
        rows = np.asarray(getattr(target, "rows", target), dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise InvalidArgumentError(f"target must be an n x d matrix, got shape {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise InvalidArgumentError("target contains non-finite values")
        if config.dim is not None and config.dim != rows.shape[1]:
            raise InvalidArgumentError(
                f"config expects dimension {config.dim}, target has dimension {rows.shape[1]}"
            )

        self.config = config
        self.target = rows
        self.dim = rows.shape[1]
        self.n_particles = config.n_particles or rows.shape[0]
        self.clip = config.effective_clip
        self.ledger = new_ledger(config)

        self._check_normalization()
        if config.is_private:
            self.sensitivity = config_sensitivity(config, self.dim)
            self.gamma = amplification_gamma(config.h, config.lambda_)
        else:
            self.sensitivity = 0.0
            self.gamma = release_gamma(config)

    def _check_normalization(self):
        if not self.config.is_private or rows_are_unit(self.target):
            return
        if not self.config.allow_unnormalized:
            raise PreconditionError(
                "private runs need target rows of unit norm; normalize the dataset "
                "or set allow_unnormalized"
            )
        self.ledger.guarantee_valid = False
        logger.warning("unnormalized_private_target", sigma=self.config.sigma)

    def initial_cloud(self) -> ParticleCloud:
        rng = generator(self.config.seed, StreamRole.INIT)
        shape = (self.n_particles, self.dim)
        if self.config.init is InitKind.UNIFORM_BALL:
            draws = rng.standard_normal(shape)
            draws /= np.linalg.norm(draws, axis=1, keepdims=True)
            radii = self.config.init_radius * rng.random(self.n_particles) ** (1.0 / self.dim)
            return ParticleCloud(draws * radii[:, None], 0)
        return ParticleCloud(rng.standard_normal(shape), 0)

    def particle_smoothing(self, k: int) -> SmoothingParams:
        return SmoothingParams(
            sigma=self.config.sigma,
            seed=derive_seed(self.config.seed, StreamRole.PARTICLE_NOISE, k),
        )

    def release_target(self, directions: ProjectionSet, k: int) -> List[QuantileTable]:
        """
        Perturb the projected target once, record the release, and build one
        quantile table per direction
        """
        smoothing = SmoothingParams(
            sigma=self.config.sigma,
            seed=derive_seed(self.config.seed, StreamRole.TARGET_NOISE, k),
        )
        noisy = perturb(project(self.target, directions), smoothing)
        self.ledger.record_release(k, self.config.sigma, self.sensitivity, self.config.delta, self.gamma)
        return [build_quantile_table(noisy[:, j]) for j in range(directions.n_theta)]

    def prepare(self):
        """
        Hook run once before the first iteration
        """

    @abstractmethod
    def step_drift(self, cloud: ParticleCloud, k: int) -> np.ndarray:
        """
        Drift matrix for iteration k
        """
        pass

    def run(self) -> FlowResult:
        config = self.config
        snapshot_iterations = set(config.snapshot_iterations(settings.snapshot_cadence))
        trajectory = FlowTrajectory()

        logger.info(
            "flow_started",
            variant=config.variant.value,
            n_particles=self.n_particles,
            dim=self.dim,
            k_steps=config.k_steps,
            sigma=config.sigma,
        )
        started = time.perf_counter()

        cloud = self.initial_cloud()
        if 0 in snapshot_iterations:
            trajectory.add_snapshot(cloud)

        self.prepare()
        for k in range(config.k_steps):
            velocity = self.step_drift(cloud, k)
            cloud = em_step(
                cloud,
                velocity,
                config.h,
                config.lambda_,
                seed=derive_seed(config.seed, StreamRole.DIFFUSION, k),
            )
            if cloud.iteration in snapshot_iterations:
                trajectory.add_snapshot(cloud)
            logger.debug("flow_step", iteration=cloud.iteration, max_drift=float(np.abs(velocity).max()))

        trajectory.final = cloud
        logger.info(
            "flow_finished",
            variant=config.variant.value,
            iterations=cloud.iteration,
            seconds=round(time.perf_counter() - started, 3),
            target_accesses=self.ledger.target_accesses,
        )
        return FlowResult(trajectory, self.ledger)
