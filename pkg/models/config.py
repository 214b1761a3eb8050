from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class FlowVariant(str, Enum):
    RESAMPLING = "resampling"  # fresh directions every iteration
    PRESAMPLED = "presampled"  # one direction set, subsampled per iteration


class InitKind(str, Enum):
    STANDARD_GAUSSIAN = "standard_gaussian"
    UNIFORM_BALL = "uniform_ball"


class SensitivityMode(str, Enum):
    SQRT = "sqrt"  # l2 sensitivity = sqrt(w), w bounds the squared Frobenius norm
    LINEAR = "linear"  # l2 sensitivity = w, as the guarantee is literally written


class SmoothingParams(BaseModel):
    """
    Gaussian smoothing of projected coordinates; sigma = 0 is the non-private flow
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    sigma: float = Field(0.0, ge=0.0)
    seed: int = Field(0, ge=0)


class MetricConfig(BaseModel):
    """
    Monte Carlo settings for the sliced Wasserstein estimate
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_theta_eval: int = Field(500, ge=1)
    sigma_eval: float = Field(0.0, ge=0.0)
    seed: int = Field(0, ge=0)


class FlowConfig(BaseModel):
    """
    Hyperparameters of one flow run.

    Keys mirror the JSON config file; unknown keys are rejected so that a
    misspelled privacy parameter is never silently ignored.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    h: float = Field(..., gt=0.0)
    lambda_: float = Field(0.0, ge=0.0, alias="lambda")
    sigma: float = Field(0.0, ge=0.0)
    n_theta: int = Field(..., ge=1)
    m_theta: Optional[int] = Field(None, ge=1)
    k_steps: int = Field(..., ge=1)
    variant: FlowVariant = FlowVariant.RESAMPLING
    seed: int = Field(0, ge=0)
    clip_drift: Optional[bool] = None
    init: InitKind = InitKind.STANDARD_GAUSSIAN
    init_radius: float = Field(1.0, gt=0.0)

    n_particles: Optional[int] = Field(None, ge=1)
    dim: Optional[int] = Field(None, ge=1)
    delta: float = Field(1e-5, gt=0.0, lt=1.0)
    norm_factor: float = Field(2.0, gt=0.0)
    sensitivity_mode: SensitivityMode = SensitivityMode.SQRT
    snapshots: Optional[List[int]] = None
    allow_unnormalized: bool = False
    epsilon_budget: Optional[float] = Field(None, gt=0.0)

    @model_validator(mode="after")
    def _check_subsample(self) -> "FlowConfig":
        if self.m_theta is not None and self.m_theta > self.n_theta:
            raise ValueError(
                f"m_theta ({self.m_theta}) must not exceed n_theta ({self.n_theta})"
            )
        if self.snapshots is not None and any(k < 0 for k in self.snapshots):
            raise ValueError("snapshot iterations must be non-negative")
        return self

    @property
    def effective_m_theta(self) -> int:
        return self.m_theta if self.m_theta is not None else self.n_theta

    @property
    def effective_clip(self) -> bool:
        # Clipping keeps each drift row inside the unit ball assumed by the privacy analysis
        if self.clip_drift is None:
            return self.sigma > 0
        return self.clip_drift

    @property
    def is_private(self) -> bool:
        return self.sigma > 0

    def snapshot_iterations(self, default_cadence: List[int]) -> List[int]:
        """
        Sorted snapshot iterations, restricted to [0, K] and always including K
        """
        cadence = self.snapshots if self.snapshots is not None else default_cadence
        return sorted({k for k in cadence if k <= self.k_steps} | {self.k_steps})

    def echo(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)
