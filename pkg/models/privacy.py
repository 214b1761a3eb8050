from dataclasses import asdict, dataclass
from typing import Optional

from utils.exceptions import InvalidArgumentError


@dataclass(frozen=True)
class MechanismEvent:
    """
    One Gaussian-mechanism release computed from the private target
    """

    iteration: int
    sigma: float
    sensitivity: float
    delta_local: float
    gamma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidArgumentError(f"recorded events need sigma > 0, got {self.sigma}")
        if not self.sensitivity > 0:
            raise InvalidArgumentError(f"sensitivity must be positive, got {self.sensitivity}")
        if not 0 < self.delta_local < 1:
            raise InvalidArgumentError(f"delta_local must be in (0, 1), got {self.delta_local}")
        if not 0 < self.gamma <= 1:
            raise InvalidArgumentError(f"gamma must be in (0, 1], got {self.gamma}")

    @property
    def amplified_delta(self) -> float:
        return self.gamma * self.delta_local

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CompositionResult:
    """
    Composed guarantee of a ledger.

    delta_rdp is the delta of the Renyi-to-(eps, delta) conversion and
    delta_amplified_sum the sum of the per-event deltas after diffusion
    amplification; they are reported side by side, never merged.
    """

    epsilon: float
    delta_rdp: float
    delta_amplified_sum: float
    optimal_order: Optional[float] = None

    @property
    def delta_total(self) -> float:
        return self.delta_rdp + self.delta_amplified_sum
