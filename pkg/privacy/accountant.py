"""
Privacy accounting for target-touching Gaussian releases.

Every release of the noisy projected target is recorded as a MechanismEvent in
a PrivacyLedger. Composition uses the Rényi divergence of Gaussian
mechanisms: one release with sensitivity Δ and noise σ costs α·Δ²/(2σ²) at
order α, orders add across releases, and the total converts to (ε, δ) through

    ε(α) = Σ_k α·Δ_k²/(2σ_k²) + ln(1/δ)/(α - 1)

minimized over a fixed grid of orders. The diffusion of the flow multiplies
each release's own δ by γ = min(1, sqrt(h/(2λ))); those amplified δ's are
summed and reported next to the conversion δ.
"""

import json
import math
import warnings
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import structlog

from models.config import FlowConfig, FlowVariant
from models.privacy import CompositionResult, MechanismEvent
from privacy.mechanism import l2_sensitivity
from utils.exceptions import InvalidArgumentError

logger = structlog.get_logger(__name__)

ALPHA_GRID = np.array(
    [
        1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 6.0, 8.0,
        10.0, 12.0, 14.0, 16.0, 20.0, 24.0, 28.0, 32.0, 48.0, 64.0, 128.0,
        256.0, 512.0,
    ]
)


class NoDiffusionWarning(UserWarning):
    """
    Raised through `warnings` when λ = 0 leaves nothing to amplify privacy
    """


def amplification_gamma(h: float, lam: float) -> float:
    """
    Total-variation contraction of one diffusion step, min(1, sqrt(h / (2λ)))
    """
    if not h > 0:
        raise InvalidArgumentError(f"h must be positive, got {h}")
    if lam < 0:
        raise InvalidArgumentError(f"lambda must be non-negative, got {lam}")
    if lam == 0:
        warnings.warn(
            "lambda = 0: no diffusion noise, deltas are not amplified",
            NoDiffusionWarning,
            stacklevel=2,
        )
        return 1.0
    return min(1.0, math.sqrt(h / (2.0 * lam)))


def per_event_epsilon(sigma: float, sensitivity: float, delta: float) -> float:
    """
    ε of a single Gaussian release, sqrt(2 ln(1.25/δ))·Δ/σ; infinite when σ = 0
    """
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be non-negative, got {sigma}")
    if not sensitivity > 0:
        raise InvalidArgumentError(f"sensitivity must be positive, got {sensitivity}")
    if not 0 < delta < 1:
        raise InvalidArgumentError(f"delta must be in (0, 1), got {delta}")
    if sigma == 0:
        return math.inf
    return math.sqrt(2.0 * math.log(1.25 / delta)) * sensitivity / sigma


def renyi_epsilon_curve(events: List[MechanismEvent], target_delta: float) -> np.ndarray:
    """
    ε(α) on ALPHA_GRID for the composition of `events`
    """
    rho = sum(e.sensitivity ** 2 / (2.0 * e.sigma ** 2) for e in events)
    return ALPHA_GRID * rho + math.log(1.0 / target_delta) / (ALPHA_GRID - 1.0)


def compose(ledger: "PrivacyLedger", target_delta: Optional[float] = None) -> CompositionResult:
    if target_delta is None:
        target_delta = ledger.target_delta
    if not 0 < target_delta < 1:
        raise InvalidArgumentError(f"target_delta must be in (0, 1), got {target_delta}")

    if not ledger.private:
        return CompositionResult(epsilon=math.inf, delta_rdp=target_delta, delta_amplified_sum=0.0)
    if not ledger.events:
        return CompositionResult(epsilon=0.0, delta_rdp=target_delta, delta_amplified_sum=0.0)

    curve = renyi_epsilon_curve(ledger.events, target_delta)
    best = int(np.argmin(curve))
    return CompositionResult(
        epsilon=float(curve[best]),
        delta_rdp=target_delta,
        delta_amplified_sum=float(sum(e.amplified_delta for e in ledger.events)),
        optimal_order=float(ALPHA_GRID[best]),
    )


class PrivacyLedger:
    """
    Ordered record of the releases computed from the private target.

    A run with sigma = 0 still touches the target; those accesses are counted
    but cannot be recorded as mechanism events, and the ledger is marked
    non-private (its composed ε is infinite).
    """

    def __init__(self, target_delta: float = 1e-5, epsilon_budget: Optional[float] = None):
        if not 0 < target_delta < 1:
            raise InvalidArgumentError(f"target_delta must be in (0, 1), got {target_delta}")
        self.target_delta = target_delta
        self.epsilon_budget = epsilon_budget
        self.events: List[MechanismEvent] = []
        self.target_accesses = 0
        self.private = True
        # False when a private run was allowed on rows outside the unit ball
        self.guarantee_valid = True
        self._budget_warned = False

    def __len__(self):
        return len(self.events)

    def __repr__(self):
        return f"<PrivacyLedger(events={len(self.events)}, accesses={self.target_accesses}, private={self.private})>"

    def record(self, event: MechanismEvent) -> MechanismEvent:
        self.events.append(event)
        self.target_accesses += 1
        logger.debug(
            "mechanism_event",
            iteration=event.iteration,
            sigma=event.sigma,
            sensitivity=event.sensitivity,
            gamma=event.gamma,
        )
        self._check_budget()
        return event

    def record_release(
        self, iteration: int, sigma: float, sensitivity: float, delta_local: float, gamma: float
    ) -> Optional[MechanismEvent]:
        """
        Account for one access to the target; sigma = 0 makes the ledger non-private
        """
        if sigma == 0:
            self.target_accesses += 1
            if self.private:
                logger.info("ledger_non_private", iteration=iteration)
            self.private = False
            return None
        return self.record(MechanismEvent(iteration, sigma, sensitivity, delta_local, gamma))

    def compose(self, target_delta: Optional[float] = None) -> CompositionResult:
        return compose(self, target_delta)

    def _check_budget(self):
        if self.epsilon_budget is None or self._budget_warned:
            return
        epsilon = self.compose().epsilon
        if epsilon > self.epsilon_budget:
            self._budget_warned = True
            logger.warning(
                "privacy_budget_exceeded",
                epsilon=epsilon,
                budget=self.epsilon_budget,
                events=len(self.events),
            )

    def over_budget(self) -> bool:
        if self.epsilon_budget is None:
            return False
        return self.compose().epsilon > self.epsilon_budget

    def summary(self) -> Dict:
        result = self.compose()
        return {
            "events": len(self.events),
            "target_accesses": self.target_accesses,
            "private": self.private,
            "epsilon": result.epsilon,
            "delta_rdp": result.delta_rdp,
            "delta_amplified_sum": result.delta_amplified_sum,
            "optimal_order": result.optimal_order,
            "epsilon_budget": self.epsilon_budget,
            "over_budget": self.over_budget(),
        }

    def to_report(self, config_echo: Optional[dict] = None, **extra) -> Dict:
        """
        JSON-ready privacy report; a non-finite ε is written as null
        """
        result = self.compose()
        report = {
            "events": [e.to_dict() for e in self.events],
            "epsilon_total": result.epsilon if math.isfinite(result.epsilon) else None,
            "delta_rdp": result.delta_rdp,
            "delta_amplified_sum": result.delta_amplified_sum,
            "optimal_order": result.optimal_order,
            "private": self.private,
            "guarantee_valid": self.guarantee_valid,
            "epsilon_budget": self.epsilon_budget,
            "over_budget": self.over_budget(),
            "target_accesses": self.target_accesses,
            "config_echo": config_echo or {},
        }
        report.update(extra)
        return report

    def save(self, path: Union[str, Path], config_echo: Optional[dict] = None, **extra):
        try:
            with open(path, "w", encoding="utf-8") as f:
                json.dump(self.to_report(config_echo, **extra), f, indent=2)
        except OSError as e:
            logger.error("privacy_report_write_failed", path=str(path), error=str(e))
            raise


def release_gamma(config: FlowConfig) -> float:
    """
    Amplification factor for a config; a λ = 0 flow gets γ = 1 without a warning per event
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoDiffusionWarning)
        return amplification_gamma(config.h, config.lambda_)


def release_count(config: FlowConfig) -> int:
    return config.k_steps if config.variant is FlowVariant.RESAMPLING else 1


def new_ledger(config: FlowConfig) -> PrivacyLedger:
    return PrivacyLedger(target_delta=config.delta, epsilon_budget=config.epsilon_budget)


def config_sensitivity(config: FlowConfig, d: int) -> float:
    return l2_sensitivity(config.n_theta, config.delta, d, config.norm_factor, config.sensitivity_mode)


def project_ledger(config: FlowConfig, d: int) -> PrivacyLedger:
    """
    The ledger a run of `config` on d-dimensional data would produce, without running it
    """
    ledger = new_ledger(config)
    if config.lambda_ == 0:
        warnings.warn(
            "lambda = 0: no diffusion noise, deltas are not amplified",
            NoDiffusionWarning,
            stacklevel=2,
        )
    gamma = release_gamma(config)
    sensitivity = config_sensitivity(config, d) if config.is_private else 0.0
    for k in range(release_count(config)):
        ledger.record_release(k, config.sigma, sensitivity, config.delta, gamma)

    logger.info("ledger_projected", variant=config.variant.value, **ledger.summary())
    return ledger
