from .config import FlowConfig, FlowVariant, InitKind, MetricConfig, SensitivityMode, SmoothingParams
from .particles import ParticleCloud, FlowTrajectory
from .privacy import MechanismEvent, CompositionResult
from .manifest import RunManifest

__all__ = [
    "FlowConfig",
    "FlowVariant",
    "InitKind",
    "MetricConfig",
    "SensitivityMode",
    "SmoothingParams",
    "ParticleCloud",
    "FlowTrajectory",
    "MechanismEvent",
    "CompositionResult",
    "RunManifest",
]
