from .mechanism import (
    gaussian_constant,
    l2_sensitivity,
    perturb,
    sensitivity_bound,
    sigma_for_epsilon,
)
from .accountant import (
    ALPHA_GRID,
    NoDiffusionWarning,
    PrivacyLedger,
    amplification_gamma,
    compose,
    per_event_epsilon,
    project_ledger,
)

__all__ = [
    "gaussian_constant",
    "l2_sensitivity",
    "perturb",
    "sensitivity_bound",
    "sigma_for_epsilon",
    "ALPHA_GRID",
    "NoDiffusionWarning",
    "PrivacyLedger",
    "amplification_gamma",
    "compose",
    "per_event_epsilon",
    "project_ledger",
]
