"""
Built-in run configurations.

The toy presets run on the five-Gaussian ring target; the latent presets
expect a dataset of pre-encoded vectors of the stated dimension.
"""

import copy
from typing import Dict

from utils.exceptions import ConfigError

TOY_SNAPSHOTS = [0, 1, 10, 50, 100, 200]

PRESETS: Dict[str, dict] = {
    "paper-toy": {
        "toy": True,
        "config": {
            "h": 1.0,
            "lambda": 0.001,
            "sigma": 0.0,
            "n_theta": 200,
            "k_steps": 200,
            "variant": "resampling",
            "n_particles": 1000,
            "dim": 2,
            "snapshots": TOY_SNAPSHOTS,
        },
    },
    "paper-toy-private": {
        "toy": True,
        "config": {
            "h": 1.0,
            "lambda": 0.001,
            "sigma": 0.5,
            "n_theta": 200,
            "k_steps": 200,
            "variant": "resampling",
            "n_particles": 1000,
            "dim": 2,
            "snapshots": TOY_SNAPSHOTS,
            # the ring target lives far outside the unit ball
            "allow_unnormalized": True,
        },
    },
    "paper-latent-8d": {
        "toy": False,
        "config": {
            "h": 1.0,
            "lambda": 0.001,
            "sigma": 0.68,
            "n_theta": 70,
            "k_steps": 35,
            "variant": "resampling",
            "delta": 1e-5,
            "dim": 8,
        },
    },
    "paper-latent-8d-presampled": {
        "toy": False,
        "config": {
            "h": 1.0,
            "lambda": 0.001,
            "sigma": 0.68,
            "n_theta": 31,
            "m_theta": 25,
            "k_steps": 1500,
            "variant": "presampled",
            "delta": 1e-5,
            "dim": 8,
        },
    },
    "paper-latent-48d": {
        "toy": False,
        "config": {
            "h": 1.0,
            "lambda": 0.001,
            "sigma": 0.59,
            "n_theta": 300,
            "k_steps": 30,
            "variant": "resampling",
            "delta": 1e-6,
            "dim": 48,
        },
    },
    "paper-latent-48d-presampled": {
        "toy": False,
        "config": {
            "h": 1.0,
            "lambda": 0.001,
            "sigma": 0.59,
            "n_theta": 250,
            "m_theta": 220,
            "k_steps": 2000,
            "variant": "presampled",
            "delta": 1e-6,
            "dim": 48,
        },
    },
}


def get_preset(name: str) -> dict:
    """
    Deep copy of a preset: {"toy": bool, "config": FlowConfig keys}
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")
    return copy.deepcopy(PRESETS[name])
