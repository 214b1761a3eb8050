"""
Seeded random streams.

Every draw is keyed by (run seed, role, counters...) so that a given piece of
noise is reproducible regardless of the order in which it is requested, and
noise used for different roles never overlaps.
"""

from enum import IntEnum

import numpy as np


class StreamRole(IntEnum):
    INIT = 0
    PROJECTIONS = 1
    TARGET_NOISE = 2
    PARTICLE_NOISE = 3
    DIFFUSION = 4
    SUBSAMPLE = 5
    TARGET_SAMPLES = 6
    EVAL_PROJECTIONS = 7
    EVAL_NOISE = 8


def _sequence(seed: int, role: StreamRole, counters) -> np.random.SeedSequence:
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.SeedSequence(seed, spawn_key=(int(role), *(int(c) for c in counters)))


def derive_seed(seed: int, role: StreamRole, *counters: int) -> int:
    """
    Derive a 64-bit integer seed for the sub-stream (role, *counters) of `seed`
    """
    state = _sequence(seed, role, counters).generate_state(1, dtype=np.uint64)
    return int(state[0])


def generator(seed: int, role: StreamRole, *counters: int) -> np.random.Generator:
    """
    Counter-based generator (Philox) for the sub-stream (role, *counters) of `seed`
    """
    return np.random.Generator(np.random.Philox(_sequence(seed, role, counters)))
