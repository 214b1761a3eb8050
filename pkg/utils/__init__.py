# Shared errors and seeded random streams
from .exceptions import (
    FlowError,
    InvalidArgumentError,
    UnsupportedRegimeError,
    PreconditionError,
    DatasetParseError,
    ConfigError,
    NumericError,
)
from .rng import StreamRole, derive_seed, generator

__all__ = [
    "FlowError",
    "InvalidArgumentError",
    "UnsupportedRegimeError",
    "PreconditionError",
    "DatasetParseError",
    "ConfigError",
    "NumericError",
    "StreamRole",
    "derive_seed",
    "generator",
]
