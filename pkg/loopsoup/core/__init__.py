"""
Core services: settings, errors and random streams.
"""

from loopsoup.core.errors import (
    FormatError,
    InvalidStartError,
    LoopsoupError,
    OracleMismatchError,
    ParameterError,
    PhaseCollisionError,
    TrajectoryTooShortError,
    UnknownVertexError,
)
from loopsoup.core.rng import SeedLike, derive_seed, make_rng, replica_rng
from loopsoup.core.settings import Settings, get_settings

__all__ = [
    "FormatError",
    "InvalidStartError",
    "LoopsoupError",
    "OracleMismatchError",
    "ParameterError",
    "PhaseCollisionError",
    "TrajectoryTooShortError",
    "UnknownVertexError",
    "SeedLike",
    "derive_seed",
    "make_rng",
    "replica_rng",
    "Settings",
    "get_settings",
]
