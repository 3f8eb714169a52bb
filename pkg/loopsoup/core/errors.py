"""
Error hierarchy
تسلسل الأخطاء
"""

from pathlib import Path
from typing import Optional


class LoopsoupError(Exception):
    """Base class for every error raised by the package."""

    error_code = "loopsoup_error"


class ParameterError(LoopsoupError, ValueError):
    """A parameter lies outside its documented range."""

    error_code = "invalid_parameter"


class PhaseCollisionError(ParameterError):
    """Two links share a phase, so the phase order is undefined."""

    error_code = "phase_collision"


class UnknownVertexError(LoopsoupError, KeyError):
    """A vertex does not belong to the cycle set."""

    error_code = "unknown_vertex"

    def __init__(self, vertex: int):
        super().__init__(vertex)
        self.vertex = vertex

    def __str__(self) -> str:
        return f"unknown vertex {self.vertex}"


class InvalidStartError(ParameterError):
    """An exploration start point is not a regular point of the configuration."""

    error_code = "invalid_start"


class TrajectoryTooShortError(LoopsoupError):
    """A statistic was requested beyond the recorded part of a trajectory."""

    error_code = "trajectory_too_short"

    def __init__(self, requested: float, horizon: float, censored: bool):
        super().__init__(
            f"trajectory recorded up to t={horizon:g} (censored={censored}), "
            f"requested t={requested:g}"
        )
        self.requested = requested
        self.horizon = horizon
        self.censored = censored


class FormatError(LoopsoupError, ValueError):
    """A text dump could not be parsed."""

    error_code = "format_error"


class OracleMismatchError(LoopsoupError):
    """Incremental cycle build disagrees with the loop tracer."""

    error_code = "oracle_mismatch"

    def __init__(self, message: str, counterexample: Optional[Path] = None, dump: str = ""):
        super().__init__(message)
        self.counterexample = counterexample
        self.dump = dump
