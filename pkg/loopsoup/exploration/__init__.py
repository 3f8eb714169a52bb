"""Exploration processes X and Y and their trajectory statistics."""

from loopsoup.exploration.coupling import (
    CouplingOutcome,
    coupled_run,
    coupling_bound,
    first_divergence,
)
from loopsoup.exploration.fixed import explore
from loopsoup.exploration.frontier import frontier_decompose, record_minima, solve_z
from loopsoup.exploration.onfly import RingStream, explore_onfly, simple_explore
from loopsoup.exploration.trajectory import (
    Event,
    EventKind,
    ExplorationPoint,
    FrontierDecomposition,
    Trajectory,
    TrajStats,
    ZPath,
    check_invariants,
    winding_sup,
)

__all__ = [
    "CouplingOutcome",
    "Event",
    "EventKind",
    "ExplorationPoint",
    "FrontierDecomposition",
    "RingStream",
    "Trajectory",
    "TrajStats",
    "ZPath",
    "check_invariants",
    "coupled_run",
    "coupling_bound",
    "explore",
    "explore_onfly",
    "first_divergence",
    "frontier_decompose",
    "record_minima",
    "simple_explore",
    "solve_z",
    "winding_sup",
]
