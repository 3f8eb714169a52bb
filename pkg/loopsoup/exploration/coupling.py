"""
Coupling of the on-the-fly exploration with the simple exploration.

Both walkers consume one ring stream. They agree until the simple exploration
first accepts a ring on a vertex it has already visited (the failure time ρ);
the actual divergence of the event sequences can only happen at ρ or later.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from loopsoup.core.errors import ParameterError
from loopsoup.core.rng import SeedLike
from loopsoup.exploration.onfly import RingStream, explore_onfly, simple_explore
from loopsoup.exploration.trajectory import Event, EventKind, Trajectory
from loopsoup.utils.logging import get_logger

logger = get_logger(__name__)

_TIME_TOL = 1e-9


@dataclass(frozen=True)
class CouplingOutcome:
    held: bool
    horizon: float
    tau_y: float
    rho: Optional[float]
    divergence: Optional[float]
    jumps: int
    bound: float


def coupling_bound(n: int, beta: float, T: float, jumps: int = 1) -> float:
    """4βT(J + βT)/n with J at least 1."""
    return 4.0 * beta * T * (max(jumps, 1) + beta * T) / n


def _failure_time(traj: Trajectory, horizon: float) -> Optional[float]:
    seen = {traj.start.vertex}
    for ev in traj.events:
        if ev.t >= horizon:
            break
        if ev.kind is EventKind.JUMP:
            if ev.vertex in seen:
                return ev.t
            seen.add(ev.vertex)
    return None


def _same(a: Event, b: Event) -> bool:
    return (
        a.kind is b.kind
        and a.vertex == b.vertex
        and a.direction == b.direction
        and math.isclose(a.t, b.t, rel_tol=0.0, abs_tol=_TIME_TOL)
        and math.isclose(a.phase, b.phase, rel_tol=0.0, abs_tol=_TIME_TOL)
    )


def first_divergence(x: Trajectory, y: Trajectory, horizon: float) -> Optional[float]:
    """Earliest event time before ``horizon`` where the two event sequences differ."""
    xs = [ev for ev in x.events if ev.t < horizon]
    ys = [ev for ev in y.events if ev.t < horizon]
    for a, b in zip(xs, ys):
        if not _same(a, b):
            return min(a.t, b.t)
    if len(xs) != len(ys):
        longer = xs if len(xs) > len(ys) else ys
        return longer[min(len(xs), len(ys))].t
    return None


def coupled_run(n: int, beta: float, nu: float, seed: SeedLike, T: float) -> CouplingOutcome:
    if not T > 0:
        raise ParameterError(f"coupling horizon must be positive, got {T}")
    rings = RingStream(n, beta, nu, seed)
    y, y_stats, _ = simple_explore(n, beta, nu, seed, T, rings=rings)
    x, _ = explore_onfly(n, beta, nu, seed, t_max=T, rings=rings)

    horizon = min(y_stats.tau, T)
    rho = _failure_time(y, horizon)
    divergence = first_divergence(x, y, horizon)
    outcome = CouplingOutcome(
        held=divergence is None,
        horizon=horizon,
        tau_y=y_stats.tau,
        rho=rho,
        divergence=divergence,
        jumps=y_stats.J,
        bound=coupling_bound(n, beta, T),
    )
    if divergence is not None and (rho is None or divergence < rho - _TIME_TOL):
        logger.warning("coupling.early_divergence", rho=rho, divergence=divergence)
    logger.debug("coupling.done", held=outcome.held, rho=rho, divergence=divergence)
    return outcome
