"""
Exploration of a fixed configuration.

The walker follows the loop through its start point until it returns there
(the loop length) or until ``t_max``.
"""

from __future__ import annotations

import math

from loopsoup.configuration import Configuration
from loopsoup.core.errors import InvalidStartError, ParameterError
from loopsoup.exploration.trajectory import (
    Event,
    EventKind,
    ExplorationPoint,
    Trajectory,
    TrajStats,
)
from loopsoup.tracer import LEVEL, CircleIndex
from loopsoup.utils.logging import get_logger

logger = get_logger(__name__)


def _validate_start(n: int, v0: int, phi0: float, d0: int, t_max: float) -> None:
    if not 1 <= v0 <= n:
        raise InvalidStartError(f"start vertex {v0} outside 1..{n}")
    if d0 not in (-1, 1):
        raise InvalidStartError(f"start direction must be ±1, got {d0}")
    if not 0.0 <= phi0 < 1.0:
        raise InvalidStartError(f"start phase {phi0!r} outside [0, 1)")
    if t_max < 0:
        raise ParameterError(f"t_max must be non-negative, got {t_max}")


def explore(
    cfg: Configuration,
    v0: int,
    phi0: float,
    d0: int,
    t_max: float,
) -> tuple[Trajectory, TrajStats]:
    _validate_start(cfg.n, v0, phi0, d0, t_max)
    index = CircleIndex(cfg)
    slot = index.slot_at(v0, phi0)
    if slot is not None and slot != 0:
        raise InvalidStartError(f"start point ({v0}, {phi0!r}) lies on a link")

    traj = Trajectory(ExplorationPoint(v0, phi0, d0))
    on_level = phi0 == 0.0
    t, L = 0.0, 0.0
    J = I = K = B = 0
    if on_level:
        K, B = 1, d0
    v, d, phase = v0, d0, phi0
    traversed: set[int] = set()

    while True:
        if slot is None:
            nxt, dist = index.next_slot(v, phase, d)
        else:
            nxt, dist = index.step(v, slot, d)
        closing = False
        if not on_level and v == v0 and d == d0:
            back = ((phi0 - phase) * d) % 1.0 or 1.0
            if back < dist:
                dist, closing = back, True

        if t + dist > t_max:
            L += d * (t_max - t)
            t = t_max
            break
        t += dist
        L += d * dist

        if closing:
            phase = phi0
            traj.closed = True
            traj.events.append(Event(t, EventKind.CLOSE, v, phase, d, -1, J, I, K, L, B))
            break

        slot = nxt
        phase = index.phases[v][slot]
        li = index.links[v][slot]
        if li == LEVEL:
            if on_level and v == v0 and d == d0:
                traj.closed = True
                traj.events.append(Event(t, EventKind.CLOSE, v, phase, d, -1, J, I, K, L, B))
                break
            K += 1
            B += d
            traj.events.append(Event(t, EventKind.LEVEL0, v, phase, d, -1, J, I, K, L, B))
            continue

        v, slot, d = index.cross(li, v, d)
        I += 1
        if li in traversed:
            kind = EventKind.BACKTRACK
        else:
            kind = EventKind.JUMP
            traversed.add(li)
            J += 1
        traj.events.append(Event(t, kind, v, phase, d, -1, J, I, K, L, B))

    traj.t_end = t
    logger.debug("exploration.fixed", tau=traj.tau if not math.isinf(traj.tau) else None, J=J, I=I)
    return traj, traj.stats(J, I, K, L, B)
