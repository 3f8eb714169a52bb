"""
Explorations that reveal a fresh Poisson configuration as they go.

Both walkers read the same kind of ring stream: a Poisson process of rate
nβ/(n−1) whose points carry a uniform vertex and a mark (cross with
probability ν). A ring proposes a link from the walker's current point to the
same phase on the rung vertex.

* ``explore_onfly`` cancels a proposal when the target point was already
  visited or is the current vertex, and crosses every discovered link again
  when it reaches one of its endpoints.
* ``simple_explore`` sends every accepted proposal to a fresh copy of the
  target circle, labelled by the ring index, and only crosses a link back when
  it returns to the point where it arrived.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from loopsoup.core.errors import ParameterError
from loopsoup.core.rng import SeedLike, make_rng
from loopsoup.exploration.trajectory import (
    Event,
    EventKind,
    ExplorationPoint,
    Trajectory,
    TrajStats,
    ZPath,
)
from loopsoup.utils.logging import get_logger

logger = get_logger(__name__)

_BLOCK = 256


def _check_params(n: int, beta: float, nu: float, t_max: float) -> None:
    if n < 2:
        raise ParameterError(f"need at least two vertices, got n={n}")
    if not beta > 0:
        raise ParameterError(f"beta must be positive, got {beta}")
    if not 0.0 <= nu <= 1.0:
        raise ParameterError(f"nu must lie in [0, 1], got {nu}")
    if t_max < 0:
        raise ParameterError(f"t_max must be non-negative, got {t_max}")


def _ahead(target: float, phase: float, d: int) -> float:
    """Distance from ``phase`` to ``target`` moving in direction ``d``; a full lap if equal."""
    return ((target - phase) * d) % 1.0 or 1.0


def _level_ahead(phase: float, d: int) -> float:
    if phase == 0.0:
        return 1.0
    return 1.0 - phase if d > 0 else phase


def _moved(phase: float, d: int, dist: float) -> float:
    return (phase + d * dist) % 1.0


class RingStream:
    """Lazily generated rings (time, vertex, cross) shared by coupled walkers."""

    def __init__(self, n: int, beta: float, nu: float, seed: SeedLike):
        self.n = n
        self.rate = n * beta / (n - 1)
        self.nu = nu
        self._rng = make_rng(seed)
        self._times: list[float] = []
        self._vertices: list[int] = []
        self._cross: list[bool] = []

    def _extend(self) -> None:
        gaps = self._rng.exponential(1.0 / self.rate, _BLOCK)
        vertices = self._rng.integers(1, self.n + 1, _BLOCK)
        cross = self._rng.random(_BLOCK) < self.nu
        base = self._times[-1] if self._times else 0.0
        self._times.extend((base + np.cumsum(gaps)).tolist())
        self._vertices.extend(vertices.tolist())
        self._cross.extend(cross.tolist())

    def __getitem__(self, i: int) -> tuple[float, int, bool]:
        while i >= len(self._times):
            self._extend()
        return self._times[i], self._vertices[i], self._cross[i]


def _start_point(n: int, start: Optional[tuple[int, float, int]]) -> tuple[int, float, int]:
    v0, phi0, d0 = start if start is not None else (1, 0.0, 1)
    ExplorationPoint(v0, phi0, d0)
    if not 1 <= v0 <= n:
        raise ParameterError(f"start vertex {v0} outside 1..{n}")
    if not 0.0 <= phi0 < 1.0:
        raise ParameterError(f"start phase {phi0!r} outside [0, 1)")
    return v0, phi0, d0


# =============================================================================
# History of the on-the-fly exploration
# =============================================================================


def _merge_in(arcs: list[tuple[float, float]], lo: float, hi: float) -> None:
    """Insert [lo, hi] into a sorted list of disjoint closed arcs, merging overlaps."""
    i = bisect_left(arcs, (lo, -math.inf))
    if i > 0 and arcs[i - 1][1] >= lo:
        i -= 1
        lo = arcs[i][0]
    j = i
    while j < len(arcs) and arcs[j][0] <= hi:
        hi = max(hi, arcs[j][1])
        j += 1
    arcs[i:j] = [(lo, hi)]


@dataclass
class _History:
    """Visited arcs and discovered link endpoints, per vertex."""

    arcs: dict[int, list[tuple[float, float]]] = field(default_factory=dict)
    ends: dict[int, list[tuple[float, int]]] = field(default_factory=dict)

    def add_arc(self, v: int, phase: float, d: int, dist: float) -> None:
        lo = phase if d > 0 else phase - dist
        hi = lo + dist
        arcs = self.arcs.setdefault(v, [])
        if lo < 0.0:
            _merge_in(arcs, lo + 1.0, 1.0)
            _merge_in(arcs, 0.0, hi)
        elif hi > 1.0:
            _merge_in(arcs, lo, 1.0)
            _merge_in(arcs, 0.0, hi - 1.0)
        else:
            _merge_in(arcs, lo, hi)

    def visited(self, v: int, phase: float) -> bool:
        arcs = self.arcs.get(v)
        if not arcs:
            return False
        i = bisect_right(arcs, (phase, math.inf)) - 1
        return i >= 0 and arcs[i][0] <= phase <= arcs[i][1]

    def add_end(self, v: int, phase: float, link: int) -> None:
        insort(self.ends.setdefault(v, []), (phase, link))

    def next_end(self, v: int, phase: float, d: int) -> tuple[float, int]:
        """Nearest discovered endpoint strictly ahead (a full lap for the one at ``phase``)."""
        ends = self.ends.get(v)
        if not ends:
            return math.inf, -1
        if d > 0:
            i = bisect_right(ends, (phase, math.inf)) % len(ends)
        else:
            i = bisect_left(ends, (phase, -1)) - 1
        target, link = ends[i]
        return _ahead(target, phase, d), link


def explore_onfly(
    n: int,
    beta: float,
    nu: float,
    seed: SeedLike,
    start: Optional[tuple[int, float, int]] = None,
    t_max: float = 100.0,
    rings: Optional[RingStream] = None,
) -> tuple[Trajectory, TrajStats]:
    _check_params(n, beta, nu, t_max)
    v0, phi0, d0 = _start_point(n, start)
    rings = rings if rings is not None else RingStream(n, beta, nu, seed)

    traj = Trajectory(ExplorationPoint(v0, phi0, d0))
    history = _History()
    links: list[tuple[int, int, int, float]] = []  # (a, b, mark sign, phase)
    t, L = 0.0, 0.0
    J = I = K = B = 0
    if phi0 == 0.0:
        K, B = 1, d0
    v, phase, d = v0, phi0, d0
    ring = 0

    while True:
        end_dist, end_link = history.next_end(v, phase, d)
        level_dist = _level_ahead(phase, d)
        close_dist = _ahead(phi0, phase, d) if (v == v0 and d == d0) else math.inf
        ring_t, ring_v, ring_cross = rings[ring]
        ring_dist = ring_t - t
        dist = min(end_dist, level_dist, close_dist, ring_dist)

        if t + dist > t_max:
            history.add_arc(v, phase, d, t_max - t)
            L += d * (t_max - t)
            t = t_max
            break
        history.add_arc(v, phase, d, dist)
        t += dist
        L += d * dist
        phase = _moved(phase, d, dist)

        if dist == close_dist:
            phase = phi0
            traj.closed = True
            traj.events.append(Event(t, EventKind.CLOSE, v, phase, d, -1, J, I, K, L, B))
            break
        if dist == end_dist:
            a, b, sign, phase = links[end_link]
            v = b if v == a else a
            d *= sign
            I += 1
            traj.events.append(Event(t, EventKind.BACKTRACK, v, phase, d, -1, J, I, K, L, B))
            continue
        if dist == level_dist:
            phase = 0.0
            K += 1
            B += d
            traj.events.append(Event(t, EventKind.LEVEL0, v, phase, d, -1, J, I, K, L, B))
            continue

        # ring
        ring += 1
        if ring_v == v or history.visited(ring_v, phase):
            continue
        sign = 1 if ring_cross else -1
        link = len(links)
        links.append((v, ring_v, sign, phase))
        history.add_end(v, phase, link)
        history.add_end(ring_v, phase, link)
        v = ring_v
        d *= sign
        J += 1
        I += 1
        traj.events.append(Event(t, EventKind.JUMP, v, phase, d, -1, J, I, K, L, B))

    traj.t_end = t
    logger.debug("exploration.onfly", closed=traj.closed, t_end=t, J=J, I=I)
    return traj, traj.stats(J, I, K, L, B)


# =============================================================================
# Simple exploration
# =============================================================================


def simple_explore(
    n: int,
    beta: float,
    nu: float,
    seed: SeedLike,
    t_max: float,
    start: Optional[tuple[int, float, int]] = None,
    rings: Optional[RingStream] = None,
) -> tuple[Trajectory, TrajStats, ZPath]:
    """
    Simple exploration on [0, t_max]. After closure the discovery process is
    continued to ``t_max`` by the rings on vertices other than the closing
    vertex, a rate β Poisson process independent of the past.
    """
    _check_params(n, beta, nu, t_max)
    v0, phi0, d0 = _start_point(n, start)
    rings = rings if rings is not None else RingStream(n, beta, nu, seed)

    traj = Trajectory(ExplorationPoint(v0, phi0, d0, circle=0))
    t, L = 0.0, 0.0
    J = I = K = B = 0
    if phi0 == 0.0:
        K, B = 1, d0
    circle, v, phase, d = 0, v0, phi0, d0
    entry = phi0
    # parent frames: (circle, vertex, entry phase of that circle, mark sign)
    stack: list[tuple[int, int, float, int]] = []
    coverage = traj.coverage
    coverage[0] = 0.0
    jump_times: list[float] = []
    ring = 0

    while True:
        entry_dist = _ahead(entry, phase, d)
        level_dist = _level_ahead(phase, d)
        ring_t, ring_v, ring_cross = rings[ring]
        ring_dist = ring_t - t
        dist = min(entry_dist, level_dist, ring_dist)

        if t + dist > t_max:
            coverage[circle] += t_max - t
            L += d * (t_max - t)
            t = t_max
            break
        coverage[circle] += dist
        t += dist
        L += d * dist
        phase = _moved(phase, d, dist)

        if dist == entry_dist:
            phase = entry
            if not stack:
                traj.closed = True
                traj.events.append(Event(t, EventKind.CLOSE, v, phase, d, circle, J, I, K, L, B))
                break
            circle, v, entry, sign = stack.pop()
            d *= sign
            I += 1
            traj.events.append(Event(t, EventKind.BACKTRACK, v, phase, d, circle, J, I, K, L, B))
            continue
        if dist == level_dist:
            phase = 0.0
            K += 1
            B += d
            traj.events.append(Event(t, EventKind.LEVEL0, v, phase, d, circle, J, I, K, L, B))
            continue

        ring += 1
        if ring_v == v:
            continue
        sign = 1 if ring_cross else -1
        stack.append((circle, v, entry, sign))
        circle, v, entry = ring, ring_v, phase
        coverage[circle] = 0.0
        d *= sign
        J += 1
        I += 1
        jump_times.append(t)
        traj.events.append(Event(t, EventKind.JUMP, v, phase, d, circle, J, I, K, L, B))

    traj.t_end = t
    if traj.closed:
        while True:
            ring_t, ring_v, _ = rings[ring]
            if ring_t > t_max:
                break
            ring += 1
            if ring_v != v:
                jump_times.append(ring_t)
    zpath = ZPath(tuple(jump_times), float(t_max))
    logger.debug("exploration.simple", closed=traj.closed, t_end=t, J=J)
    return traj, traj.stats(J, I, K, L, B), zpath
