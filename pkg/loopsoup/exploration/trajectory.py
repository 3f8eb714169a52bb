"""
Trajectory records shared by all exploration variants.

Every event stores the running counters after it happened, so the
deterministic bounds can be checked at each event time:

    J  links discovered          I  link traversals, backtracks included
    K  visits to level 0         L  winding, the integral of the direction
    B  signed level-0 visits
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from loopsoup.core.errors import InvalidStartError, TrajectoryTooShortError

WINDING_SLACK = 3.0
_EPS = 1e-9


class EventKind(str, Enum):
    JUMP = "jump"
    BACKTRACK = "backtrack"
    LEVEL0 = "level0"
    CLOSE = "close"


@dataclass(frozen=True)
class ExplorationPoint:
    vertex: int
    phase: float
    direction: int
    circle: int = -1

    def __post_init__(self) -> None:
        if self.direction not in (-1, 1):
            raise InvalidStartError(f"direction must be ±1, got {self.direction}")


@dataclass(slots=True)
class Event:
    t: float
    kind: EventKind
    vertex: int
    phase: float
    direction: int
    circle: int
    J: int
    I: int
    K: int
    L: float
    B: int

    def payload(self) -> str:
        circle = f" circle={self.circle}" if self.circle >= 0 else ""
        return (
            f"v={self.vertex} phase={self.phase:.17g} d={self.direction:+d}{circle} "
            f"J={self.J} I={self.I} K={self.K} L={self.L:.12g} B={self.B}"
        )


@dataclass(frozen=True)
class TrajStats:
    tau: float
    J: int
    I: int
    K: int
    L: float
    B: int
    t_end: float

    @property
    def censored(self) -> bool:
        return math.isinf(self.tau)


@dataclass
class Trajectory:
    start: ExplorationPoint
    events: list[Event] = field(default_factory=list)
    t_end: float = 0.0
    closed: bool = False
    # per-circle distance walked; filled by the simple exploration only
    coverage: dict[int, float] = field(default_factory=dict)

    @property
    def tau(self) -> float:
        return self.t_end if self.closed else math.inf

    def stats(self, J: int, I: int, K: int, L: float, B: int) -> TrajStats:
        return TrajStats(self.tau, J, I, K, L, B, self.t_end)

    def level_balance(self, k: int) -> Optional[int]:
        """B after the first ``k`` level-0 visits, the start included when it lies on level 0."""
        count = 0
        balance = 0
        if self.start.phase == 0.0:
            count, balance = 1, self.start.direction
        if count >= k:
            return balance
        for ev in self.events:
            if ev.kind is EventKind.LEVEL0:
                count += 1
                balance = ev.B
                if count >= k:
                    return balance
        return None

    def dump(self) -> str:
        return "".join(f"{ev.t:.17g} {ev.kind.value} {ev.payload()}\n" for ev in self.events)


def winding_sup(traj: Trajectory, T: float) -> float:
    """sup over t ≤ T of |L_t|; L is piecewise linear with kinks only at events."""
    if T > traj.t_end + _EPS:
        raise TrajectoryTooShortError(T, traj.t_end, censored=not traj.closed)
    best = 0.0
    last_t, last_L, last_d = 0.0, 0.0, traj.start.direction
    for ev in traj.events:
        if ev.t > T:
            break
        best = max(best, abs(ev.L))
        last_t, last_L, last_d = ev.t, ev.L, ev.direction
    return max(best, abs(last_L + last_d * (T - last_t)))


def check_invariants(traj: Trajectory) -> list[str]:
    """Violations of the counter bounds at the recorded event times."""
    problems = []
    for ev in traj.events:
        if ev.K > ev.t + ev.I + 1 + _EPS:
            problems.append(f"t={ev.t:.6g}: K={ev.K} exceeds t+I+1")
        if not ev.J <= ev.I <= 2 * ev.J:
            problems.append(f"t={ev.t:.6g}: J={ev.J}, I={ev.I} break J ≤ I ≤ 2J")
        if abs(abs(ev.B) - abs(ev.L)) > WINDING_SLACK + _EPS:
            problems.append(f"t={ev.t:.6g}: |B|={abs(ev.B)} and |L|={abs(ev.L):.6g} differ by more than 3")
    return problems


# =============================================================================
# Z process
# =============================================================================


@dataclass(frozen=True)
class ZPath:
    """Z_t = (number of discovery times ≤ t) − t on [0, horizon]."""

    jump_times: tuple[float, ...]
    horizon: float

    def value(self, t: float) -> float:
        return bisect_right(self.jump_times, t) - t

    def pre_jump_values(self) -> list[float]:
        """Z_{τ_j−} = (j − 1) − τ_j for j = 1, 2, …"""
        return [j - tj for j, tj in enumerate(self.jump_times)]

    def first_hit(self, level: int = -1) -> Optional[float]:
        """First t ≤ horizon with Z_t = level (level ≤ −1), or None."""
        for k, tj in enumerate(self.jump_times):
            candidate = k - level
            if candidate <= tj:
                return float(candidate) if candidate <= self.horizon else None
        candidate = len(self.jump_times) - level
        return float(candidate) if candidate <= self.horizon else None


@dataclass(frozen=True)
class FrontierDecomposition:
    record_minima: tuple[float, ...]
    frontier_times: tuple[float, ...]
    gaps: tuple[float, ...]
    horizon: float
    censored: bool = True
