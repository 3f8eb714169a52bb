"""
Loop tracer
Follow the loops of a finite configuration directly and read the cycles off
level 0. Slow but obviously correct; the reference for ``cycles.build``.

A loop moves along the circle of its current vertex. At a link it jumps to the
other endpoint, keeping its direction at a cross and reversing it at a bar.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Optional

from loopsoup.configuration import Configuration, Mark
from loopsoup.core.errors import ParameterError, PhaseCollisionError
from loopsoup.cycles import CycleSet, get_backend
from loopsoup.utils.logging import get_logger

logger = get_logger(__name__)

LEVEL = -1
BELOW, ABOVE = 0, 1


class CircleIndex:
    """
    Per-vertex sorted event lists of a configuration.

    Slot 0 of every circle is the level-0 point; the other slots are link
    endpoints in increasing phase.
    """

    def __init__(self, cfg: Configuration):
        seen: set[float] = set()
        for link in cfg.links:
            if link.phase == 0.0:
                raise ParameterError("a link at phase 0 coincides with the level line")
            if link.phase in seen:
                raise PhaseCollisionError(f"two links share phase {link.phase!r}")
            seen.add(link.phase)
        self.cfg = cfg
        per_vertex: list[list[tuple[float, int]]] = [[] for _ in range(cfg.n + 1)]
        for li, link in enumerate(cfg.links):
            per_vertex[link.u].append((link.phase, li))
            per_vertex[link.v].append((link.phase, li))
        self.phases: list[list[float]] = []
        self.links: list[list[int]] = []
        self.slot: dict[tuple[int, int], int] = {}
        for v, items in enumerate(per_vertex):
            items.sort()
            self.phases.append([0.0] + [ph for ph, _ in items])
            self.links.append([LEVEL] + [li for _, li in items])
            for i, (_, li) in enumerate(items, start=1):
                self.slot[(li, v)] = i

    def step(self, v: int, idx: int, d: int) -> tuple[int, float]:
        """Next slot from ``idx`` moving in direction ``d`` and the distance to it."""
        phases = self.phases[v]
        m = len(phases)
        if m == 1:
            return 0, 1.0
        nxt = (idx + d) % m
        return nxt, ((phases[nxt] - phases[idx]) * d) % 1.0

    def cross(self, li: int, v: int, d: int) -> tuple[int, int, int]:
        """Traverse link ``li`` arriving at ``v`` in direction ``d``: (w, slot, new d)."""
        link = self.cfg.links[li]
        w = link.v if link.u == v else link.u
        new_d = d if link.mark is Mark.CROSS else -d
        return w, self.slot[(li, w)], new_d

    def next_slot(self, v: int, phase: float, d: int) -> tuple[int, float]:
        """
        First slot strictly ahead of ``phase`` on ``v`` in direction ``d``, with
        its distance. ``phase`` must not coincide with a slot.
        """
        phases = self.phases[v]
        m = len(phases)
        i = bisect_left(phases, phase)
        if d > 0:
            nxt = i % m
        else:
            nxt = (i - 1) % m
        return nxt, ((phases[nxt] - phase) * d) % 1.0

    def slot_at(self, v: int, phase: float) -> Optional[int]:
        phases = self.phases[v]
        i = bisect_left(phases, phase)
        if i < len(phases) and phases[i] == phase:
            return i
        return None


@dataclass
class Loop:
    """One closed loop: its length and the points where it met links or level 0."""

    length: float
    visits: list[tuple[int, float, int]] = field(default_factory=list)
    links_used: list[int] = field(default_factory=list)

    @property
    def level_visits(self) -> list[tuple[int, int]]:
        return [(v, d) for v, ph, d in self.visits if ph == 0.0]


def _trace_from(
    index: CircleIndex,
    start: tuple[int, int, int],
    consumed: set[tuple[int, int, int]],
    level_done: list[bool],
) -> Loop:
    loop = Loop(0.0)
    state = start
    while True:
        v, idx, d = state
        li = index.links[v][idx]
        if li == LEVEL:
            level_done[v] = True
            loop.visits.append((v, 0.0, d))
            cur_v, cur_idx, cur_d = v, idx, d
        else:
            consumed.add((li, v, BELOW if d > 0 else ABOVE))
            loop.visits.append((v, index.phases[v][idx], d))
            loop.links_used.append(li)
            cur_v, cur_idx, cur_d = index.cross(li, v, d)
            consumed.add((li, cur_v, ABOVE if cur_d > 0 else BELOW))
        nxt, dist = index.step(cur_v, cur_idx, cur_d)
        loop.length += dist
        state = (cur_v, nxt, cur_d)
        if state == start:
            return loop


def trace(cfg: Configuration) -> list[Loop]:
    """
    All loops of ``cfg``. Loops through level 0 come first, one per unvisited
    vertex in increasing order, each started at (v, 0) moving up; the loops
    that never reach level 0 follow.
    """
    index = CircleIndex(cfg)
    consumed: set[tuple[int, int, int]] = set()
    level_done = [False] * (cfg.n + 1)
    loops: list[Loop] = []
    for v in range(1, cfg.n + 1):
        if not level_done[v]:
            loops.append(_trace_from(index, (v, 0, 1), consumed, level_done))
    for li, link in enumerate(cfg.links):
        for side in (link.u, link.v):
            for half, d in ((BELOW, 1), (ABOVE, -1)):
                if (li, side, half) not in consumed:
                    start = (side, index.slot[(li, side)], d)
                    loops.append(_trace_from(index, start, consumed, level_done))
    logger.debug("tracer.traced", n=cfg.n, links=len(cfg), loops=len(loops))
    return loops


def cycles_at_zero(cfg: Configuration, backend: str = "naive") -> CycleSet:
    """
    Cycles read at level 0. Each loop's level visits are listed in backward
    traversal order with their forward directions.
    """
    cycles = []
    for loop in trace(cfg):
        forward = loop.level_visits
        if not forward:
            continue
        cycles.append([forward[0]] + forward[:0:-1])
    return get_backend(backend).from_cycles(cfg.n, cycles)


def dump_loops(loops: list[Loop]) -> str:
    lines = []
    for i, loop in enumerate(loops):
        lines.append(f"loop {i} length {loop.length:.17g}")
        for v, ph, d in loop.visits:
            kind = "level0" if ph == 0.0 else "link"
            lines.append(f"  {kind} {v} {ph:.17g} {'+' if d > 0 else '-'}")
    return "\n".join(lines) + "\n"
