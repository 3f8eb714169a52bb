"""
Oriented cycle structure of a link sequence.

Two interchangeable backends share one set of insertion rules:
``naive`` (a list per cycle) and ``treap`` (balanced sequences with lazy
reversal, for n in the hundreds of thousands).
"""

from __future__ import annotations

from collections.abc import Iterable

from loopsoup.configuration import Mark, OrderedLinks
from loopsoup.core.errors import ParameterError
from loopsoup.cycles.base import (
    DOWN,
    UP,
    Cycle,
    CycleSet,
    Direction,
    EventKind,
    LinkEvent,
    canonical,
)
from loopsoup.cycles.naive import NaiveCycleSet
from loopsoup.cycles.stats import (
    balance,
    dump_cycles,
    large_component_vertices,
    large_cycle_vertices,
    parse_cycle,
    rescaled_sizes,
    segment_partition,
)
from loopsoup.cycles.treap import TreapCycleSet
from loopsoup.utils.logging import get_logger

logger = get_logger(__name__)

BACKENDS: dict[str, type[CycleSet]] = {
    "naive": NaiveCycleSet,
    "treap": TreapCycleSet,
}


def get_backend(name: str) -> type[CycleSet]:
    try:
        return BACKENDS[name]
    except KeyError:
        raise ParameterError(f"unknown cycle backend {name!r}; choose from {sorted(BACKENDS)}") from None


def singleton_cycles(n: int, backend: str = "treap") -> CycleSet:
    """n fixed points (v, Up)."""
    return get_backend(backend)(n)


def apply_link(cs: CycleSet, edge: tuple[int, int], mark: Mark) -> tuple[CycleSet, LinkEvent]:
    """Insert one link into ``cs`` in place."""
    u, w = edge
    event = cs.apply(u, w, mark)
    return cs, event


def build(
    ordered: OrderedLinks,
    backend: str = "treap",
    events: list[LinkEvent] | None = None,
) -> CycleSet:
    """Left fold of ``apply_link`` from the singletons; events are appended to ``events``."""
    cs = singleton_cycles(ordered.n, backend)
    for u, w, mark in ordered:
        event = cs.apply(u, w, mark)
        if events is not None:
            events.append(event)
    logger.debug("cycles.built", n=ordered.n, links=len(ordered), cycles=cs.cycle_count)
    return cs


def canonical_multiset(cycles: Iterable[Cycle]) -> list[tuple[tuple[int, int], ...]]:
    return sorted(tuple((v, int(d)) for v, d in canonical(c).seq) for c in cycles)


__all__ = [
    "DOWN",
    "UP",
    "BACKENDS",
    "Cycle",
    "CycleSet",
    "Direction",
    "EventKind",
    "LinkEvent",
    "NaiveCycleSet",
    "TreapCycleSet",
    "apply_link",
    "balance",
    "build",
    "canonical",
    "canonical_multiset",
    "dump_cycles",
    "get_backend",
    "large_component_vertices",
    "large_cycle_vertices",
    "parse_cycle",
    "rescaled_sizes",
    "segment_partition",
    "singleton_cycles",
]
