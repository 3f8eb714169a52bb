"""
Cycle statistics: rescaled sizes, segment balance, segments and text dumps.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from typing import Optional, Union

from loopsoup.core.errors import FormatError, ParameterError
from loopsoup.cycles.base import Cycle, CycleSet, Direction, canonical
from loopsoup.utils.unionfind import UnionFind


def rescaled_sizes(
    cs: Union[CycleSet, Iterable[int]],
    denom: int,
    within: Optional[set[int]] = None,
) -> list[float]:
    """
    Cycle sizes divided by ``denom``, largest first.

    With ``within`` given, only cycles whose vertices lie in that set are kept
    (a cycle never leaves the connected component of its vertices, so one
    representative decides).
    """
    if denom <= 0:
        raise ParameterError(f"denominator must be positive, got {denom}")
    if isinstance(cs, CycleSet):
        reps = cs.representatives()
        sizes = [size for v, size in reps if within is None or v in within]
    else:
        sizes = list(cs)
    return sorted((s / denom for s in sizes), reverse=True)


def balance(cs: CycleSet, v: int, k: int) -> int:
    """#Up − #Down among the first k entries of C(v), oriented so ``v`` is first and Up."""
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    same, inspected = cs.same_orientation_count(v, k)
    return 2 * same - inspected


def segment_partition(c: Cycle, n: int) -> list[tuple[int, ...]]:
    """
    Consecutive runs of the canonical listing of ``c``.

    Chunks have size ⌊√n⌋; a final remainder shorter than that joins the last
    chunk, so every segment has between ⌊√n⌋ and 2⌊√n⌋ vertices. Cycles shorter
    than ⌊√n⌋ form one segment.
    """
    width = max(1, math.isqrt(n))
    vertices = canonical(c).vertices
    if len(vertices) < width:
        return [vertices]
    chunks = len(vertices) // width
    segments = [vertices[i * width : (i + 1) * width] for i in range(chunks - 1)]
    segments.append(vertices[(chunks - 1) * width :])
    return segments


def large_component_vertices(n: int, edges: Iterable[tuple[int, int]], k: int) -> set[int]:
    """Vertices in connected components of at least ``k`` vertices of the link-support graph."""
    return UnionFind(n).union_edges(edges).vertices_in_components_at_least(k)


def large_cycle_vertices(cs: CycleSet, k: int) -> set[int]:
    """Vertices whose cycle has at least ``k`` vertices."""
    out: set[int] = set()
    for cid in cs.cycle_ids():
        seq = cs.listing(cid)
        if len(seq) >= k:
            out.update(v for v, _ in seq)
    return out


# =============================================================================
# Text format
# =============================================================================


def dump_cycles(cs: CycleSet) -> str:
    """One canonical cycle per line, ordered by size descending then minimum vertex."""
    ordered = sorted((canonical(c) for c in cs.cycles()), key=lambda c: (-len(c), c.seq[0][0]))
    return "".join(c.format() + "\n" for c in ordered)


def parse_cycle(line: str) -> Cycle:
    items = []
    for token in line.split():
        vertex, _, sign = token.partition("^")
        if sign not in ("+", "-") or not vertex.isdigit():
            raise FormatError(f"bad cycle entry {token!r}")
        items.append((int(vertex), Direction.UP if sign == "+" else Direction.DOWN))
    if not items:
        raise FormatError("empty cycle line")
    return Cycle(tuple(items))
