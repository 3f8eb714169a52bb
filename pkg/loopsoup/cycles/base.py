"""
Oriented cycles and the link insertion rules.

A cycle is the sequence of (vertex, direction) pairs at which one loop meets
level 0. Sequences are listed in the order met when the loop is followed
backwards in time, each vertex keeping its forward passage direction. Under
this listing a link laid above all previous links acts by the rules below,
after rotating the cycle of ``u`` so that ``u`` comes first with direction Up
and writing ``j`` for the position of ``w``:

    different cycles, Cross   (u, Y, w, X)
    different cycles, Bar     (u, w↓, Y reversed, X)
    same cycle, Cross, w Up   split (u, v_{j+1}..) + (v_2..v_j)
    same cycle, Cross, w Down twist (u, v_{j-1}..v_2 reversed, v_j, ..)
    same cycle, Bar, w Down   split (u, v_j, ..) + (v_2..v_{j-1})
    same cycle, Bar, w Up     twist (u, v_j..v_2 reversed, v_{j+1}, ..)

where ``(u, X)`` and ``(w, Y)`` are the two normalised cycles of a merge and
"reversed" means reversed order with every direction negated.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Generic, TypeVar

from loopsoup.configuration import Mark
from loopsoup.core.errors import ParameterError, UnknownVertexError

UP = 1
DOWN = -1


class Direction(IntEnum):
    UP = 1
    DOWN = -1

    def __neg__(self) -> Direction:  # type: ignore[override]
        return Direction.DOWN if self is Direction.UP else Direction.UP

    @property
    def symbol(self) -> str:
        return "+" if self is Direction.UP else "-"


@dataclass(frozen=True)
class Cycle:
    """A cycle up to rotation and reversal; ``seq`` is one representative."""

    seq: tuple[tuple[int, Direction], ...]

    def __post_init__(self) -> None:
        if not self.seq:
            raise ParameterError("a cycle needs at least one vertex")
        normalised = tuple((int(v), Direction(d)) for v, d in self.seq)
        if len({v for v, _ in normalised}) != len(normalised):
            raise ParameterError("cycle vertices must be distinct")
        object.__setattr__(self, "seq", normalised)

    @classmethod
    def of(cls, *items: tuple[int, int]) -> Cycle:
        return cls(tuple((v, Direction(d)) for v, d in items))

    def __len__(self) -> int:
        return len(self.seq)

    def __iter__(self) -> Iterator[tuple[int, Direction]]:
        return iter(self.seq)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.seq)

    def reversed(self) -> Cycle:
        return Cycle(tuple((v, -d) for v, d in reversed(self.seq)))

    def rotated(self, k: int) -> Cycle:
        k %= len(self.seq)
        return Cycle(self.seq[k:] + self.seq[:k])

    def oriented_at(self, vertex: int) -> Cycle:
        """Representative starting at ``vertex`` with ``vertex`` Up."""
        idx = self.vertices.index(vertex)
        if self.seq[idx][1] is Direction.UP:
            return self.rotated(idx)
        return self.reversed().rotated(len(self.seq) - 1 - idx)

    def canonical(self) -> Cycle:
        return canonical(self)

    def format(self) -> str:
        return " ".join(f"{v}^{d.symbol}" for v, d in self.seq)


def canonical(c: Cycle) -> Cycle:
    """Rotate the minimum vertex first, then orient it Up."""
    return c.oriented_at(min(c.vertices))


class EventKind(str, Enum):
    MERGE = "merge"
    SPLIT = "split"
    TWIST = "twist"
    NOOP = "noop"


@dataclass(frozen=True)
class LinkEvent:
    """
    Outcome of one link insertion.

    ``cycles`` holds the ids touched (merge: surviving id then absorbed id;
    split: source id then new id) and ``sizes`` the sizes of the resulting
    cycles.
    """

    kind: EventKind
    cycles: tuple[int, ...] = ()
    sizes: tuple[int, ...] = ()

    @classmethod
    def merge(cls, kept: int, absorbed: int, size: int) -> LinkEvent:
        return cls(EventKind.MERGE, (kept, absorbed), (size,))

    @classmethod
    def split(cls, source: int, new: int, size_kept: int, size_new: int) -> LinkEvent:
        return cls(EventKind.SPLIT, (source, new), (size_kept, size_new))

    @classmethod
    def twist(cls, cid: int, size: int) -> LinkEvent:
        return cls(EventKind.TWIST, (cid,), (size,))

    @classmethod
    def noop(cls) -> LinkEvent:
        return cls(EventKind.NOOP)

    @property
    def smaller_part(self) -> int:
        """Size of the smaller new cycle of a split, 0 otherwise."""
        return min(self.sizes) if self.kind is EventKind.SPLIT else 0


S = TypeVar("S")


class CycleSet(ABC, Generic[S]):
    """
    Mutable partition of 1..n into oriented cycles.

    Backends supply a small sequence algebra over their representation ``S``;
    the insertion rules are implemented once here on top of it.
    """

    backend: str = ""

    def __init__(self, n: int):
        if n < 1:
            raise ParameterError(f"need at least one vertex, got n={n}")
        self.n = n
        self._next_id = n + 1

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[tuple[int, int]]]) -> CycleSet[S]:
        """Cycle set holding exactly ``cycles``, which must partition 1..n."""
        cs = cls(n)
        seen = sorted(v for c in cycles for v, _ in c)
        if seen != list(range(1, n + 1)):
            raise ParameterError("cycles must partition the vertex set")
        for c in cycles:
            parts = []
            for v, d in c:
                single = cs._take(v)
                parts.append(single if d == UP else cs._revneg(single))
            cs._install(cs._concat(*parts), c[0][0])
        return cs

    # ---- backend primitives -------------------------------------------------

    @abstractmethod
    def _locate(self, v: int) -> tuple[int, int, int, int]:
        """(cycle id, position, direction, cycle size) of vertex ``v``."""

    @abstractmethod
    def _take(self, cid: int) -> S:
        """Detach cycle ``cid`` and return its sequence."""

    @abstractmethod
    def _install(self, seq: S, cid: int) -> None:
        """Register ``seq`` as cycle ``cid``."""

    @abstractmethod
    def _split(self, seq: S, k: int) -> tuple[S, S]:
        """First ``k`` items and the rest."""

    @abstractmethod
    def _concat(self, *seqs: S) -> S: ...

    @abstractmethod
    def _revneg(self, seq: S) -> S:
        """Reverse the order and negate every direction."""

    @abstractmethod
    def _count_up(self, cid: int, start: int, stop: int) -> int:
        """Number of Up entries at positions [start, stop) of cycle ``cid``."""

    @abstractmethod
    def listing(self, cid: int) -> list[tuple[int, int]]:
        """Stored sequence of cycle ``cid`` as (vertex, ±1) pairs."""

    @abstractmethod
    def cycle_ids(self) -> list[int]: ...

    @abstractmethod
    def representatives(self) -> list[tuple[int, int]]:
        """One (vertex, cycle size) pair per cycle."""

    # ---- queries -------------------------------------------------------------

    def _check(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise UnknownVertexError(v)

    def cycle_id(self, v: int) -> int:
        self._check(v)
        return self._locate(v)[0]

    def size_of(self, v: int) -> int:
        self._check(v)
        return self._locate(v)[3]

    def direction(self, v: int) -> Direction:
        self._check(v)
        return Direction(self._locate(v)[2])

    def relative_direction(self, u: int, v: int) -> int:
        """+1 when ``v`` has ``u``'s orientation in a common cycle listing."""
        return int(self.direction(u)) * int(self.direction(v))

    @property
    def cycle_count(self) -> int:
        return len(self.cycle_ids())

    def cycle_of(self, v: int) -> Cycle:
        self._check(v)
        return Cycle.of(*self.listing(self._locate(v)[0]))

    def cycles(self) -> list[Cycle]:
        return [Cycle.of(*self.listing(cid)) for cid in self.cycle_ids()]

    def cycle_sizes(self) -> list[int]:
        return [size for _, size in self.representatives()]

    def canonical_cycles(self) -> list[tuple[tuple[int, int], ...]]:
        """Sorted multiset of canonical cycles, comparable across backends."""
        return sorted(tuple((v, int(d)) for v, d in canonical(c).seq) for c in self.cycles())

    def same_orientation_count(self, v: int, k: int) -> tuple[int, int]:
        """
        Among the first min(k, |C(v)|) entries of C(v) oriented from ``v``, the
        number sharing ``v``'s direction and the number inspected.
        """
        self._check(v)
        cid, pos, d, size = self._locate(v)
        m = min(k, size)
        if d == UP:
            ranges = _cyclic_ranges(pos, m, size)
            ups = sum(self._count_up(cid, a, b) for a, b in ranges)
            return ups, m
        # oriented listing runs backwards from pos
        start = (pos - m + 1) % size
        ranges = _cyclic_ranges(start, m, size)
        ups = sum(self._count_up(cid, a, b) for a, b in ranges)
        return m - ups, m

    # ---- dynamics ------------------------------------------------------------

    def _normalised(self, cid: int, pos: int, d: int, size: int) -> S:
        """Cycle ``cid`` rotated and oriented so the vertex at ``pos`` is first and Up."""
        seq = self._take(cid)
        if d == DOWN:
            seq = self._revneg(seq)
            pos = size - 1 - pos
        if pos == 0:
            return seq
        head, tail = self._split(seq, pos)
        return self._concat(tail, head)

    def apply(self, u: int, w: int, mark: Mark) -> LinkEvent:
        """Insert a link on {u, w} above all previous links."""
        self._check(u)
        self._check(w)
        if u == w:
            raise ParameterError(f"link endpoints must differ, got {u}")
        cu, pu, du, su = self._locate(u)
        cw, pw, dw, sw = self._locate(w)

        if cu != cw:
            a = self._normalised(cu, pu, du, su)
            b = self._normalised(cw, pw, dw, sw)
            head_u, x = self._split(a, 1)
            head_w, y = self._split(b, 1)
            if mark is Mark.CROSS:
                merged = self._concat(head_u, y, head_w, x)
            else:
                merged = self._concat(head_u, self._revneg(self._concat(y, head_w)), x)
            self._install(merged, cu)
            return LinkEvent.merge(cu, cw, su + sw)

        size = su
        if du == UP:
            j = (pw - pu) % size
            dj = dw
        else:
            j = (pu - pw) % size
            dj = -dw
        seq = self._normalised(cu, pu, du, su)
        head_u, rest = self._split(seq, 1)
        middle, rest = self._split(rest, j - 1)
        head_w, tail = self._split(rest, 1)

        if mark is Mark.CROSS:
            if dj == UP:
                self._install(self._concat(head_u, tail), cu)
                new_id = self._new_id()
                self._install(self._concat(middle, head_w), new_id)
                return LinkEvent.split(cu, new_id, size - j, j)
            self._install(self._concat(head_u, self._revneg(middle), head_w, tail), cu)
            return LinkEvent.twist(cu, size)

        if dj == DOWN:
            if j == 1:
                # the cut-off loop never reaches level 0
                self._install(self._concat(head_u, head_w, tail), cu)
                return LinkEvent.twist(cu, size)
            self._install(self._concat(head_u, head_w, tail), cu)
            new_id = self._new_id()
            self._install(middle, new_id)
            return LinkEvent.split(cu, new_id, size - j + 1, j - 1)
        self._install(self._concat(head_u, self._revneg(self._concat(middle, head_w)), tail), cu)
        return LinkEvent.twist(cu, size)

    def _new_id(self) -> int:
        cid = self._next_id
        self._next_id += 1
        return cid


def _cyclic_ranges(start: int, count: int, size: int) -> list[tuple[int, int]]:
    """Half-open position ranges covering ``count`` items from ``start`` with wraparound."""
    end = start + count
    if end <= size:
        return [(start, end)]
    return [(start, size), (0, end - size)]
