"""
Link configurations
Random links (edge, phase, mark) on the complete graph, their phase order, and
the line-oriented text format.

Two models are supported:

* Poisson: every edge carries a Poisson process of intensity β/(n−1) on the
  unit circle. Sampled as a Poisson(βn/2) total count of i.i.d. uniform
  (edge, phase, mark) triples.
* Sequential: a fixed number t of i.i.d. uniform (edge, mark) pairs, already
  in order.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from loopsoup.core.errors import FormatError, ParameterError, PhaseCollisionError
from loopsoup.core.rng import SeedLike, make_rng


class Mark(str, Enum):
    """Link mark: a cross keeps the traversal direction, a bar reverses it."""

    CROSS = "X"
    BAR = "B"

    @property
    def sign(self) -> int:
        return 1 if self is Mark.CROSS else -1


@dataclass(frozen=True)
class Link:
    u: int
    v: int
    phase: float
    mark: Mark

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise ParameterError(f"link endpoints must differ, got {self.u}")
        if not 0.0 <= self.phase < 1.0:
            raise ParameterError(f"phase {self.phase!r} outside [0, 1)")
        if self.u > self.v:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)

    @property
    def edge(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Configuration:
    n: int
    beta: float
    nu: float
    links: tuple[Link, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        _check_n(self.n)
        for link in self.links:
            if not (1 <= link.u <= self.n and 1 <= link.v <= self.n):
                raise ParameterError(f"link {link.edge} outside vertex set 1..{self.n}")

    def __len__(self) -> int:
        return len(self.links)

    def without(self, index: int) -> Configuration:
        """Copy with the link at ``index`` removed."""
        return Configuration(
            self.n, self.beta, self.nu, self.links[:index] + self.links[index + 1 :]
        )

    def restricted(self, n: int) -> Configuration:
        """Copy on ``n`` vertices, keeping only links inside 1..n."""
        kept = tuple(link for link in self.links if link.v <= n)
        return Configuration(n, self.beta, self.nu, kept)


@dataclass(frozen=True, eq=False)
class OrderedLinks:
    """Links in phase order with the phases dropped."""

    n: int
    us: np.ndarray
    vs: np.ndarray
    cross: np.ndarray

    def __len__(self) -> int:
        return int(self.us.shape[0])

    def __iter__(self) -> Iterator[tuple[int, int, Mark]]:
        for u, v, c in zip(self.us.tolist(), self.vs.tolist(), self.cross.tolist()):
            yield u, v, Mark.CROSS if c else Mark.BAR

    @property
    def seq(self) -> list[tuple[tuple[int, int], Mark]]:
        return [((u, v), mark) for u, v, mark in self]

    def prefix(self, s: int) -> OrderedLinks:
        return OrderedLinks(self.n, self.us[:s], self.vs[:s], self.cross[:s])

    def edges(self) -> Iterator[tuple[int, int]]:
        return zip(self.us.tolist(), self.vs.tolist())

    @classmethod
    def from_seq(cls, n: int, seq: Sequence[tuple[tuple[int, int], Mark]]) -> OrderedLinks:
        _check_n(n)
        us = np.array([min(e) for e, _ in seq], dtype=np.int64)
        vs = np.array([max(e) for e, _ in seq], dtype=np.int64)
        cross = np.array([m is Mark.CROSS for _, m in seq], dtype=bool)
        for (a, b), _ in seq:
            if a == b or not (1 <= a <= n and 1 <= b <= n):
                raise ParameterError(f"invalid edge {(a, b)} for n={n}")
        return cls(n, us, vs, cross)


# =============================================================================
# Sampling
# =============================================================================


def _check_n(n: int) -> None:
    if n < 2:
        raise ParameterError(f"need at least two vertices, got n={n}")


def _check_nu(nu: float) -> None:
    if not 0.0 <= nu <= 1.0:
        raise ParameterError(f"nu must lie in [0, 1], got {nu}")


def _sample_edges(rng: np.random.Generator, n: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """``count`` independent uniform unordered pairs, returned as (min, max)."""
    a = rng.integers(1, n + 1, size=count)
    b = rng.integers(1, n, size=count)
    b = b + (b >= a)
    return np.minimum(a, b), np.maximum(a, b)


def _distinct_phases(rng: np.random.Generator, count: int) -> np.ndarray:
    phases = rng.random(count)
    while True:
        bad = phases == 0.0
        if count > 1:
            order = np.argsort(phases, kind="stable")
            dup = np.zeros(count, dtype=bool)
            dup[order[1:]] = np.diff(phases[order]) == 0.0
            bad |= dup
        if not bad.any():
            return phases
        phases[bad] = rng.random(int(bad.sum()))


def sample_configuration(n: int, beta: float, nu: float, seed: SeedLike) -> Configuration:
    """Poisson configuration with link intensity β/(n−1) per edge."""
    _check_n(n)
    _check_nu(nu)
    if not beta > 0:
        raise ParameterError(f"beta must be positive, got {beta}")
    rng = make_rng(seed)
    count = int(rng.poisson(beta * n / 2.0))
    us, vs = _sample_edges(rng, n, count)
    phases = _distinct_phases(rng, count)
    cross = rng.random(count) < nu
    links = tuple(
        Link(u, v, ph, Mark.CROSS if c else Mark.BAR)
        for u, v, ph, c in zip(us.tolist(), vs.tolist(), phases.tolist(), cross.tolist())
    )
    return Configuration(n, float(beta), float(nu), links)


def to_ordered(config: Configuration) -> OrderedLinks:
    """Sort links by phase and drop the phases."""
    links = sorted(config.links, key=lambda link: link.phase)
    for prev, cur in zip(links, links[1:]):
        if prev.phase == cur.phase:
            raise PhaseCollisionError(f"two links share phase {cur.phase!r}")
    return OrderedLinks(
        config.n,
        np.array([link.u for link in links], dtype=np.int64),
        np.array([link.v for link in links], dtype=np.int64),
        np.array([link.mark is Mark.CROSS for link in links], dtype=bool),
    )


def sample_ordered(n: int, t: int, nu: float, seed: SeedLike) -> OrderedLinks:
    """``t`` sequential uniform links."""
    _check_n(n)
    _check_nu(nu)
    if t < 0:
        raise ParameterError(f"link count must be non-negative, got {t}")
    rng = make_rng(seed)
    us, vs = _sample_edges(rng, n, t)
    cross = rng.random(t) < nu
    return OrderedLinks(n, us.astype(np.int64), vs.astype(np.int64), cross)


def link_count(n: int, beta: float, rng: np.random.Generator, poisson: bool = False) -> int:
    """⌊βn/2⌋, or a Poisson(βn/2) draw when ``poisson`` is set."""
    mean = beta * n / 2.0
    return int(rng.poisson(mean)) if poisson else math.floor(mean)


# =============================================================================
# Text format
# =============================================================================


def dump_configuration(config: Configuration) -> str:
    lines = [f"{config.n} {config.beta!r} {config.nu!r}"]
    for link in config.links:
        lines.append(f"{link.u} {link.v} {link.phase:.17g} {link.mark.value}")
    return "\n".join(lines) + "\n"


def parse_configuration(text: str) -> Configuration:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows or len(rows[0]) != 3:
        raise FormatError("missing header line 'n beta nu'")
    try:
        n, beta, nu = int(rows[0][0]), float(rows[0][1]), float(rows[0][2])
        links = []
        for row in rows[1:]:
            if len(row) != 4:
                raise FormatError(f"expected 'u v phase mark', got {' '.join(row)!r}")
            links.append(Link(int(row[0]), int(row[1]), float(row[2]), Mark(row[3])))
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from exc
    return Configuration(n, beta, nu, tuple(links))


def write_configuration(config: Configuration, path: Path) -> Path:
    path.write_text(dump_configuration(config), encoding="utf-8")
    return path


def read_configuration(path: Path) -> Configuration:
    return parse_configuration(path.read_text(encoding="utf-8"))
