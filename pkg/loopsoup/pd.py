"""
GEM(θ) and Poisson-Dirichlet PD(θ) partitions of [0, 1).

Stick-breaking runs until the unbroken remainder drops below ``trunc``; the
remainder is kept as ``truncation_mass`` so that parts and tail always sum to
one.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Protocol, Union

import numpy as np

from loopsoup.core.errors import ParameterError
from loopsoup.core.rng import SeedLike, make_rng


class UniformSource(Protocol):
    def random(self) -> float: ...


@dataclass(frozen=True)
class PartitionSample:
    parts: tuple[float, ...]
    truncation_mass: float = 0.0

    def __post_init__(self) -> None:
        if any(p <= 0.0 for p in self.parts):
            raise ParameterError("partition parts must be positive")
        if self.truncation_mass < 0.0:
            raise ParameterError("truncation mass must be non-negative")

    @property
    def total(self) -> float:
        return float(sum(self.parts)) + self.truncation_mass

    def sorted(self) -> "PartitionSample":
        return PartitionSample(tuple(sorted(self.parts, reverse=True)), self.truncation_mass)

    def __len__(self) -> int:
        return len(self.parts)


PartsLike = Union[PartitionSample, Sequence[float], np.ndarray]


def _parts(p: PartsLike) -> list[float]:
    if isinstance(p, PartitionSample):
        return list(p.parts)
    return [float(x) for x in p]


def sample_beta1theta(theta: float, u: float) -> float:
    """Inverse CDF of Beta(1, θ): 1 − (1 − u)^{1/θ}."""
    if not theta > 0:
        raise ParameterError(f"theta must be positive, got {theta}")
    if not 0.0 <= u < 1.0:
        raise ParameterError(f"u must lie in [0, 1), got {u}")
    return 1.0 - (1.0 - u) ** (1.0 / theta)


def sample_gem(theta: float, trunc: float, rng: Union[UniformSource, SeedLike]) -> PartitionSample:
    if not theta > 0:
        raise ParameterError(f"theta must be positive, got {theta}")
    if not 0.0 < trunc < 1.0:
        raise ParameterError(f"truncation must lie in (0, 1), got {trunc}")
    source = make_rng(rng) if isinstance(rng, (int, np.integer)) else rng
    parts: list[float] = []
    remaining = 1.0
    while remaining >= trunc:
        piece = sample_beta1theta(theta, source.random()) * remaining
        if piece <= 0.0:
            continue
        parts.append(piece)
        remaining -= piece
    return PartitionSample(tuple(parts), max(remaining, 0.0))


def sample_pd(theta: float, trunc: float, rng: Union[UniformSource, SeedLike]) -> PartitionSample:
    return sample_gem(theta, trunc, rng).sorted()


def sup_distance(a: PartsLike, b: PartsLike) -> float:
    x = sorted(_parts(a), reverse=True)
    y = sorted(_parts(b), reverse=True)
    width = max(len(x), len(y))
    x += [0.0] * (width - len(x))
    y += [0.0] * (width - len(y))
    return max((abs(p - q) for p, q in zip(x, y)), default=0.0)


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")


def sigma_small(p: PartsLike, eps: float) -> float:
    """Mass in parts below ``eps``; a truncated tail counts as small."""
    _check_eps(eps)
    small = sum(x for x in _parts(p) if x < eps)
    if isinstance(p, PartitionSample):
        small += p.truncation_mass
    return float(small)


def count_at_least(p: PartsLike, eps: float) -> int:
    _check_eps(eps)
    return sum(1 for x in _parts(p) if x >= eps)


def sum_of_squares(p: PartsLike) -> float:
    return float(sum(x * x for x in _parts(p)))


def reference_samples(
    theta: float, count: int, trunc: float, seed: SeedLike
) -> list[PartitionSample]:
    rng = make_rng(seed)
    return [sample_pd(theta, trunc, rng) for _ in range(count)]


def dump_partitions(rows: Iterable[PartsLike]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(f"{x:.17g}" for x in sorted(_parts(row), reverse=True))
    return buf.getvalue()
