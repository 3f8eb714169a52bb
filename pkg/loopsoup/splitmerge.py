"""
Split-merge dynamics on interval partitions of [0, 1) and the two-partition
coupling that drives a pair of such partitions together.

A step uses three uniforms (u, u2, w). ``u`` highlights the block containing
it, which is moved to the front of [0, 1). If ``u2`` then falls in another
block the two merge; if it falls in the highlighted block a split at offset
``u2`` is proposed and carried out when ``w ≤ θ``.

In the coupled version both partitions read the same uniforms. Blocks carry a
stable id and an optional partner id in the other partition. Layout between
steps: unmatched blocks first by decreasing length, then the matched blocks in
an order shared by both partitions, so that partners cover the same interval.
"""

from __future__ import annotations

from bisect import bisect_right
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from itertools import accumulate
from typing import Optional

import numpy as np

from loopsoup.core.errors import ParameterError
from loopsoup.core.rng import SeedLike, make_rng
from loopsoup.pd import PartitionSample


@dataclass(frozen=True)
class Block:
    length: float
    id: int
    matched_to: Optional[int] = None

    @property
    def matched(self) -> bool:
        return self.matched_to is not None


def _check_step(u: float, u2: float, w: float, theta: float) -> None:
    for name, x in (("u", u), ("u2", u2), ("w", w)):
        if not 0.0 <= x < 1.0:
            raise ParameterError(f"{name} must lie in [0, 1), got {x}")
    if not 0.0 < theta <= 1.0:
        raise ParameterError(f"theta must lie in (0, 1], got {theta}")


def _locate(blocks: Sequence[Block], x: float) -> int:
    ends = list(accumulate(b.length for b in blocks))
    return min(bisect_right(ends, x), len(blocks) - 1)


def _to_front(blocks: Sequence[Block], u: float) -> list[Block]:
    i = _locate(blocks, u)
    return [blocks[i], *blocks[:i], *blocks[i + 1 :]]


def _descending(blocks: Iterable[Block]) -> list[Block]:
    return sorted(blocks, key=lambda b: (-b.length, b.id))


def _layout(blocks: Iterable[Block]) -> list[Block]:
    unmatched, matched = [], []
    for b in blocks:
        (matched if b.matched else unmatched).append(b)
    matched.sort(key=lambda b: (-b.length, min(b.id, b.matched_to)))  # type: ignore[type-var]
    return _descending(unmatched) + matched


def blocks_from_parts(parts: PartitionSample | Sequence[float], first_id: int = 0) -> list[Block]:
    """Blocks in descending order; a truncated tail becomes one more block."""
    lengths = list(parts.parts) if isinstance(parts, PartitionSample) else [float(x) for x in parts]
    if isinstance(parts, PartitionSample) and parts.truncation_mass > 0.0:
        lengths.append(parts.truncation_mass)
    if not lengths or any(x <= 0.0 for x in lengths):
        raise ParameterError("a partition needs at least one block and positive lengths")
    return _descending(Block(x, first_id + i) for i, x in enumerate(lengths))


def lengths(blocks: Iterable[Block]) -> list[float]:
    return [b.length for b in blocks]


# =============================================================================
# Marginal dynamics
# =============================================================================


def marginal_step(p: Sequence[Block], u: float, u2: float, w: float, theta: float) -> list[Block]:
    _check_step(u, u2, w, theta)
    front = _to_front(p, u)
    head = front[0]
    next_id = max(b.id for b in front) + 1
    j = _locate(front, u2)
    if j == 0:
        if w > theta or u2 <= 0.0:
            return _descending(front)
        left = Block(u2, next_id)
        right = Block(head.length - u2, next_id + 1)
        return _descending([left, right, *front[1:]])
    merged = Block(head.length + front[j].length, next_id)
    return _descending([merged, *front[1:j], *front[j + 1 :]])


def run_marginal(
    p: Sequence[Block], steps: int, theta: float, rng: SeedLike
) -> list[Block]:
    if steps < 0:
        raise ParameterError(f"steps must be non-negative, got {steps}")
    gen = make_rng(rng)
    blocks = list(p)
    for _ in range(steps):
        u, u2, w = gen.random(3)
        blocks = marginal_step(blocks, float(u), float(u2), float(w), theta)
    return blocks


# =============================================================================
# Coupled dynamics
# =============================================================================


@dataclass(frozen=True)
class CoupledPartitions:
    Y: tuple[Block, ...]
    Z: tuple[Block, ...]
    next_id: int = 0

    @classmethod
    def identical(cls, parts: PartitionSample | Sequence[float]) -> "CoupledPartitions":
        ys = blocks_from_parts(parts, first_id=0)
        zs = blocks_from_parts(parts, first_id=len(ys))
        y_matched = [replace(y, matched_to=z.id) for y, z in zip(ys, zs)]
        z_matched = [replace(z, matched_to=y.id) for y, z in zip(ys, zs)]
        return cls(tuple(_layout(y_matched)), tuple(_layout(z_matched)), 2 * len(ys))

    @classmethod
    def independent(
        cls, y_parts: PartitionSample | Sequence[float], z_parts: PartitionSample | Sequence[float]
    ) -> "CoupledPartitions":
        ys = blocks_from_parts(y_parts, first_id=0)
        zs = blocks_from_parts(z_parts, first_id=len(ys))
        return cls(tuple(ys), tuple(zs), len(ys) + len(zs))

    @property
    def R(self) -> float:
        return float(sum(b.length for b in self.Y if not b.matched))

    @property
    def Q(self) -> float:
        return float(sum(b.length for b in self.Y if b.matched))

    def unmatched(self, side: str = "Y") -> list[float]:
        blocks = self.Y if side == "Y" else self.Z
        return sorted((b.length for b in blocks if not b.matched), reverse=True)

    def n_eps(self, eps: float) -> int:
        """Unmatched blocks of length at least ``eps``, both partitions together."""
        return sum(1 for b in (*self.Y, *self.Z) if not b.matched and b.length >= eps)

    def check(self, tol: float = 1e-9) -> list[str]:
        problems = []
        for name, blocks in (("Y", self.Y), ("Z", self.Z)):
            total = sum(b.length for b in blocks)
            if abs(total - 1.0) > tol:
                problems.append(f"{name} has total length {total!r}")
        by_id = {b.id: b for b in self.Z}
        for y in self.Y:
            if y.matched_to is None:
                continue
            z = by_id.get(y.matched_to)
            if z is None or z.matched_to != y.id:
                problems.append(f"block {y.id} has no partner {y.matched_to}")
            elif abs(z.length - y.length) > 1e-12:
                problems.append(f"matched blocks {y.id}/{z.id} differ in length")
        return problems


def _drop_dangling(ys: list[Block], zs: list[Block]) -> tuple[list[Block], list[Block]]:
    y_ids = {b.id for b in ys}
    z_ids = {b.id for b in zs}
    ys = [replace(b, matched_to=None) if b.matched and b.matched_to not in z_ids else b for b in ys]
    zs = [replace(b, matched_to=None) if b.matched and b.matched_to not in y_ids else b for b in zs]
    return ys, zs


def coupled_step(
    cp: CoupledPartitions, u: float, u2: float, w: float, theta: float
) -> CoupledPartitions:
    _check_step(u, u2, w, theta)
    fy = _to_front(cp.Y, u)
    fz = _to_front(cp.Z, u)
    hy, hz = fy[0], fz[0]
    jy, jz = _locate(fy, u2), _locate(fz, u2)
    next_id = cp.next_id
    do_split = w <= theta and u2 > 0.0

    if jy == 0 and jz == 0:
        if not do_split:
            return cp
        ly, ry, lz, rz = range(next_id, next_id + 4)
        next_id += 4
        right_y, right_z = hy.length - u2, hz.length - u2
        pair_right = right_y == right_z
        new_y = [
            Block(u2, ly, lz),
            Block(right_y, ry, rz if pair_right else None),
            *fy[1:],
        ]
        new_z = [
            Block(u2, lz, ly),
            Block(right_z, rz, ry if pair_right else None),
            *fz[1:],
        ]
    else:
        new_y, new_z = list(fy), list(fz)
        merged_y = merged_z = None
        if jy == 0:
            if do_split:
                new_y = [Block(u2, next_id), Block(hy.length - u2, next_id + 1), *fy[1:]]
                next_id += 2
        else:
            merged_y = Block(hy.length + fy[jy].length, next_id)
            next_id += 1
            new_y = [merged_y, *fy[1:jy], *fy[jy + 1 :]]
        if jz == 0:
            if do_split:
                new_z = [Block(u2, next_id), Block(hz.length - u2, next_id + 1), *fz[1:]]
                next_id += 2
        else:
            merged_z = Block(hz.length + fz[jz].length, next_id)
            next_id += 1
            new_z = [merged_z, *fz[1:jz], *fz[jz + 1 :]]
        if (
            merged_y is not None
            and merged_z is not None
            and hy.matched_to == hz.id
            and fy[jy].matched_to == fz[jz].id
        ):
            new_y[0] = replace(merged_y, matched_to=merged_z.id)
            new_z[0] = replace(merged_z, matched_to=merged_y.id)

    new_y, new_z = _drop_dangling(new_y, new_z)
    return CoupledPartitions(tuple(_layout(new_y)), tuple(_layout(new_z)), next_id)


# =============================================================================
# Chains
# =============================================================================


@dataclass(frozen=True)
class ChainStats:
    t: int
    R: float
    Q: float
    y1: float
    y2: float
    z1: float
    n_eps: tuple[int, ...] = field(default_factory=tuple)

    @property
    def spread(self) -> float:
        """R(R − y1 ∨ z1): small when R is small or one unmatched block covers most of it."""
        return self.R * (self.R - max(self.y1, self.z1))

    @property
    def excess(self) -> float:
        """Unmatched length outside the two largest unmatched blocks of Y."""
        return self.R - (self.y1 + self.y2)


def chain_stats(cp: CoupledPartitions, t: int, eps_list: Sequence[float] = ()) -> ChainStats:
    ys = cp.unmatched("Y") + [0.0, 0.0]
    zs = cp.unmatched("Z") + [0.0]
    return ChainStats(
        t=t,
        R=cp.R,
        Q=cp.Q,
        y1=ys[0],
        y2=ys[1],
        z1=zs[0],
        n_eps=tuple(cp.n_eps(eps) for eps in eps_list),
    )


def run_chain(
    cp: CoupledPartitions,
    steps: int,
    theta: float,
    rng: SeedLike,
    eps_list: Sequence[float] = (),
) -> list[ChainStats]:
    if steps < 0:
        raise ParameterError(f"steps must be non-negative, got {steps}")
    gen: np.random.Generator = make_rng(rng)
    history = [chain_stats(cp, 0, eps_list)]
    for t in range(1, steps + 1):
        u, u2, w = gen.random(3)
        cp = coupled_step(cp, float(u), float(u2), float(w), theta)
        history.append(chain_stats(cp, t, eps_list))
    return history


def chain_header(eps_list: Sequence[float] = ()) -> list[str]:
    return ["t", "R", "Q", "y1", "y2", "z1", *(f"N_{eps:g}" for eps in eps_list)]


def chain_row(s: ChainStats) -> list[float | int]:
    return [s.t, s.R, s.Q, s.y1, s.y2, s.z1, *s.n_eps]
