"""
Record minima and frontier times of the discovery process.

For jump times τ_1 < τ_2 < … the pre-jump values are Z_{τ_j−} = (j − 1) − τ_j.
Record minima follow

    m_1 = τ_1,    m_{k+1} = min{τ_j > m_k : Z_{τ_j−} < Z_{m_k−}}.

A frontier time is a jump whose link is never backtracked: its pre-jump value
stays strictly below everything Z does afterwards. Within a finite horizon this
can only be decided up to the horizon, so the decomposition is flagged
censored unless Z has already hit −1.
"""

from __future__ import annotations

import math

from scipy.optimize import brentq

from loopsoup.core.errors import ParameterError
from loopsoup.exploration.trajectory import FrontierDecomposition, ZPath


def record_minima(zp: ZPath) -> list[float]:
    minima: list[float] = []
    current = math.inf
    for tj, value in zip(zp.jump_times, zp.pre_jump_values()):
        if tj > zp.horizon:
            break
        if value < current:
            minima.append(tj)
            current = value
    return minima


def frontier_decompose(zp: ZPath) -> FrontierDecomposition:
    if not math.isfinite(zp.horizon):
        raise ParameterError("frontier decomposition needs a finite horizon")
    minima = record_minima(zp)
    times = [tj for tj in zp.jump_times if tj <= zp.horizon]
    values = zp.pre_jump_values()[: len(times)]

    frontier: list[float] = []
    floor = zp.value(zp.horizon)
    for tj, value in zip(reversed(times), reversed(values)):
        if value < floor:
            frontier.append(tj)
        floor = min(floor, value)
    frontier.reverse()

    gaps = tuple(b - a for a, b in zip(frontier, frontier[1:]))
    return FrontierDecomposition(
        record_minima=tuple(minima),
        frontier_times=tuple(frontier),
        gaps=gaps,
        horizon=zp.horizon,
        censored=zp.first_hit(-1) is None,
    )


def solve_z(beta: float) -> float:
    """Unique root in (0, 1) of 1 − z = exp(−βz), the survival probability for β > 1."""
    if not beta > 1.0:
        raise ParameterError(f"survival probability is zero for beta <= 1, got {beta}")

    def f(z: float) -> float:
        return 1.0 - z - math.exp(-beta * z)

    # f > 0 at (β−1)/β² since exp(−x) ≤ 1 − x + x²/2; f(1) = −exp(−β) < 0
    lower = (beta - 1.0) / (beta * beta)
    return float(brentq(f, lower, 1.0, xtol=1e-15, maxiter=200))
