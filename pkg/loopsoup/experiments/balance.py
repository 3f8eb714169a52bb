"""
balance: orientation balance of segments of long cycles.

For vertices in cycles of at least k = ⌊√n⌋ vertices, B(v, k) is the number
of Up minus Down entries among the k entries following v in its cycle,
oriented so that v is Up.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from loopsoup.configuration import link_count, sample_ordered
from loopsoup.core.errors import ParameterError
from loopsoup.core.rng import make_rng
from loopsoup.core.settings import get_settings
from loopsoup.cycles import balance, build, large_cycle_vertices
from loopsoup.experiments.runner import CommandResult, Table, new_report, run_replicas
from loopsoup.experiments.schemas import Check, ExperimentSpec

NAME = "balance"
DEFAULTS: dict[str, Any] = {"n": 100_000, "beta": 1.5, "nu": 0.5, "replicas": 10, "samples": 100}


def _replica(spec: ExperimentSpec, index: int, seed: int) -> dict[str, Any]:
    rng = make_rng(seed)
    t = link_count(spec.n, spec.beta, rng, poisson=spec.poisson)
    cs = build(sample_ordered(spec.n, t, spec.nu, rng), spec.backend)
    k = math.isqrt(spec.n)
    candidates = sorted(large_cycle_vertices(cs, k))
    if not candidates:
        return {"k": k, "balances": []}
    picks = rng.choice(len(candidates), size=spec.samples, replace=True)
    return {"k": k, "balances": [balance(cs, candidates[i], k) for i in picks.tolist()]}


def run(spec: ExperimentSpec, run_id: str) -> CommandResult:
    if not spec.beta > 1.0:
        raise ParameterError(f"balance needs a supercritical beta > 1, got {spec.beta}")
    settings = get_settings()
    report = new_report(spec, run_id)
    results = run_replicas(_replica, spec)

    k = math.isqrt(spec.n)
    values = np.array([b for r in results for b in r["balances"]], dtype=float)
    threshold = settings.BALANCE_FACTOR * spec.n**0.25
    magnitudes = np.abs(values)
    report.statistics.update(k=k, sampled=int(values.size), threshold=threshold)
    if values.size == 0:
        report.add(Check(name="long_cycles_found", passed=False, detail="no cycle of length ≥ ⌊√n⌋"))
        return CommandResult(report)

    q95 = float(np.quantile(magnitudes, 0.95))
    exceed = float(np.mean(magnitudes > threshold))
    report.statistics.update(
        quantile_95=q95,
        mean_abs=float(magnitudes.mean()),
        exceedance_fraction=exceed,
    )
    report.add(Check(name="triangle_bound", passed=bool(magnitudes.max() <= k), value=float(magnitudes.max()), upper=k))
    if spec.nu == 1.0:
        report.add(
            Check(name="bar_free_fully_unbalanced", passed=bool(np.all(values == k)), value=float(values.min()), target=k)
        )
    else:
        report.add(Check(name="quantile_95", passed=q95 <= threshold, value=q95, upper=threshold))

    table = Table(["replica", "balance"], [[i, b] for i, r in enumerate(results) for b in r["balances"]])
    return CommandResult(report, {"balance": table})
