"""
pd-invariance: the split-merge chain keeps PD(θ), and coupled chains meet.

Per replica:

* a marginal chain from a PD(θ) sample, with its two largest blocks recorded
  at t = 0, ⌊steps/2⌋ and steps;
* a coupled chain from identical starts, which must keep R = 0;
* a coupled chain from independent starts run for ⌈ε^{-1/2}⌉ steps, whose
  ChainStats are written out.

On the independent-start chains, R(R − y1 ∨ z1) and the events
R − (y1 + y2) > ρ are tracked at a few times and averaged over a uniform
time q < ⌈ε^{-1/2}⌉. The σ(ε), Σ parts² and E[N_ε] identities are checked on
a separate PD(θ) reference batch.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import asdict
from typing import Any

import numpy as np

from loopsoup.core.rng import derive_seed, make_rng
from loopsoup.core.settings import get_settings
from loopsoup.experiments.runner import CommandResult, Table, new_report, run_replicas
from loopsoup.experiments.schemas import Check, ExperimentSpec, Report
from loopsoup.pd import count_at_least, dump_partitions, reference_samples, sample_pd, sigma_small, sum_of_squares
from loopsoup.splitmerge import (
    ChainStats,
    CoupledPartitions,
    blocks_from_parts,
    chain_header,
    chain_row,
    lengths,
    run_chain,
    run_marginal,
)
from loopsoup.utils.stats import ks_two_sample, mean_estimate

NAME = "pd-invariance"
DEFAULTS: dict[str, Any] = {"theta": 0.5, "replicas": 10_000, "steps": 50}

SIGMA_EPS = 0.1
TREND_EPS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


def chain_length(eps: float) -> int:
    return math.ceil(eps**-0.5)


def _top_two(parts: list[float]) -> tuple[float, float]:
    top = sorted(parts, reverse=True) + [0.0, 0.0]
    return top[0], top[1]


def _checkpoints(steps: int) -> list[int]:
    return sorted({0, steps // 2, steps})


def coupling_observables(states: Sequence[ChainStats], rho: Sequence[float]) -> dict[str, float]:
    """Mean of R(R − y1 ∨ z1) over ``states`` and, per ρ, the share with R − (y1 + y2) > ρ."""
    out = {"spread": float(np.mean([s.spread for s in states]))}
    for r in rho:
        out[f"excess_gt_{r:g}"] = float(np.mean([s.excess > r for s in states]))
    return out


def _replica(spec: ExperimentSpec, index: int, seed: int) -> dict[str, Any]:
    settings = get_settings()
    rng = make_rng(seed)
    theta, trunc = spec.theta, settings.PD_TRUNCATION

    blocks = blocks_from_parts(sample_pd(theta, trunc, rng))
    marginal = {}
    done = 0
    for t in _checkpoints(spec.steps):
        blocks = run_marginal(blocks, t - done, theta, rng)
        done = t
        marginal[t] = _top_two(lengths(blocks))
    mass = abs(sum(lengths(blocks)) - 1.0)

    same = run_chain(CoupledPartitions.identical(sample_pd(theta, trunc, rng)), spec.steps, theta, rng)
    identical_r = max(s.R for s in same)

    start = CoupledPartitions.independent(sample_pd(theta, trunc, rng), sample_pd(theta, trunc, rng))
    history = run_chain(start, chain_length(spec.eps[0]), theta, rng, spec.eps)
    return {"marginal": marginal, "mass_error": mass, "identical_R": identical_r, "chain": history}


def _coupling_checks(report: Report, spec: ExperimentSpec, histories: list[list[ChainStats]]) -> None:
    length = len(histories[0]) - 1
    per_time = {f"t{t}": coupling_observables([h[t] for h in histories], spec.rho) for t in _checkpoints(length)}
    # q uniform on {0, ..., length - 1}
    averaged = coupling_observables([s for h in histories for s in h[:-1]], spec.rho)
    start = per_time["t0"]
    report.statistics["coupling"] = {**per_time, "uniform_q": averaged}

    report.add(
        Check(
            name="coupled_spread_shrinks",
            hard=False,
            passed=averaged["spread"] < start["spread"],
            value=averaged["spread"],
            upper=start["spread"],
            detail="E[R(R - y1 v z1)] at a uniform time against t=0",
        )
    )
    for r in spec.rho:
        key = f"excess_gt_{r:g}"
        report.add(
            Check(
                name=f"top_two_unmatched_dominate_{r:g}",
                hard=False,
                passed=averaged[key] <= start[key],
                value=averaged[key],
                upper=start[key],
                detail=f"P(R - (y1 + y2) > {r:g}) at a uniform time against t=0",
            )
        )

    medians = np.median(np.array([[s.R for s in h] for h in histories], dtype=float), axis=0)
    report.statistics["median_R"] = {"start": float(medians[0]), "end": float(medians[-1])}
    report.add(
        Check(
            name="coupled_R_decay",
            hard=False,
            passed=bool(medians[-1] < medians[0]),
            value=float(medians[-1]),
            upper=float(medians[0]),
            detail=f"median R after {length} steps from independent starts",
        )
    )


def run(spec: ExperimentSpec, run_id: str) -> CommandResult:
    settings = get_settings()
    report = new_report(spec, run_id)
    results = run_replicas(_replica, spec)
    theta, alpha, sigmas = spec.theta, settings.KS_ALPHA, settings.CI_SIGMAS

    refs = reference_samples(theta, spec.replicas, settings.PD_TRUNCATION, derive_seed(spec.seed, spec.replicas))
    ref_top = [_top_two(list(p.parts)) for p in refs]
    ks_stats = {}
    for t in _checkpoints(spec.steps):
        for rank, label in ((0, "largest"), (1, "second")):
            res = ks_two_sample([r["marginal"][t][rank] for r in results], [x[rank] for x in ref_top], alpha)
            ks_stats[f"{label}_t{t}"] = asdict(res)
            if t == spec.steps:
                report.add(
                    Check(
                        name=f"ks_{label}_block",
                        hard=rank == 0,
                        passed=res.passed,
                        value=res.statistic,
                        upper=res.critical,
                        detail=f"t={t} against an independent PD({theta:g}) sample",
                    )
                )
    report.statistics["ks"] = ks_stats

    mass = max(r["mass_error"] for r in results)
    report.add(Check(name="mass_conservation", passed=mass <= settings.MASS_TOLERANCE, value=mass, upper=settings.MASS_TOLERANCE))
    identical = max(r["identical_R"] for r in results)
    report.add(Check(name="identical_start_stays_coupled", passed=identical == 0.0, value=identical, target=0.0))

    _coupling_checks(report, spec, [r["chain"] for r in results])

    batch = reference_samples(
        theta, settings.PD_REFERENCE_SAMPLES, settings.PD_TRUNCATION, derive_seed(spec.seed, spec.replicas + 1)
    )
    sigma = mean_estimate([sigma_small(p, SIGMA_EPS) for p in batch], sigmas)
    sigma_target = 1.0 - (1.0 - SIGMA_EPS) ** theta
    squares = mean_estimate([sum_of_squares(p) for p in batch], sigmas)
    squares_target = 1.0 / (1.0 + theta)
    report.statistics.update(sigma=asdict(sigma), sum_squares=asdict(squares))
    report.add(Check(name="sigma_identity", passed=sigma.covers(sigma_target), value=sigma.value, target=sigma_target))
    report.add(
        Check(name="sum_squares_identity", passed=squares.covers(squares_target), value=squares.value, target=squares_target)
    )

    ratios = []
    for eps in TREND_EPS:
        mean = float(np.mean([count_at_least(p, eps) for p in batch]))
        ratios.append(mean / math.log(1.0 / eps) ** 2)
    report.statistics["n_eps_over_log2"] = dict(zip(map(str, TREND_EPS), ratios))
    rising = sum(1 for a, b in zip(ratios[1:], ratios[2:]) if b > a)
    report.add(Check(name="n_eps_log_squared_trend", passed=rising == 0, value=rising, target=0))

    largest = Table(
        ["replica", "t", "largest", "second"],
        [[i, t, *top] for i, r in enumerate(results) for t, top in sorted(r["marginal"].items())],
    )
    chain = Table(
        ["replica", *chain_header(spec.eps)],
        [[i, *chain_row(s)] for i, r in enumerate(results) for s in r["chain"]],
    )
    return CommandResult(
        report,
        {"pd_largest": largest, "chain_R": chain},
        {"pd_reference.csv": dump_partitions(refs)},
    )
