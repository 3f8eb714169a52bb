"""
explore-stats: survival, closure tails, frontier renewals, winding and the
coupling of the two exploration processes.

Each replica runs, on separate streams derived from its seed:

* a simple exploration to ``t_max`` (survival, τ^Y, record minima, gaps);
* a simple exploration to the largest T of the grid (winding suprema);
* an on-the-fly exploration to ``t_max`` (counter invariants);
* one coupled run of both processes to the smallest T of the grid.
"""

from __future__ import annotations

import math
from dataclasses import asdict
from itertools import combinations
from typing import Any

import numpy as np

from loopsoup.core.rng import derive_seed
from loopsoup.core.settings import get_settings
from loopsoup.experiments.runner import CommandResult, Table, new_report, run_replicas
from loopsoup.experiments.schemas import Check, ExperimentSpec
from loopsoup.exploration import (
    check_invariants,
    coupled_run,
    coupling_bound,
    explore_onfly,
    frontier_decompose,
    simple_explore,
    solve_z,
    winding_sup,
)
from loopsoup.utils.stats import (
    binomial_estimate,
    empirical_tail,
    ks_two_sample,
    loglinear_slope,
    loglog_slope,
)

NAME = "explore-stats"
DEFAULTS: dict[str, Any] = {"n": 100_000, "beta": 1.5, "nu": 0.5, "replicas": 10_000, "t_max": 200.0}

RECORDS = 4
GAPS = 5
TAU_GRID = [float(t) for t in range(2, 31, 2)]
GAP_GRID = [0.5 * i for i in range(1, 21)]
HIT_TOL = 1e-9


def _replica(spec: ExperimentSpec, index: int, seed: int) -> dict[str, Any]:
    n, beta, nu = spec.n, spec.beta, spec.nu
    traj, stats, zpath = simple_explore(n, beta, nu, derive_seed(seed, 0), spec.t_max)
    problems = check_invariants(traj)
    hit = zpath.first_hit(-1)
    if stats.censored:
        if hit is not None:
            problems.append(f"Z hits -1 at {hit} but the exploration survived")
    elif hit is None or abs(hit - stats.tau) > HIT_TOL:
        problems.append(f"tau={stats.tau} but Z first hits -1 at {hit}")
    frontier = frontier_decompose(zpath)

    t_top = max(spec.t_grid)
    wtraj, wstats, _ = simple_explore(n, beta, nu, derive_seed(seed, 1), t_top)
    winding = [winding_sup(wtraj, T) for T in spec.t_grid] if wstats.censored else None

    xtraj, _ = explore_onfly(n, beta, nu, derive_seed(seed, 2), t_max=spec.t_max)
    problems.extend(check_invariants(xtraj))

    coupling = coupled_run(n, beta, nu, derive_seed(seed, 3), min(spec.t_grid))
    return {
        "survived": stats.censored,
        "tau": stats.tau,
        "records": len(frontier.record_minima),
        "gaps": list(frontier.gaps[:GAPS]) if stats.censored else [],
        "winding": winding,
        "problems": problems,
        "coupling": asdict(coupling),
    }


def run(spec: ExperimentSpec, run_id: str) -> CommandResult:
    settings = get_settings()
    report = new_report(spec, run_id)
    results = run_replicas(_replica, spec)
    total = len(results)
    sigmas = settings.CI_SIGMAS

    problems = [p for r in results for p in r["problems"]]
    report.statistics["invariant_violations"] = len(problems)
    report.statistics["invariant_examples"] = problems[:10]
    report.add(Check(name="trajectory_invariants", passed=not problems, value=len(problems), target=0))

    survivors = [r for r in results if r["survived"]]
    survival = binomial_estimate(len(survivors), total, sigmas)
    report.statistics["survival"] = asdict(survival)
    report.statistics["t_max"] = spec.t_max
    if spec.beta > 1.0:
        z = solve_z(spec.beta)
        tol = settings.SURVIVAL_TOLERANCE
        report.statistics["z"] = z
        report.add(
            Check(
                name="survival_frequency",
                passed=abs(survival.value - z) <= tol,
                value=survival.value,
                target=z,
                lower=z - tol,
                upper=z + tol,
            )
        )
        for k in range(2, RECORDS + 1):
            est = binomial_estimate(sum(1 for r in results if r["records"] >= k), total, sigmas)
            target = (1.0 - z) ** (k - 1)
            report.add(
                Check(
                    name=f"record_minimum_{k}_finite",
                    hard=k == 2,
                    passed=abs(est.value - target) <= tol,
                    value=est.value,
                    target=target,
                    lower=target - tol,
                    upper=target + tol,
                )
            )

    taus = [r["tau"] for r in results if not r["survived"]]
    tail = empirical_tail(taus, TAU_GRID)
    slope = loglinear_slope(TAU_GRID, tail)
    report.statistics["tau_tail"] = dict(zip(map(str, TAU_GRID), tail))
    report.statistics["tau_tail_slope"] = slope
    report.add(
        Check(
            name="tau_tail_decay",
            hard=False,
            passed=bool(math.isfinite(slope) and slope < 0),
            value=slope,
            detail="log-linear slope of P(tau >= t) on non-survivors",
        )
    )

    gaps_by_k = [[r["gaps"][k] for r in survivors if len(r["gaps"]) > k] for k in range(GAPS)]
    pvalues = {}
    for a, b in combinations(range(GAPS), 2):
        if gaps_by_k[a] and gaps_by_k[b]:
            pvalues[f"{a + 1}-{b + 1}"] = ks_two_sample(gaps_by_k[a], gaps_by_k[b], settings.KS_ALPHA).pvalue
    pooled = [g for gs in gaps_by_k for g in gs]
    gap_tail = empirical_tail(pooled, GAP_GRID)
    gap_rate = -loglinear_slope(GAP_GRID, gap_tail)
    report.statistics.update(gap_ks_pvalues=pvalues, gap_tail_rate=gap_rate)
    report.add(
        Check(
            name="gaps_identically_distributed",
            hard=False,
            passed=all(p >= settings.KS_ALPHA for p in pvalues.values()),
            value=min(pvalues.values(), default=float("nan")),
            target=settings.KS_ALPHA,
            detail="smallest pairwise KS p-value among the first gaps",
        )
    )

    windings = np.array([r["winding"] for r in results if r["winding"] is not None], dtype=float)
    if windings.size:
        medians = np.median(windings, axis=0).tolist()
        wslope = loglog_slope(spec.t_grid, medians)
        report.statistics.update(winding_medians=dict(zip(map(str, spec.t_grid), medians)), winding_slope=wslope)
        report.add(
            Check(
                name="winding_scaling",
                hard=False,
                passed=bool(abs(wslope - settings.WINDING_SLOPE) <= settings.WINDING_SLOPE_TOLERANCE),
                value=wslope,
                target=settings.WINDING_SLOPE,
                lower=settings.WINDING_SLOPE - settings.WINDING_SLOPE_TOLERANCE,
                upper=settings.WINDING_SLOPE + settings.WINDING_SLOPE_TOLERANCE,
            )
        )

    couplings = [r["coupling"] for r in results]
    failures = binomial_estimate(sum(1 for c in couplings if not c["held"]), total, sigmas)
    T = min(spec.t_grid)
    bound = coupling_bound(spec.n, spec.beta, T)
    early = sum(
        1
        for c in couplings
        if c["divergence"] is not None and (c["rho"] is None or c["divergence"] < c["rho"] - 1e-9)
    )
    report.statistics.update(coupling_failure=asdict(failures), coupling_bound=bound, coupling_T=T)
    report.add(Check(name="coupling_bound", passed=failures.lower <= bound, value=failures.value, upper=bound))
    report.add(Check(name="divergence_after_failure_time", passed=early == 0, value=early, target=0))

    table = Table(
        ["replica", "survived", "tau", "records", *(f"gap{k + 1}" for k in range(GAPS))],
        [
            [i, int(r["survived"]), r["tau"], r["records"], *(r["gaps"] + [""] * (GAPS - len(r["gaps"])))]
            for i, r in enumerate(results)
        ],
    )
    wtable = Table(
        ["replica", *(f"T{T:g}" for T in spec.t_grid)],
        [[i, *r["winding"]] for i, r in enumerate(results) if r["winding"] is not None],
    )
    return CommandResult(report, {"explore": table, "winding": wtable})
