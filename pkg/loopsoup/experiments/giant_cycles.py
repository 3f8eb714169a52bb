"""
giant-cycles: cycle sizes inside the giant component against Poisson-Dirichlet.

Per replica the link stream at ⌊βn/2⌋ links (or a Poisson count) feeds both
the cycle build and a union-find over the link-support graph; cycle sizes of
the giant component are rescaled by its size. For ν < 1 the reference law is
PD(½), for ν = 1 (random transpositions) PD(1).
"""

from __future__ import annotations

import math
from dataclasses import asdict
from typing import Any

import numpy as np

from loopsoup.configuration import link_count, sample_ordered
from loopsoup.core.rng import derive_seed, make_rng
from loopsoup.core.settings import get_settings
from loopsoup.cycles import build, rescaled_sizes
from loopsoup.experiments.runner import CommandResult, Table, new_report, run_replicas
from loopsoup.experiments.schemas import Check, ExperimentSpec
from loopsoup.exploration import solve_z
from loopsoup.pd import reference_samples, sum_of_squares
from loopsoup.utils.stats import mean_estimate
from loopsoup.utils.unionfind import UnionFind

NAME = "giant-cycles"
DEFAULTS: dict[str, Any] = {"n": 100_000, "beta": 1.5, "nu": 0.5, "replicas": 200}

TOP = 3


def reference_theta(nu: float) -> float:
    return 1.0 if nu == 1.0 else 0.5


def _replica(spec: ExperimentSpec, index: int, seed: int) -> dict[str, Any]:
    rng = make_rng(seed)
    t = link_count(spec.n, spec.beta, rng, poisson=spec.poisson)
    ordered = sample_ordered(spec.n, t, spec.nu, rng)
    cs = build(ordered, spec.backend)
    uf = UnionFind(spec.n).union_edges(ordered.edges())
    root, giant = uf.largest()
    parts = rescaled_sizes(cs, giant, within=uf.members(root))
    top = (parts + [0.0] * TOP)[:TOP]
    return {
        "links": t,
        "giant_fraction": giant / spec.n,
        "sum_squares": sum_of_squares(parts),
        "top": top,
        "largest_cycle": max(cs.cycle_sizes()) / spec.n,
    }


def run(spec: ExperimentSpec, run_id: str) -> CommandResult:
    settings = get_settings()
    report = new_report(spec, run_id)
    results = run_replicas(_replica, spec)

    fractions = [r["giant_fraction"] for r in results]
    squares = [r["sum_squares"] for r in results]
    theta = reference_theta(spec.nu)
    frac = mean_estimate(fractions, settings.CI_SIGMAS)
    sq = mean_estimate(squares, settings.CI_SIGMAS)
    report.statistics.update(
        giant_fraction=asdict(frac),
        sum_squares=asdict(sq),
        reference_theta=theta,
        mean_largest_cycle=float(np.mean([r["largest_cycle"] for r in results])),
    )

    if spec.beta > 1.0:
        z = solve_z(spec.beta)
        report.statistics["z"] = z
        tol = settings.GIANT_FRACTION_TOLERANCE
        report.add(
            Check(
                name="giant_fraction",
                passed=abs(frac.value - z) <= tol,
                value=frac.value,
                target=z,
                lower=z - tol,
                upper=z + tol,
            )
        )
        target = 1.0 / (1.0 + theta)
        tol = settings.PD_MOMENT_TOLERANCE
        report.add(
            Check(
                name="sum_squares",
                passed=abs(sq.value - target) <= tol,
                value=sq.value,
                target=target,
                lower=target - tol,
                upper=target + tol,
            )
        )
        refs = reference_samples(
            theta,
            settings.PD_REFERENCE_SAMPLES,
            settings.PD_TRUNCATION,
            derive_seed(spec.seed, spec.replicas),
        )
        ref_top = np.array([(list(p.parts) + [0.0] * TOP)[:TOP] for p in refs])
        ref_means = ref_top.mean(axis=0)
        top = np.array([r["top"] for r in results])
        means = top.mean(axis=0)
        report.statistics["top_means"] = means.tolist()
        report.statistics["reference_top_means"] = ref_means.tolist()
        for i in range(TOP):
            report.add(
                Check(
                    name=f"top{i + 1}_mean",
                    passed=bool(abs(means[i] - ref_means[i]) <= tol),
                    value=float(means[i]),
                    target=float(ref_means[i]),
                    lower=float(ref_means[i] - tol),
                    upper=float(ref_means[i] + tol),
                )
            )
    else:
        envelope = math.log(spec.n) ** 2 / spec.n
        largest = max(r["largest_cycle"] for r in results)
        report.add(
            Check(
                name="subcritical_largest_cycle",
                hard=False,
                passed=largest <= envelope,
                value=largest,
                upper=envelope,
                detail="largest cycle over n against (log n)^2 / n",
            )
        )

    table = Table(
        ["replica", "links", "giant_fraction", "sum_squares", *(f"part{i + 1}" for i in range(TOP))],
        [[i, r["links"], r["giant_fraction"], r["sum_squares"], *r["top"]] for i, r in enumerate(results)],
    )
    return CommandResult(report, {"giant": table})
