"""
split-prob: probability that a new link joins same-orientation vertices.

The cycles at ⌊βn/2⌋ links are cut into segments of ⌊√n⌋ to 2⌊√n⌋
consecutive vertices, fixed for the rest of the round. Each step draws the
first endpoint u uniformly and a uniform vertex w; when w's segment is
untouched, long and inside the cycle of u, the second endpoint is redrawn
uniformly in that segment and its orientation relative to u is recorded. The
link is then added and both endpoints' segments become touched.

Every segment yields at most one probe, so a replica draws fresh
configurations, ``steps`` links each, until it holds ``samples`` probes.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import Any

import numpy as np

from loopsoup.configuration import Mark, link_count, sample_ordered
from loopsoup.core.errors import ParameterError
from loopsoup.core.rng import make_rng
from loopsoup.core.settings import get_settings
from loopsoup.cycles import CycleSet, EventKind, LinkEvent, build, segment_partition
from loopsoup.experiments.runner import CommandResult, Table, new_report, run_replicas
from loopsoup.experiments.schemas import Check, ExperimentSpec
from loopsoup.utils.logging import get_logger
from loopsoup.utils.stats import binomial_estimate, mean_estimate

logger = get_logger(__name__)

NAME = "split-prob"
# 16 replicas of 625 probes: 10^4 probes in total
DEFAULTS: dict[str, Any] = {"n": 100_000, "beta": 1.5, "nu": 0.5, "replicas": 16, "samples": 625, "steps": 500}

MAX_ROUNDS = 2000


def segment_split_probability(cs: CycleSet, u: int, segment: Sequence[int]) -> float:
    """Share of ``segment`` with the orientation of ``u`` (all in the cycle of ``u``)."""
    same = sum(1 for v in segment if cs.relative_direction(u, v) > 0)
    return same / len(segment)


def _round(spec: ExperimentSpec, rng: np.random.Generator, wanted: int) -> dict[str, Any]:
    """One configuration: ``spec.steps`` links, stopping early once ``wanted`` probes are in."""
    n = spec.n
    t = link_count(n, spec.beta, rng, poisson=spec.poisson)
    cs = build(sample_ordered(n, t, spec.nu, rng), spec.backend)
    width = math.isqrt(n)

    segments: list[tuple[int, ...]] = []
    for cycle in cs.cycles():
        segments.extend(segment_partition(cycle, n))
    segment_of = [0] * (n + 1)
    for sid, seg in enumerate(segments):
        for v in seg:
            segment_of[v] = sid
    touched = [False] * len(segments)

    probes = same = noops = 0
    p_exact: list[float] = []
    for _ in range(spec.steps):
        if probes >= wanted:
            break
        u = int(rng.integers(1, n + 1))
        w = int(rng.integers(1, n + 1))
        sid = segment_of[w]
        seg = segments[sid]
        if not touched[sid] and len(seg) >= width and cs.cycle_id(seg[0]) == cs.cycle_id(u):
            w = seg[int(rng.integers(len(seg)))]
            if w != u:
                probes += 1
                p_exact.append(segment_split_probability(cs, u, seg))
                if cs.relative_direction(u, w) > 0:
                    same += 1
        mark = Mark.CROSS if rng.random() < spec.nu else Mark.BAR
        event = LinkEvent.noop() if w == u else cs.apply(u, w, mark)
        if event.kind is EventKind.NOOP:
            noops += 1
        touched[segment_of[u]] = True
        touched[segment_of[w]] = True
    return {"probes": probes, "same": same, "noops": noops, "segments": len(segments), "p_exact": p_exact}


def _replica(spec: ExperimentSpec, index: int, seed: int) -> dict[str, Any]:
    rng = make_rng(seed)
    totals = {"probes": 0, "same": 0, "noops": 0, "rounds": 0}
    p_exact: list[float] = []
    while totals["probes"] < spec.samples and totals["rounds"] < MAX_ROUNDS:
        got = _round(spec, rng, spec.samples - totals["probes"])
        for key in ("probes", "same", "noops"):
            totals[key] += got[key]
        totals["rounds"] += 1
        p_exact.extend(got["p_exact"])
    if totals["probes"] < spec.samples:
        logger.debug("split_prob.round_cap", replica=index, probes=totals["probes"], rounds=totals["rounds"])
    return {**totals, "p_exact": p_exact}


def run(spec: ExperimentSpec, run_id: str) -> CommandResult:
    if not spec.beta > 1.0:
        raise ParameterError(f"split-prob needs a supercritical beta > 1, got {spec.beta}")
    if spec.steps < 1:
        raise ParameterError("split-prob needs at least one step per round")
    settings = get_settings()
    report = new_report(spec, run_id)
    results = run_replicas(_replica, spec)

    probes = sum(r["probes"] for r in results)
    same = sum(r["same"] for r in results)
    target = spec.replicas * spec.samples
    est = binomial_estimate(same, probes, settings.CI_SIGMAS)
    report.statistics.update(
        probes=probes,
        probe_target=target,
        rounds=sum(r["rounds"] for r in results),
        same=same,
        p_hat=est.value,
        stderr=est.stderr,
        noops=sum(r["noops"] for r in results),
    )
    p_exact = [p for r in results for p in r["p_exact"]]
    if p_exact:
        exact = mean_estimate(p_exact, settings.CI_SIGMAS)
        report.statistics.update(p_exact_mean=exact.value, p_exact_max_deviation=max(abs(p - 0.5) for p in p_exact))

    report.add(Check(name="probe_target_reached", passed=probes >= target, value=probes, lower=target))
    if probes == 0:
        report.add(Check(name="probes_collected", passed=False, detail="no untouched long segment was hit"))
    elif spec.nu == 1.0:
        report.add(Check(name="bar_free_same_orientation", passed=same == probes, value=est.value, target=1.0))
    else:
        tol = settings.SPLIT_PROB_TOLERANCE
        report.add(
            Check(
                name="split_probability",
                passed=abs(est.value - 0.5) <= tol,
                value=est.value,
                target=0.5,
                lower=0.5 - tol,
                upper=0.5 + tol,
            )
        )

    table = Table(
        ["replica", "rounds", "probes", "same", "noops"],
        [[i, r["rounds"], r["probes"], r["same"], r["noops"]] for i, r in enumerate(results)],
    )
    return CommandResult(report, {"split_prob": table})
