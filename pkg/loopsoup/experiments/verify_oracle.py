"""
verify-oracle: incremental cycle construction against the loop tracer.

Each replica samples a Poisson configuration with n uniform in [2, spec.n],
β uniform in [0.5, 3] and ν cycling through {0, ½, 1}, then compares the
canonical cycles read off the traced loops with those built link by link. An
exhaustive pass over every sequence of at most three links on two vertices
and a naive-against-treap backend fuzz complete the check.
"""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import Any, Optional

from loopsoup.configuration import (
    Configuration,
    Link,
    Mark,
    dump_configuration,
    sample_configuration,
    sample_ordered,
    to_ordered,
    write_configuration,
)
from loopsoup.core.errors import OracleMismatchError
from loopsoup.core.rng import make_rng
from loopsoup.cycles import EventKind, build, canonical_multiset, singleton_cycles
from loopsoup.experiments.runner import CommandResult, Table, new_report, run_replicas
from loopsoup.experiments.schemas import Check, ExperimentSpec
from loopsoup.tracer import cycles_at_zero
from loopsoup.utils.logging import get_logger

logger = get_logger(__name__)

NAME = "verify-oracle"
DEFAULTS: dict[str, Any] = {"n": 40, "replicas": 1000, "fuzz_ops": 100_000}

NU_CYCLE = (0.0, 0.5, 1.0)
FUZZ_N = 1000
FUZZ_CHECK_EVERY = 1000


def cycles_agree(cfg: Configuration, backend: str = "treap") -> bool:
    traced = cycles_at_zero(cfg).canonical_cycles()
    built = build(to_ordered(cfg), backend).canonical_cycles()
    return traced == built


def minimise(cfg: Configuration, backend: str = "treap") -> Configuration:
    """Greedily delete links while the tracer and the build still disagree."""
    current = cfg
    shrunk = True
    while shrunk:
        shrunk = False
        for i in range(len(current)):
            candidate = current.without(i)
            if not cycles_agree(candidate, backend):
                current = candidate
                shrunk = True
                break
    return current


def verify_configuration(
    cfg: Configuration, backend: str = "treap", dump_dir: Optional[Path] = None
) -> None:
    """
    Raise ``OracleMismatchError`` when the two constructions differ. The error
    carries the minimised configuration, also written under ``dump_dir`` if given.
    """
    if cycles_agree(cfg, backend):
        return
    small = minimise(cfg, backend)
    dump = dump_configuration(small)
    logger.debug("oracle.mismatch", n=cfg.n, links=len(cfg), minimised=len(small))
    path = None
    if dump_dir is not None:
        path = write_configuration(small, Path(dump_dir) / "counterexample.txt")
    raise OracleMismatchError(
        f"cycles differ on n={cfg.n} with {len(cfg)} links (minimised to {len(small)})",
        counterexample=path,
        dump=dump,
    )


def _replica(spec: ExperimentSpec, index: int, seed: int) -> dict[str, Any]:
    rng = make_rng(seed)
    n = int(rng.integers(2, max(spec.n, 2) + 1))
    beta = float(rng.uniform(0.5, 3.0))
    nu = NU_CYCLE[index % len(NU_CYCLE)]
    cfg = sample_configuration(n, beta, nu, rng)
    events: list = []
    build(to_ordered(cfg), spec.backend, events)
    twists = sum(1 for ev in events if ev.kind is EventKind.TWIST)
    counterexample: Optional[str] = None
    try:
        verify_configuration(cfg, spec.backend)
    except OracleMismatchError as exc:
        counterexample = exc.dump
    return {
        "index": index,
        "n": n,
        "beta": beta,
        "nu": nu,
        "links": len(cfg),
        "twists": twists,
        "mismatch": counterexample is not None,
        "counterexample": counterexample,
    }


def exhaustive_two_vertex(backend: str = "treap", max_links: int = 3) -> list[Configuration]:
    """Every mark sequence of up to ``max_links`` links on {1, 2}; returns the failures."""
    failures = []
    for count in range(max_links + 1):
        phases = [(i + 1) / (count + 1) for i in range(count)]
        for marks in itertools.product((Mark.CROSS, Mark.BAR), repeat=count):
            links = tuple(Link(1, 2, ph, m) for ph, m in zip(phases, marks))
            cfg = Configuration(2, 1.0, 0.5, links)
            if not cycles_agree(cfg, backend):
                failures.append(cfg)
    return failures


def backend_fuzz(n: int, ops: int, nu: float, seed: int) -> int:
    """Number of checkpoints where the naive and treap backends disagree on a random link stream."""
    if ops == 0:
        return 0
    ordered = sample_ordered(n, ops, nu, seed)
    naive = singleton_cycles(n, "naive")
    treap = singleton_cycles(n, "treap")
    mismatches = 0
    for i, (u, w, mark) in enumerate(ordered, start=1):
        a = naive.apply(u, w, mark)
        b = treap.apply(u, w, mark)
        if a.kind is not b.kind or sorted(a.sizes) != sorted(b.sizes):
            mismatches += 1
        if i % FUZZ_CHECK_EVERY == 0 or i == ops:
            if canonical_multiset(naive.cycles()) != canonical_multiset(treap.cycles()):
                mismatches += 1
    return mismatches


def run(spec: ExperimentSpec, run_id: str) -> CommandResult:
    report = new_report(spec, run_id)
    results = run_replicas(_replica, spec)

    mismatched = [r for r in results if r["mismatch"]]
    bar_free_twists = sum(r["twists"] for r in results if r["nu"] == 1.0)
    exhaustive = exhaustive_two_vertex(spec.backend)
    fuzz = backend_fuzz(FUZZ_N, spec.fuzz_ops, 0.5, spec.seed)

    report.statistics.update(
        configurations=len(results),
        mismatches=len(mismatched),
        exhaustive_failures=len(exhaustive),
        bar_free_twists=bar_free_twists,
        fuzz_ops=spec.fuzz_ops,
        fuzz_mismatches=fuzz,
    )
    report.add(Check(name="oracle_mismatches", passed=not mismatched, value=len(mismatched), target=0))
    report.add(Check(name="exhaustive_two_vertex", passed=not exhaustive, value=len(exhaustive), target=0))
    report.add(Check(name="bar_free_twists", passed=bar_free_twists == 0, value=bar_free_twists, target=0))
    report.add(Check(name="backend_fuzz", passed=fuzz == 0, value=fuzz, target=0))

    files: dict[str, str] = {}
    for r in mismatched:
        files[f"counterexample_{r['index']}.txt"] = r["counterexample"]
    for i, cfg in enumerate(exhaustive):
        files[f"counterexample_exhaustive_{i}.txt"] = dump_configuration(cfg)
    if files:
        report.statistics["counterexamples"] = sorted(files)

    table = Table(
        ["replica", "n", "beta", "nu", "links", "twists", "mismatch"],
        [[r["index"], r["n"], r["beta"], r["nu"], r["links"], r["twists"], int(r["mismatch"])] for r in results],
    )
    return CommandResult(report, {"oracle": table}, files)
