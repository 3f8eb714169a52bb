"""
Replica execution and result files.
تنفيذ التجارب وملفات النتائج

Replica ``i`` of a run receives ``derive_seed(master, i)``; results come back
in replica order whatever the pool size, so aggregates only depend on the
spec and its master seed.
"""

from __future__ import annotations

import csv
import json
import os
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, TypeVar

from loopsoup.core.rng import derive_seed
from loopsoup.core.settings import get_settings
from loopsoup.experiments.schemas import ExperimentSpec, Report, RunManifest
from loopsoup.utils.helpers import build_identifier, file_digest, generate_run_id
from loopsoup.utils.logging import experiment_log

R = TypeVar("R")

ReplicaFn = Callable[[ExperimentSpec, int, int], R]


@dataclass
class Table:
    header: list[str]
    rows: list[Sequence[Any]] = field(default_factory=list)


@dataclass
class CommandResult:
    report: Report
    tables: dict[str, Table] = field(default_factory=dict)
    files: dict[str, str] = field(default_factory=dict)  # extra text files to write


CommandFn = Callable[[ExperimentSpec, str], CommandResult]


def replica_seeds(spec: ExperimentSpec) -> list[int]:
    return [derive_seed(spec.seed, i) for i in range(spec.replicas)]


def resolve_jobs(jobs: int) -> int:
    if jobs > 0:
        return jobs
    workers = get_settings().WORKERS
    return workers if workers > 0 else (os.cpu_count() or 1)


def run_replicas(fn: ReplicaFn[R], spec: ExperimentSpec) -> list[R]:
    """Apply ``fn(spec, index, seed)`` to every replica, serially or in a process pool."""
    seeds = replica_seeds(spec)
    indices = list(range(spec.replicas))
    jobs = min(resolve_jobs(spec.jobs), spec.replicas)
    if jobs <= 1:
        return [fn(spec, i, s) for i, s in zip(indices, seeds)]
    chunksize = max(1, spec.replicas // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(partial(fn, spec), indices, seeds, chunksize=chunksize))


def write_table(path: Path, table: Table) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow(f"{x:.17g}" if isinstance(x, float) else x for x in row)


def execute(command: CommandFn, spec: ExperimentSpec) -> Report:
    """Run one command and write report.json, manifest.json and dist_*.csv under ``spec.out``."""
    run_id = generate_run_id()
    out = Path(spec.out)
    out.mkdir(parents=True, exist_ok=True)

    with experiment_log(spec.name, run_id, master_seed=spec.seed) as log:
        log.info("experiment.started", replicas=spec.replicas, n=spec.n, beta=spec.beta, nu=spec.nu)
        started = time.perf_counter()
        result = command(spec, run_id)
        log.info("experiment.replicas_done", seconds=round(time.perf_counter() - started, 3))

        written: list[Path] = []
        for name, table in result.tables.items():
            path = out / f"dist_{name}.csv"
            write_table(path, table)
            written.append(path)
        for name, text in result.files.items():
            path = out / name
            path.write_text(text, encoding="utf-8")
            written.append(path)

        report_path = out / "report.json"
        payload = result.report.model_dump(mode="json")
        payload["passed"] = result.report.passed
        report_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(report_path)

        manifest = RunManifest(
            spec=spec,
            run_id=run_id,
            seeds=replica_seeds(spec),
            build=build_identifier(),
            wall_clock_seconds=time.perf_counter() - started,
            files={p.name: file_digest(p) for p in written},
        )
        (out / "manifest.json").write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")

        failed = [c.name for c in result.report.checks if c.hard and not c.passed]
        log.info("experiment.finished", passed=result.report.passed, failed=failed, out=str(out))
    return result.report


def new_report(spec: ExperimentSpec, run_id: str) -> Report:
    return Report(experiment=spec.name, run_id=run_id)
