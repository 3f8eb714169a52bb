"""
Experiment Schemas
مخططات التجارب والتقارير
Run specifications, manifests and reports written next to every result set.
"""

from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from loopsoup.cycles import BACKENDS


class BaseSchema(BaseModel):
    """Base schema with common configuration."""

    model_config = ConfigDict(
        from_attributes=True,
        populate_by_name=True,
        str_strip_whitespace=True,
    )


class ExperimentSpec(BaseSchema):
    """Parameters of one command invocation."""

    name: str
    n: int = Field(1000, ge=2)
    beta: float = Field(1.5, gt=0)
    nu: float = Field(0.5, ge=0, le=1)
    theta: float = Field(0.5, gt=0, le=1)
    t_max: float = Field(200.0, gt=0)
    replicas: int = Field(100, ge=1)
    eps: list[float] = Field(default_factory=lambda: [1e-4])
    rho: list[float] = Field(default_factory=lambda: [0.1])
    k_values: list[int] = Field(default_factory=lambda: [1, 2, 5, 10])
    s_values: list[int] = Field(default_factory=lambda: [0, 100, 300, 600])
    t_grid: list[float] = Field(default_factory=lambda: [10.0, 100.0, 1000.0])
    steps: int = Field(50, ge=0, description="split-merge steps or split probes per replica")
    samples: int = Field(10, ge=1, description="vertices or probes drawn per replica")
    fuzz_ops: int = Field(10_000, ge=0, description="apply_link operations in the backend fuzz")
    seed: int = Field(20240607, ge=0)
    out: Path = Path("runs")
    jobs: int = Field(0, ge=0)
    poisson: bool = False
    backend: str = "treap"

    @field_validator("backend")
    @classmethod
    def validate_backend(cls, v: str) -> str:
        if v not in BACKENDS:
            raise ValueError(f"unknown backend {v!r}; choose from {sorted(BACKENDS)}")
        return v

    @field_validator("eps", "rho")
    @classmethod
    def validate_open_unit(cls, v: list[float]) -> list[float]:
        if any(not 0.0 < x < 1.0 for x in v):
            raise ValueError("values must lie in (0, 1)")
        return v

    @model_validator(mode="after")
    def validate_grids(self) -> "ExperimentSpec":
        if any(k < 1 for k in self.k_values):
            raise ValueError("k values must be at least 1")
        if any(s < 0 for s in self.s_values):
            raise ValueError("s values must be non-negative")
        if any(t <= 0 for t in self.t_grid):
            raise ValueError("T grid values must be positive")
        return self


class Check(BaseSchema):
    """
    One verdict. Hard checks decide the exit code; soft checks are reported
    only (asymptotic statements that are not binding at desk scale).
    """

    name: str
    hard: bool = True
    passed: bool
    value: Optional[float] = None
    target: Optional[float] = None
    lower: Optional[float] = None
    upper: Optional[float] = None
    detail: str = ""


class Report(BaseSchema):
    experiment: str
    run_id: str
    statistics: dict[str, Any] = Field(default_factory=dict)
    checks: list[Check] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.hard)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check


class RunManifest(BaseSchema):
    spec: ExperimentSpec
    run_id: str
    seeds: list[int]
    build: str
    started_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    wall_clock_seconds: float = 0.0
    files: dict[str, str] = Field(default_factory=dict, description="file name -> sha256")
