"""
loopsoup - Test Configuration
إعدادات الاختبار

Shared fixtures and configuration for all tests.
"""

import math
from pathlib import Path

import numpy as np
import pytest

from loopsoup.configuration import Configuration, Link, Mark
from loopsoup.cycles import BACKENDS
from loopsoup.exploration import RingStream

# =============================================================================
# Random streams
# =============================================================================


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so statistical tests are deterministic."""
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture(params=sorted(BACKENDS))
def backend(request) -> str:
    """Every cycle backend; tests using it run once per backend."""
    return request.param


# =============================================================================
# Hand-built configurations
# =============================================================================


@pytest.fixture
def empty_pair() -> Configuration:
    """Two vertices and no links."""
    return Configuration(2, 1.0, 0.5, ())


@pytest.fixture
def cross_pair() -> Configuration:
    """One cross on {1, 2} at phase 0.3."""
    return Configuration(2, 1.0, 1.0, (Link(1, 2, 0.3, Mark.CROSS),))


@pytest.fixture
def bar_pair() -> Configuration:
    """One bar on {1, 2} at phase 0.3."""
    return Configuration(2, 1.0, 0.0, (Link(1, 2, 0.3, Mark.BAR),))


@pytest.fixture
def triangle() -> Configuration:
    """Three vertices with a mix of marks."""
    return Configuration(
        3,
        1.0,
        0.5,
        (
            Link(1, 2, 0.2, Mark.CROSS),
            Link(2, 3, 0.5, Mark.BAR),
            Link(1, 3, 0.7, Mark.CROSS),
            Link(1, 2, 0.9, Mark.BAR),
        ),
    )


# =============================================================================
# Exploration helpers
# =============================================================================


class ScriptedRings(RingStream):
    """Ring stream with a fixed list of (time, vertex, cross) rings, then none."""

    def __init__(self, n: int, rings: list[tuple[float, int, bool]]):
        super().__init__(n, 1.0, 0.5, 0)
        self.script = list(rings)

    def __getitem__(self, i: int) -> tuple[float, int, bool]:
        if i < len(self.script):
            return self.script[i]
        return math.inf, 1, True


@pytest.fixture
def scripted_rings():
    """Factory for scripted ring streams."""
    return ScriptedRings


# =============================================================================
# Output
# =============================================================================


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    """Empty directory for experiment results."""
    path = tmp_path / "run"
    path.mkdir()
    return path
