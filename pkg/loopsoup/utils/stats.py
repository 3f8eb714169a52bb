"""
Statistical helpers shared by the experiment commands.

Frequencies get normal confidence intervals of ``sigmas`` standard errors;
distribution equality uses the two-sample Kolmogorov-Smirnov test.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class Estimate:
    """Point estimate with a symmetric normal interval."""

    value: float
    stderr: float
    lower: float
    upper: float
    samples: int

    def covers(self, target: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= target <= self.upper + slack


@dataclass(frozen=True)
class KSResult:
    statistic: float
    pvalue: float
    critical: float
    alpha: float
    passed: bool


def binomial_estimate(successes: int, trials: int, sigmas: float = 3.0) -> Estimate:
    if trials <= 0:
        return Estimate(float("nan"), float("nan"), float("nan"), float("nan"), 0)
    p = successes / trials
    se = math.sqrt(max(p * (1.0 - p), 0.0) / trials)
    return Estimate(p, se, p - sigmas * se, p + sigmas * se, trials)


def mean_estimate(values: Sequence[float] | np.ndarray, sigmas: float = 3.0) -> Estimate:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return Estimate(float("nan"), float("nan"), float("nan"), float("nan"), 0)
    mean = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return Estimate(mean, se, mean - sigmas * se, mean + sigmas * se, int(arr.size))


def ks_critical_value(n1: int, n2: int, alpha: float = 0.01) -> float:
    """Asymptotic two-sample KS critical value c(α)·sqrt((n1+n2)/(n1·n2))."""
    c_alpha = math.sqrt(-math.log(alpha / 2.0) / 2.0)
    return c_alpha * math.sqrt((n1 + n2) / (n1 * n2))


def ks_two_sample(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    alpha: float = 0.01,
) -> KSResult:
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.size == 0 or y.size == 0:
        return KSResult(float("nan"), float("nan"), float("nan"), alpha, False)
    res = stats.ks_2samp(x, y)
    critical = ks_critical_value(x.size, y.size, alpha)
    return KSResult(
        statistic=float(res.statistic),
        pvalue=float(res.pvalue),
        critical=critical,
        alpha=alpha,
        passed=bool(res.statistic < critical),
    )


def empirical_tail(values: Sequence[float] | np.ndarray, grid: Sequence[float]) -> list[float]:
    """P(X ≥ t) for each t of ``grid``."""
    arr = np.sort(np.asarray(values, dtype=float))
    if arr.size == 0:
        return [float("nan")] * len(grid)
    idx = np.searchsorted(arr, np.asarray(grid, dtype=float), side="left")
    return [float(v) for v in (arr.size - idx) / arr.size]


def loglinear_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against x over the positive entries of ``ys``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    keep = y > 0
    if keep.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(x[keep], np.log(y[keep]), 1)
    return float(slope)


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    keep = (x > 0) & (y > 0)
    if keep.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)
    return float(slope)
