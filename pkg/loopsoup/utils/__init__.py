"""
Shared utilities: logging, helpers, statistics and union-find.
"""

from loopsoup.utils.helpers import build_identifier, deep_merge, file_digest, generate_run_id
from loopsoup.utils.logging import configure_default_logging, experiment_log, get_logger, setup_logging
from loopsoup.utils.stats import (
    Estimate,
    KSResult,
    binomial_estimate,
    ks_critical_value,
    ks_two_sample,
    mean_estimate,
)
from loopsoup.utils.unionfind import UnionFind

__all__ = [
    "build_identifier",
    "deep_merge",
    "file_digest",
    "generate_run_id",
    "configure_default_logging",
    "experiment_log",
    "get_logger",
    "setup_logging",
    "Estimate",
    "KSResult",
    "binomial_estimate",
    "ks_critical_value",
    "ks_two_sample",
    "mean_estimate",
    "UnionFind",
]
