"""Experiment commands, keyed by their command-line name."""

from types import ModuleType

from loopsoup.experiments import (
    balance,
    explore_stats,
    giant_cycles,
    lemma_checks,
    pd_invariance,
    split_prob,
    verify_oracle,
)

COMMANDS: dict[str, ModuleType] = {
    module.NAME: module
    for module in (
        verify_oracle,
        giant_cycles,
        balance,
        split_prob,
        explore_stats,
        lemma_checks,
        pd_invariance,
    )
}

__all__ = ["COMMANDS"]
