"""
Tests for split-merge on interval partitions and the coupled chain.
"""

import numpy as np
import pytest

from loopsoup.core.errors import ParameterError
from loopsoup.pd import sample_pd
from loopsoup.splitmerge import (
    Block,
    ChainStats,
    CoupledPartitions,
    blocks_from_parts,
    chain_header,
    chain_row,
    coupled_step,
    lengths,
    marginal_step,
    run_chain,
    run_marginal,
)
from loopsoup.utils.stats import ks_two_sample


class TestMarginalStep:
    """Tests for one split-merge step of a single partition."""

    def test_split_accepted(self):
        """Test a split at u2 inside the highlighted block."""
        p = marginal_step([Block(1.0, 0)], 0.5, 0.3, 0.2, 0.5)
        assert lengths(p) == pytest.approx([0.7, 0.3])

    def test_split_rejected(self):
        """Test that w > θ leaves the partition alone."""
        p = marginal_step([Block(1.0, 0)], 0.5, 0.3, 0.9, 0.5)
        assert lengths(p) == [1.0]

    def test_merge(self):
        """Test that u2 in another block merges it with the highlighted one."""
        p = marginal_step(blocks_from_parts([0.6, 0.4]), 0.1, 0.8, 0.9, 0.5)
        assert lengths(p) == pytest.approx([1.0])

    def test_split_after_move_to_front(self):
        """Test that the highlighted block is split from the left end of [0, 1)."""
        p = marginal_step(blocks_from_parts([0.6, 0.4]), 0.1, 0.3, 0.1, 0.5)
        assert lengths(p) == pytest.approx([0.4, 0.3, 0.3])

    @pytest.mark.parametrize("u,u2,w,theta", [(1.0, 0.1, 0.1, 0.5), (0.1, -0.1, 0.1, 0.5), (0.1, 0.1, 0.1, 1.5)])
    def test_invalid(self, u, u2, w, theta):
        """Test validation of uniforms and θ."""
        with pytest.raises(ParameterError):
            marginal_step([Block(1.0, 0)], u, u2, w, theta)

    def test_mass_conserved(self):
        """Test that a long marginal run keeps total length one."""
        p = run_marginal(blocks_from_parts([0.5, 0.25, 0.25]), 500, 0.5, 11)
        assert sum(lengths(p)) == pytest.approx(1.0, abs=1e-9)
        assert lengths(p) == sorted(lengths(p), reverse=True)

    def test_negative_steps(self):
        """Test that the step count must be non-negative."""
        with pytest.raises(ParameterError):
            run_marginal([Block(1.0, 0)], -1, 0.5, 1)


class TestBlocks:
    """Tests for building blocks from partitions."""

    def test_descending_ids(self):
        """Test descending order and consecutive ids."""
        blocks = blocks_from_parts([0.2, 0.5, 0.3], first_id=4)
        assert lengths(blocks) == [0.5, 0.3, 0.2]
        assert sorted(b.id for b in blocks) == [4, 5, 6]

    def test_empty_rejected(self):
        """Test that a partition needs blocks."""
        with pytest.raises(ParameterError):
            blocks_from_parts([])


class TestCoupledStep:
    """Tests for the coupled step on hand-checked states."""

    def test_identical_split_stays_matched(self):
        """Test that a split of a matched pair gives two matched pairs."""
        cp = coupled_step(CoupledPartitions.identical([1.0]), 0.5, 0.3, 0.2, 0.5)
        assert lengths(cp.Y) == pytest.approx([0.7, 0.3])
        assert all(b.matched for b in (*cp.Y, *cp.Z))
        assert cp.R == 0.0
        assert cp.check() == []

    def test_matched_merge_stays_matched(self):
        """Test that merging two matched pairs keeps the result matched."""
        cp = coupled_step(CoupledPartitions.identical([0.5, 0.5]), 0.2, 0.7, 0.9, 0.5)
        assert lengths(cp.Y) == pytest.approx([1.0])
        assert cp.R == 0.0
        assert cp.check() == []

    def test_merge_with_unmatched_breaks_matching(self):
        """Test that a matched block merged with unmatched mass loses its partner."""
        cp = CoupledPartitions(
            (Block(0.5, 0), Block(0.5, 1, 3)),
            (Block(0.25, 2), Block(0.25, 4), Block(0.5, 3, 1)),
            5,
        )
        after = coupled_step(cp, 0.2, 0.6, 0.9, 0.5)
        assert lengths(after.Y) == pytest.approx([1.0])
        assert after.unmatched("Z") == pytest.approx([0.75, 0.25])
        assert after.R == pytest.approx(1.0)
        assert after.n_eps(0.2) == 3
        assert after.check() == []

    def test_split_against_merge(self):
        """Test Y splitting while Z merges on the same uniforms."""
        cp = CoupledPartitions.independent([1.0], [0.5, 0.5])
        after = coupled_step(cp, 0.1, 0.7, 0.2, 0.5)
        assert lengths(after.Y) == pytest.approx([0.7, 0.3])
        assert lengths(after.Z) == pytest.approx([1.0])
        assert not any(b.matched for b in (*after.Y, *after.Z))
        assert after.next_id == 6

    def test_no_split_is_identity(self):
        """Test that a rejected split inside both highlighted blocks changes nothing."""
        cp = CoupledPartitions.identical([1.0])
        assert coupled_step(cp, 0.5, 0.3, 0.9, 0.5) is cp

    def test_random_chain_consistent(self):
        """Test mass and matching invariants along a random coupled chain."""
        rng = np.random.Generator(np.random.PCG64(17))
        cp = CoupledPartitions.independent([0.6, 0.3, 0.1], [0.5, 0.5])
        for _ in range(300):
            u, u2, w = rng.random(3)
            cp = coupled_step(cp, float(u), float(u2), float(w), 0.5)
            assert cp.check() == []
            assert cp.R + cp.Q == pytest.approx(1.0, abs=1e-9)


class TestChain:
    """Tests for chain runs and their dumps."""

    def test_history_length(self):
        """Test one record per step plus the start."""
        history = run_chain(CoupledPartitions.independent([1.0], [0.5, 0.5]), 20, 0.5, 3, (0.1,))
        assert [s.t for s in history] == list(range(21))
        assert history[0].R == pytest.approx(1.0)
        assert history[0].n_eps == (3,)

    def test_identical_start_never_decouples(self):
        """Test that identical partitions stay fully matched."""
        history = run_chain(CoupledPartitions.identical([0.7, 0.3]), 200, 0.5, 8)
        assert max(s.R for s in history) == 0.0

    def test_row_layout(self):
        """Test the ChainStats CSV columns and one row per record."""
        history = run_chain(CoupledPartitions.independent([1.0], [0.5, 0.5]), 3, 0.5, 1, (0.1,))
        assert chain_header((0.1,)) == ["t", "R", "Q", "y1", "y2", "z1", "N_0.1"]
        row = chain_row(history[0])
        assert row[0] == 0
        assert row[1:6] == pytest.approx([1.0, 0.0, 1.0, 0.0, 0.5])
        assert row[6] == 3
        assert all(len(chain_row(s)) == 7 for s in history)

    def test_negative_steps(self):
        """Test that the step count must be non-negative."""
        with pytest.raises(ParameterError):
            run_chain(CoupledPartitions.identical([1.0]), -1, 0.5, 1)


class TestChainObservables:
    """Tests for the unmatched-length observables of a chain record."""

    def test_hand_values(self):
        """Test R(R − y1 ∨ z1) and R − (y1 + y2) on given lengths."""
        s = ChainStats(t=0, R=0.6, Q=0.4, y1=0.3, y2=0.2, z1=0.5)
        assert s.spread == pytest.approx(0.06)
        assert s.excess == pytest.approx(0.1)

    def test_single_unmatched_block(self):
        """Test that one unmatched block covering R zeroes both observables."""
        s = run_chain(CoupledPartitions.independent([1.0], [0.5, 0.5]), 0, 0.5, 1)[0]
        assert s.spread == pytest.approx(0.0)
        assert s.excess == pytest.approx(0.0)

    def test_identical_start(self):
        """Test that a fully matched pair has nothing unmatched."""
        history = run_chain(CoupledPartitions.identical([0.5, 0.3, 0.2]), 30, 0.5, 4)
        assert all(s.spread == 0.0 and s.excess == 0.0 for s in history)


@pytest.mark.slow
class TestInvariance:
    """Statistical test that the split-merge chain keeps PD(θ)."""

    @pytest.mark.parametrize("theta", [0.5, 1.0])
    def test_largest_block_law(self, theta):
        """Test the largest block at t = 0 against t = 50 with a two-sample KS test."""
        rng = np.random.Generator(np.random.PCG64(2024))
        start = [max(sample_pd(theta, 1e-12, rng).parts) for _ in range(2000)]
        later = []
        for _ in range(2000):
            blocks = run_marginal(blocks_from_parts(sample_pd(theta, 1e-12, rng)), 50, theta, rng)
            later.append(max(lengths(blocks)))
        assert ks_two_sample(start, later, alpha=0.001).passed
