"""
Tests for GEM and Poisson-Dirichlet sampling and partition statistics.
"""

import math

import numpy as np
import pytest

from loopsoup.core.errors import ParameterError
from loopsoup.pd import (
    PartitionSample,
    count_at_least,
    dump_partitions,
    reference_samples,
    sample_beta1theta,
    sample_gem,
    sample_pd,
    sigma_small,
    sum_of_squares,
    sup_distance,
)


class TestBetaInverse:
    """Tests for the Beta(1, θ) inverse CDF."""

    def test_values(self):
        """Test 1 − (1 − u)^{1/θ} on exact inputs."""
        assert sample_beta1theta(1.0, 0.5) == pytest.approx(0.5)
        assert sample_beta1theta(0.5, 0.75) == pytest.approx(0.9375)
        assert sample_beta1theta(2.0, 0.0) == 0.0

    @pytest.mark.parametrize("theta,u", [(0.0, 0.5), (-1.0, 0.5), (1.0, 1.0), (1.0, -0.1)])
    def test_invalid(self, theta, u):
        """Test parameter validation."""
        with pytest.raises(ParameterError):
            sample_beta1theta(theta, u)


class TestPartitionStatistics:
    """Tests for statistics of a single partition."""

    @pytest.fixture
    def sample(self):
        """Three parts plus a truncated tail of 0.05."""
        return PartitionSample((0.5, 0.3, 0.15), 0.05)

    def test_sigma_small_counts_tail(self, sample):
        """Test that the truncated tail is small mass."""
        assert sigma_small(sample, 0.2) == pytest.approx(0.2)
        assert sigma_small([0.5, 0.3, 0.15], 0.2) == pytest.approx(0.15)

    def test_count_at_least(self, sample):
        """Test the number of parts of size at least ε."""
        assert count_at_least(sample, 0.2) == 2
        assert count_at_least(sample, 0.3) == 2
        assert count_at_least(sample, 0.31) == 1

    def test_sum_of_squares(self, sample):
        """Test Σ p²."""
        assert sum_of_squares(sample) == pytest.approx(0.3625)

    def test_sup_distance_pads_with_zeros(self):
        """Test the sup distance of sorted sequences of unequal length."""
        assert sup_distance([0.5, 0.3, 0.2], [0.7, 0.3]) == pytest.approx(0.2)
        assert sup_distance([0.2, 0.8], [0.8, 0.2]) == 0.0

    def test_total_and_sorting(self, sample):
        """Test the total mass and descending order."""
        assert sample.total == pytest.approx(1.0)
        assert PartitionSample((0.2, 0.7), 0.1).sorted().parts == (0.7, 0.2)

    @pytest.mark.parametrize("eps", [0.0, 1.0])
    def test_eps_range(self, sample, eps):
        """Test that ε must lie in (0, 1)."""
        with pytest.raises(ParameterError):
            sigma_small(sample, eps)

    def test_parts_must_be_positive(self):
        """Test the validation of parts."""
        with pytest.raises(ParameterError):
            PartitionSample((0.5, 0.0))

    def test_dump(self):
        """Test the CSV dump, largest part first."""
        assert dump_partitions([[0.25, 0.75]]) == "0.75,0.25\n"


class TestSampling:
    """Tests for stick-breaking samples."""

    def test_mass_conserved(self):
        """Test that parts and tail sum to one."""
        rng = np.random.Generator(np.random.PCG64(5))
        for _ in range(200):
            p = sample_gem(0.5, 1e-9, rng)
            assert p.total == pytest.approx(1.0, abs=1e-12)
            assert p.truncation_mass < 1e-9

    def test_pd_is_sorted(self):
        """Test that PD samples are in decreasing order."""
        p = sample_pd(1.0, 1e-6, 3)
        assert list(p.parts) == sorted(p.parts, reverse=True)

    def test_reference_samples_reproducible(self):
        """Test that the reference batch depends only on the seed."""
        assert reference_samples(0.5, 20, 1e-6, 9) == reference_samples(0.5, 20, 1e-6, 9)

    @pytest.mark.parametrize("theta,trunc", [(0.0, 1e-6), (0.5, 0.0), (0.5, 1.0)])
    def test_invalid(self, theta, trunc):
        """Test parameter validation."""
        with pytest.raises(ParameterError):
            sample_gem(theta, trunc, 1)

    @pytest.mark.slow
    def test_moments(self):
        """Test E σ(ε) = 1 − (1 − ε)^θ and E Σ p² = 1/(1 + θ) for θ = 1/2."""
        samples = reference_samples(0.5, 20_000, 1e-9, 2024)
        sigma = np.mean([sigma_small(p, 0.1) for p in samples])
        squares = np.mean([sum_of_squares(p) for p in samples])
        assert sigma == pytest.approx(1.0 - math.sqrt(0.9), abs=0.01)
        assert squares == pytest.approx(2.0 / 3.0, abs=0.02)
