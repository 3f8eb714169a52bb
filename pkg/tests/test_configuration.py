"""
Tests for link configurations and their text format.
"""

import numpy as np
import pytest

from loopsoup.configuration import (
    Configuration,
    Link,
    Mark,
    OrderedLinks,
    dump_configuration,
    link_count,
    parse_configuration,
    read_configuration,
    sample_configuration,
    sample_ordered,
    to_ordered,
    write_configuration,
)
from loopsoup.core.errors import FormatError, ParameterError, PhaseCollisionError
from loopsoup.cycles import build
from loopsoup.utils.stats import ks_two_sample


class TestLink:
    """Tests for single links."""

    def test_endpoints_are_normalised(self):
        """Test that the smaller endpoint is stored first."""
        link = Link(5, 2, 0.4, Mark.BAR)
        assert link.edge == (2, 5)

    def test_loop_edge_rejected(self):
        """Test that a link needs two different endpoints."""
        with pytest.raises(ParameterError):
            Link(3, 3, 0.1, Mark.CROSS)

    @pytest.mark.parametrize("phase", [-0.1, 1.0, 1.5])
    def test_phase_outside_circle_rejected(self, phase):
        """Test that phases must lie in [0, 1)."""
        with pytest.raises(ParameterError):
            Link(1, 2, phase, Mark.CROSS)

    def test_mark_sign(self):
        """Test that a cross keeps and a bar flips the direction."""
        assert Mark.CROSS.sign == 1
        assert Mark.BAR.sign == -1


class TestConfiguration:
    """Tests for configuration containers."""

    def test_vertex_out_of_range(self):
        """Test that links must stay inside 1..n."""
        with pytest.raises(ParameterError):
            Configuration(2, 1.0, 0.5, (Link(1, 3, 0.5, Mark.CROSS),))

    def test_without(self, triangle):
        """Test removing a single link."""
        smaller = triangle.without(1)
        assert len(smaller) == 3
        assert Link(2, 3, 0.5, Mark.BAR) not in smaller.links

    def test_restricted(self, triangle):
        """Test restriction to the first vertices."""
        pair = triangle.restricted(2)
        assert pair.n == 2
        assert {link.edge for link in pair.links} == {(1, 2)}


class TestSampling:
    """Tests for the random configuration models."""

    def test_sample_is_deterministic(self):
        """Test that a seed fixes the configuration."""
        a = sample_configuration(20, 1.5, 0.5, 7)
        b = sample_configuration(20, 1.5, 0.5, 7)
        assert a == b

    def test_phases_distinct_and_nonzero(self):
        """Test that sampled phases never collide and avoid the level line."""
        cfg = sample_configuration(50, 3.0, 0.5, 11)
        phases = [link.phase for link in cfg.links]
        assert len(set(phases)) == len(phases)
        assert all(ph > 0.0 for ph in phases)

    def test_mean_link_count(self):
        """Test that the link count has mean βn/2."""
        counts = [len(sample_configuration(40, 1.5, 0.5, seed)) for seed in range(400)]
        # Poisson(30): standard error of the mean ≈ 0.27
        assert abs(np.mean(counts) - 30.0) < 1.5

    def test_mark_frequency(self):
        """Test that crosses appear with probability ν."""
        ordered = sample_ordered(100, 20_000, 0.25, 3)
        assert abs(ordered.cross.mean() - 0.25) < 0.015

    def test_edges_uniform_and_proper(self):
        """Test that edges join distinct vertices and cover all pairs."""
        ordered = sample_ordered(4, 6000, 0.5, 5)
        assert np.all(ordered.us < ordered.vs)
        pairs = {(u, v) for u, v in ordered.edges()}
        assert len(pairs) == 6

    @pytest.mark.parametrize("n,beta,nu", [(1, 1.0, 0.5), (5, 0.0, 0.5), (5, 1.0, 1.5)])
    def test_invalid_parameters(self, n, beta, nu):
        """Test that out-of-range parameters are rejected."""
        with pytest.raises(ParameterError):
            sample_configuration(n, beta, nu, 0)

    def test_link_count_fixed_and_poisson(self, rng):
        """Test the fixed ⌊βn/2⌋ count and the Poisson switch."""
        assert link_count(1001, 1.5, rng) == 750
        draws = [link_count(1000, 1.5, rng, poisson=True) for _ in range(200)]
        assert len(set(draws)) > 1
        assert abs(np.mean(draws) - 750) < 10


class TestOrdering:
    """Tests for the phase order."""

    def test_to_ordered_sorts_by_phase(self, triangle):
        """Test that links come out in phase order with marks kept."""
        ordered = to_ordered(triangle)
        assert ordered.seq == [
            ((1, 2), Mark.CROSS),
            ((2, 3), Mark.BAR),
            ((1, 3), Mark.CROSS),
            ((1, 2), Mark.BAR),
        ]

    def test_phase_collision(self):
        """Test that equal phases cannot be ordered."""
        cfg = Configuration(3, 1.0, 0.5, (Link(1, 2, 0.5, Mark.CROSS), Link(2, 3, 0.5, Mark.BAR)))
        with pytest.raises(PhaseCollisionError):
            to_ordered(cfg)

    def test_prefix_and_from_seq(self):
        """Test building ordered links by hand and taking a prefix."""
        ordered = OrderedLinks.from_seq(3, [((2, 1), Mark.BAR), ((1, 3), Mark.CROSS)])
        assert list(ordered) == [(1, 2, Mark.BAR), (1, 3, Mark.CROSS)]
        assert len(ordered.prefix(1)) == 1


class TestTextFormat:
    """Tests for the configuration text format."""

    def test_dump_parse(self, triangle):
        """Test that a dump parses back to the same configuration."""
        assert parse_configuration(dump_configuration(triangle)) == triangle

    def test_write_read(self, triangle, tmp_path):
        """Test writing to and reading from a file."""
        path = write_configuration(triangle, tmp_path / "cfg.txt")
        assert read_configuration(path) == triangle

    def test_comments_ignored(self):
        """Test that comment and blank lines are skipped."""
        cfg = parse_configuration("# counterexample\n2 1.0 0.5\n\n1 2 0.25 X\n")
        assert cfg.links == (Link(1, 2, 0.25, Mark.CROSS),)

    @pytest.mark.parametrize("text", ["", "2 1.0\n", "2 1.0 0.5\n1 2 0.5\n", "2 1.0 0.5\n1 2 0.5 Q\n"])
    def test_malformed(self, text):
        """Test that malformed dumps raise FormatError."""
        with pytest.raises(FormatError):
            parse_configuration(text)


@pytest.mark.slow
class TestExchangeability:
    """Poisson configurations read in phase order against uniform link sequences."""

    def test_cycle_statistics_match(self):
        """Test cycle counts and largest cycles of both constructions with two-sample KS tests."""
        n, beta, nu = 30, 2.0, 0.5
        rng = np.random.Generator(np.random.PCG64(99))
        poisson: list[tuple[int, int]] = []
        sequential: list[tuple[int, int]] = []
        for _ in range(1500):
            ordered = to_ordered(sample_configuration(n, beta, nu, rng))
            cs = build(ordered, "treap")
            poisson.append((cs.cycle_count, max(cs.cycle_sizes())))
            cs = build(sample_ordered(n, len(ordered), nu, rng), "treap")
            sequential.append((cs.cycle_count, max(cs.cycle_sizes())))
        for i in range(2):
            assert ks_two_sample([p[i] for p in poisson], [s[i] for s in sequential], alpha=0.001).passed
