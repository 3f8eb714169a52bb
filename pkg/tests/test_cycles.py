"""
Tests for oriented cycles and the link insertion rules.

Every test taking the ``backend`` fixture runs against both backends.
"""

import math

import pytest

from loopsoup.configuration import Mark, OrderedLinks, sample_ordered
from loopsoup.core.errors import FormatError, ParameterError, UnknownVertexError
from loopsoup.cycles import (
    DOWN,
    UP,
    Cycle,
    Direction,
    EventKind,
    apply_link,
    balance,
    build,
    canonical,
    canonical_multiset,
    dump_cycles,
    get_backend,
    large_component_vertices,
    large_cycle_vertices,
    parse_cycle,
    rescaled_sizes,
    segment_partition,
    singleton_cycles,
)
from loopsoup.experiments.lemma_checks import split_bound


def _build(backend, n, links):
    return build(OrderedLinks.from_seq(n, links), backend)


class TestCycle:
    """Tests for the cycle value type."""

    def test_canonical_rotates_and_orients(self):
        """Test that the minimum vertex comes first and Up."""
        c = Cycle.of((3, UP), (2, DOWN))
        assert canonical(c).seq == ((2, Direction.UP), (3, Direction.DOWN))

    def test_reversal_negates(self):
        """Test that reversal flips order and directions."""
        c = Cycle.of((1, UP), (2, UP), (3, DOWN))
        assert c.reversed().seq == ((3, Direction.UP), (2, Direction.DOWN), (1, Direction.DOWN))

    def test_rotation_and_reversal_are_the_same_cycle(self):
        """Test that every representative has one canonical form."""
        c = Cycle.of((4, UP), (7, DOWN), (5, UP), (6, UP))
        forms = {canonical(c.rotated(k)) for k in range(4)} | {canonical(c.reversed().rotated(k)) for k in range(4)}
        assert len(forms) == 1

    def test_duplicate_vertex_rejected(self):
        """Test that a vertex appears at most once."""
        with pytest.raises(ParameterError):
            Cycle.of((1, UP), (1, DOWN))

    def test_format_parse(self):
        """Test the one-line text form."""
        c = Cycle.of((1, UP), (3, UP), (2, DOWN))
        assert c.format() == "1^+ 3^+ 2^-"
        assert parse_cycle(c.format()) == c

    @pytest.mark.parametrize("line", ["", "1^+ 2", "a^+", "1^x"])
    def test_parse_malformed(self, line):
        """Test that malformed cycle lines raise FormatError."""
        with pytest.raises(FormatError):
            parse_cycle(line)


class TestInsertionRules:
    """Tests for merge, split and twist on small hand-checked cases."""

    def test_singletons(self, backend):
        """Test that the start state is n fixed points, all Up."""
        cs = singleton_cycles(4, backend)
        assert cs.cycle_count == 4
        assert all(cs.direction(v) is Direction.UP for v in range(1, 5))

    def test_cross_merge(self, backend):
        """Test that a cross joins two cycles keeping directions."""
        cs = singleton_cycles(2, backend)
        event = cs.apply(1, 2, Mark.CROSS)
        assert event.kind is EventKind.MERGE
        assert event.sizes == (2,)
        assert cs.canonical_cycles() == [((1, 1), (2, 1))]

    def test_bar_merge(self, backend):
        """Test that a bar joins two cycles with the second reversed."""
        cs = singleton_cycles(2, backend)
        cs.apply(1, 2, Mark.BAR)
        assert cs.canonical_cycles() == [((1, 1), (2, -1))]

    def test_merge_places_other_cycle_after_u(self, backend):
        """Test the listing after merging a pair with a singleton."""
        cs = _build(backend, 3, [((1, 2), Mark.CROSS), ((1, 3), Mark.CROSS)])
        assert cs.canonical_cycles() == [((1, 1), (3, 1), (2, 1))]

    def test_cross_split(self, backend):
        """Test that a cross between same-direction vertices splits."""
        cs = _build(backend, 3, [((1, 2), Mark.CROSS), ((1, 3), Mark.CROSS)])
        event = cs.apply(1, 2, Mark.CROSS)
        assert event.kind is EventKind.SPLIT
        assert sorted(event.sizes) == [1, 2]
        assert event.smaller_part == 1
        assert cs.canonical_cycles() == [((1, 1),), ((2, 1), (3, 1))]

    def test_double_cross_undoes_merge(self, backend):
        """Test that a second cross on the same pair splits it again."""
        cs = _build(backend, 2, [((1, 2), Mark.CROSS)])
        event = cs.apply(2, 1, Mark.CROSS)
        assert event.kind is EventKind.SPLIT
        assert cs.cycle_count == 2

    def test_bar_split(self, backend):
        """Test that a bar between opposite-direction vertices splits."""
        cs = _build(backend, 3, [((1, 2), Mark.BAR), ((1, 3), Mark.CROSS)])
        assert cs.canonical_cycles() == [((1, 1), (3, 1), (2, -1))]
        event = cs.apply(1, 2, Mark.BAR)
        assert event.kind is EventKind.SPLIT
        assert cs.canonical_cycles() == [((1, 1), (2, -1)), ((3, 1),)]

    def test_bar_on_adjacent_opposite_pair_is_twist(self, backend):
        """Test that a bar cutting off a loop away from level 0 leaves the cycles alone."""
        cs = _build(backend, 2, [((1, 2), Mark.BAR)])
        event = cs.apply(1, 2, Mark.BAR)
        assert event.kind is EventKind.TWIST
        assert cs.canonical_cycles() == [((1, 1), (2, -1))]

    def test_bar_twist_flips(self, backend):
        """Test that a bar between same-direction vertices twists."""
        cs = _build(backend, 2, [((1, 2), Mark.CROSS)])
        event = cs.apply(1, 2, Mark.BAR)
        assert event.kind is EventKind.TWIST
        assert event.sizes == (2,)
        assert cs.canonical_cycles() == [((1, 1), (2, -1))]

    def test_cross_twist(self, backend):
        """Test that a cross between opposite-direction vertices twists."""
        cs = _build(backend, 2, [((1, 2), Mark.BAR)])
        event = cs.apply(2, 1, Mark.CROSS)
        assert event.kind is EventKind.TWIST
        assert cs.cycle_count == 1

    def test_apply_link_wrapper(self, backend):
        """Test the functional form returning the set and the event."""
        cs, event = apply_link(singleton_cycles(3, backend), (2, 3), Mark.CROSS)
        assert event.kind is EventKind.MERGE
        assert cs.size_of(3) == 2

    def test_events_recorded(self, backend):
        """Test that build reports one event per link."""
        events = []
        build(sample_ordered(10, 25, 0.5, 1), backend, events)
        assert len(events) == 25

    def test_invalid_link(self, backend):
        """Test that endpoints must differ and exist."""
        cs = singleton_cycles(3, backend)
        with pytest.raises(ParameterError):
            cs.apply(2, 2, Mark.CROSS)
        with pytest.raises(UnknownVertexError):
            cs.apply(1, 4, Mark.CROSS)

    def test_unknown_backend(self):
        """Test that backend names are validated."""
        with pytest.raises(ParameterError):
            get_backend("skiplist")


class TestQueries:
    """Tests for orientation and balance queries."""

    @pytest.fixture
    def cs(self, backend):
        """The cycle (1↑, 3↑, 2↓)."""
        return get_backend(backend).from_cycles(3, [[(1, UP), (3, UP), (2, DOWN)]])

    def test_relative_direction(self, cs):
        """Test orientation relative to another vertex of the cycle."""
        assert cs.relative_direction(1, 3) == 1
        assert cs.relative_direction(1, 2) == -1

    def test_balance(self, cs):
        """Test balance from either orientation."""
        assert balance(cs, 1, 1) == 1
        assert balance(cs, 1, 3) == 1
        assert balance(cs, 2, 3) == -1

    def test_balance_truncated_at_cycle_length(self, cs):
        """Test that k beyond the cycle length inspects the whole cycle."""
        assert cs.same_orientation_count(3, 10) == (2, 3)

    def test_balance_needs_positive_k(self, cs):
        """Test that k must be at least 1."""
        with pytest.raises(ParameterError):
            balance(cs, 1, 0)

    def test_from_cycles_requires_partition(self, backend):
        """Test that from_cycles rejects a non-partition."""
        with pytest.raises(ParameterError):
            get_backend(backend).from_cycles(3, [[(1, UP), (2, UP)]])

    def test_bar_free_links_keep_all_up(self, backend):
        """Test that without bars every vertex stays Up."""
        cs = build(sample_ordered(50, 200, 1.0, 9), backend)
        assert all(cs.direction(v) is Direction.UP for v in range(1, 51))
        assert all(balance(cs, v, 5) == min(5, cs.size_of(v)) for v in range(1, 51))


class TestStatistics:
    """Tests for cycle statistics."""

    def test_rescaled_sizes(self, backend):
        """Test rescaled sizes, optionally restricted to a vertex set."""
        cs = _build(backend, 5, [((1, 2), Mark.CROSS), ((2, 3), Mark.CROSS)])
        assert rescaled_sizes(cs, 5) == pytest.approx([0.6, 0.2, 0.2])
        assert rescaled_sizes(cs, 3, within={1, 2, 3}) == pytest.approx([1.0])

    def test_rescaled_sizes_bad_denominator(self, backend):
        """Test that the denominator must be positive."""
        with pytest.raises(ParameterError):
            rescaled_sizes(singleton_cycles(2, backend), 0)

    def test_segment_partition(self):
        """Test segment widths between ⌊√n⌋ and 2⌊√n⌋."""
        c = Cycle.of(*[(v, UP) for v in range(1, 11)])
        segments = segment_partition(c, 9)
        assert [len(s) for s in segments] == [3, 3, 4]
        assert [v for s in segments for v in s] == list(range(1, 11))

    def test_short_cycle_is_one_segment(self):
        """Test that a cycle shorter than ⌊√n⌋ is a single segment."""
        c = Cycle.of((2, UP), (1, DOWN))
        assert segment_partition(c, 100) == [(1, 2)]

    def test_large_vertex_sets(self, backend):
        """Test component and cycle thresholds."""
        cs = _build(backend, 4, [((1, 2), Mark.CROSS), ((1, 2), Mark.CROSS), ((2, 3), Mark.CROSS)])
        assert large_component_vertices(4, [(1, 2), (1, 2), (2, 3)], 3) == {1, 2, 3}
        assert large_cycle_vertices(cs, 2) == {2, 3}

    def test_dump_cycles(self, backend):
        """Test the text dump, largest cycle first."""
        cs = _build(backend, 3, [((2, 3), Mark.BAR)])
        assert dump_cycles(cs) == "2^+ 3^-\n1^+\n"


class TestBackendAgreement:
    """Fuzz tests: both backends must build identical cycle sets."""

    @pytest.mark.parametrize("seed", range(10))
    def test_random_streams(self, seed):
        """Test event kinds and canonical cycles on random link streams."""
        ordered = sample_ordered(60, 400, 0.5, seed)
        naive = singleton_cycles(60, "naive")
        treap = singleton_cycles(60, "treap")
        for u, w, mark in ordered:
            a = naive.apply(u, w, mark)
            b = treap.apply(u, w, mark)
            assert a.kind is b.kind
            assert sorted(a.sizes) == sorted(b.sizes)
        assert canonical_multiset(naive.cycles()) == canonical_multiset(treap.cycles())

    def test_bar_free_matches_transpositions(self):
        """Test that cross-only streams follow the cycle type of a product of transpositions."""
        n = 40
        ordered = sample_ordered(n, 300, 1.0, 4)
        perm = list(range(n + 1))
        for u, w, _ in ordered:
            perm[u], perm[w] = perm[w], perm[u]
        seen = [False] * (n + 1)
        sizes = []
        for v in range(1, n + 1):
            length = 0
            while not seen[v]:
                seen[v] = True
                v = perm[v]
                length += 1
            if length:
                sizes.append(length)
        cs = build(ordered, "treap")
        assert sorted(cs.cycle_sizes()) == sorted(sizes)


class TestSmallSplits:
    """Statistical test of how often a new link splits off a small cycle."""

    @pytest.mark.parametrize("k", [1, 2, 5])
    def test_frequency_below_bound(self, k):
        """Test the count of splits with a part of size ≤ k against 2k/(n − 1) plus 3σ."""
        n = 200
        steps = small = 0
        for seed in range(20):
            cs = singleton_cycles(n, "treap")
            for u, w, mark in sample_ordered(n, 300, 0.5, seed):
                event = cs.apply(u, w, mark)
                steps += 1
                if event.kind is EventKind.SPLIT and event.smaller_part <= k:
                    small += 1
        bound = split_bound(n, k)
        assert small <= steps * bound + 3.0 * math.sqrt(steps * bound)
