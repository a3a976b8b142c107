"""Pattern containment on permutations, placements, and arc diagrams."""

import random

import pytest

from matchboard.errors import InvalidObjectError, ParseError
from matchboard.model import Matching, RookPlacement, SetPartition
from matchboard.patterns import (
    S3_PATTERNS,
    Pattern,
    find_arc_occurrence,
    length3_mask,
    lis_labels,
    lis_length,
    mask_for,
    matching_avoids,
    parse_pattern_set,
    partition_avoids,
    perm_contains,
    placement_avoids,
)


class TestPattern:
    def test_parse(self):
        assert Pattern.from_text("312").perm == (3, 1, 2)
        with pytest.raises(ParseError):
            Pattern.from_text("3x2")
        with pytest.raises(ParseError):
            Pattern.from_text("311")
        with pytest.raises(InvalidObjectError):
            Pattern((1, 3))

    def test_parse_set(self):
        s = parse_pattern_set("123, 321")
        assert s == frozenset({Pattern((1, 2, 3)), Pattern((3, 2, 1))})
        with pytest.raises(ParseError):
            parse_pattern_set(" , ")


class TestPermContains:
    def test_basic(self):
        assert perm_contains((2, 4, 1, 3), Pattern((2, 1)))
        assert perm_contains((2, 4, 1, 3), Pattern((3, 1, 2)))
        assert not perm_contains((2, 4, 1, 3), Pattern((1, 2, 3)))
        assert not perm_contains((2, 4, 1, 3), Pattern((3, 2, 1)))
        assert not perm_contains((1, 2), Pattern((1, 2, 3)))
        assert perm_contains((1,), Pattern(()))

    def test_matches_brute_force(self):
        rng = random.Random(7)
        from itertools import combinations

        def brute(p, t):
            return any(
                all(
                    (t[a] < t[b]) == (sub[a] < sub[b])
                    for a in range(len(t))
                    for b in range(len(t))
                )
                for sub in combinations(p, len(t))
            )

        for _ in range(50):
            n = rng.randrange(1, 8)
            p = list(range(1, n + 1))
            rng.shuffle(p)
            for t in S3_PATTERNS:
                assert perm_contains(p, t) == brute(tuple(p), t.perm)


class TestArcOccurrence:
    def test_nesting_is_123(self):
        arcs = ((1, 6), (2, 5), (3, 4))
        occ = find_arc_occurrence(arcs, Pattern((1, 2, 3)))
        assert occ == (1, 2, 3, 4, 5, 6)
        assert find_arc_occurrence(arcs, Pattern((3, 2, 1))) is None

    def test_crossing_is_321(self):
        arcs = ((1, 4), (2, 5), (3, 6))
        assert find_arc_occurrence(arcs, Pattern((3, 2, 1))) == (1, 2, 3, 4, 5, 6)
        assert find_arc_occurrence(arcs, Pattern((1, 2, 3))) is None

    def test_openers_before_closers(self):
        # (1,2) and (3,4) are disjoint in time, so no length-2 pattern fits
        arcs = ((1, 2), (3, 4))
        for t in ((1, 2), (2, 1)):
            assert find_arc_occurrence(arcs, Pattern(t)) is None

    def test_alignment_is_21(self):
        arcs = ((1, 3), (2, 4))
        assert find_arc_occurrence(arcs, Pattern((2, 1))) == (1, 2, 3, 4)
        assert find_arc_occurrence(arcs, Pattern((1, 2))) is None

    def test_matching_and_partition_wrappers(self):
        m = Matching(((1, 4), (2, 5), (3, 6)))
        assert not matching_avoids(m, Pattern((3, 2, 1)))
        assert matching_avoids(m, Pattern((1, 2, 3)))
        p = SetPartition.from_text("{1,3,5}{2,4}")
        assert partition_avoids(p, Pattern((1, 2, 3)))
        assert not partition_avoids(p, Pattern((2, 1)))

    def test_fixed_points_ignored(self):
        # the two arcs cross, giving 21 but not 12; the fixed points at 2
        # and 5 never join in
        m = Matching(((1, 4), (3, 6)), (2, 5))
        assert matching_avoids(m, Pattern((1, 2)))
        assert not matching_avoids(m, Pattern((2, 1)))


class TestLength3Mask:
    def test_against_direct_search(self):
        rng = random.Random(21)
        for _ in range(40):
            n = rng.randrange(1, 7)
            verts = list(range(1, 2 * n + 1))
            rng.shuffle(verts)
            arcs = tuple(
                tuple(sorted(verts[2 * i : 2 * i + 2])) for i in range(n)
            )
            mask = length3_mask(arcs)
            for i, t in enumerate(S3_PATTERNS):
                found = find_arc_occurrence(arcs, t) is not None
                assert bool(mask >> i & 1) == found

    def test_mask_for(self):
        assert mask_for([S3_PATTERNS[0]]) == 1
        assert mask_for(S3_PATTERNS) == 63
        with pytest.raises(InvalidObjectError):
            mask_for([Pattern((2, 1))])


class TestPlacementAvoids:
    def test_peak_scan_equals_full_scan(self):
        from matchboard.families import gen

        for p in gen("placement", 4):
            for t in S3_PATTERNS:
                assert placement_avoids(p, t) == placement_avoids(
                    p, t, all_vertices=True
                )

    def test_square_board(self):
        p = RookPlacement.from_text("border:EEESSS;rooks:1,2,3")
        assert not placement_avoids(p, Pattern((1, 2, 3)))
        assert placement_avoids(p, Pattern((2, 1)))


class TestLis:
    def test_lis_length(self):
        assert lis_length((3, 1, 4, 1, 5, 9, 2, 6)) == 4
        assert lis_length(()) == 0

    def test_labels_monotone_step(self):
        # labels change by at most one along the border and match the path
        p = RookPlacement.from_text("border:EESESS;rooks:2,3,1")
        labels = lis_labels(p)
        assert labels[0] == 0 and labels[-1] == 0
        assert all(abs(a - b) <= 1 for a, b in zip(labels, labels[1:]))
