"""Core object model: paths, boards, placements, matchings, partitions."""

import pytest

from matchboard.errors import InvalidObjectError, ParseError
from matchboard.model import (
    DyckPath,
    FerrersBoard,
    LabeledDyckPath,
    Matching,
    RookPlacement,
    SetPartition,
    gamma_restriction,
    kappa,
    kappa_inv,
    partition_to_matching,
    statistics,
)


class TestDyckPath:
    def test_heights(self):
        d = DyckPath("EESS")
        assert d.n == 2
        assert d.heights == (0, 1, 2, 1, 0)

    def test_invalid(self):
        with pytest.raises(InvalidObjectError):
            DyckPath("SE")
        with pytest.raises(InvalidObjectError):
            DyckPath("EES")
        with pytest.raises(InvalidObjectError):
            DyckPath("EX")

    def test_round_trip(self):
        d = DyckPath.from_text("ESEESS")
        assert d.to_text() == "ESEESS"
        assert DyckPath.from_heights(d.heights) == d

    def test_peaks_valleys(self):
        d = DyckPath("ESEESS")
        s = statistics(d)
        assert s.peaks == 2
        assert s.valleys == 1
        assert s.returns == 2
        assert s.height == 2
        assert s.eta == 1

    def test_aligned_pairs(self):
        # each east step pairs with the south step closing its arch
        d = DyckPath("EESS")
        assert d.aligned_pairs() == ((0, 4), (1, 3))
        d2 = DyckPath("ESES")
        assert d2.aligned_pairs() == ((0, 2), (2, 4))


class TestFerrersBoard:
    def test_column_heights(self):
        b = FerrersBoard(DyckPath("EEESESSEESSS"))
        assert b.column_heights == (6, 6, 6, 5, 3, 3)

    def test_from_column_heights(self):
        b = FerrersBoard.from_column_heights((6, 6, 6, 5, 3, 3))
        assert b.border.steps == "EEESESSEESSS"

    def test_from_column_heights_invalid(self):
        with pytest.raises(InvalidObjectError):
            FerrersBoard.from_column_heights((2, 3))
        with pytest.raises(InvalidObjectError):
            FerrersBoard.from_column_heights((2, 1, 1))  # first must equal n

    def test_contains(self):
        b = FerrersBoard.from_column_heights((2, 1))
        assert b.contains(1, 2)
        assert not b.contains(2, 2)


class TestRookPlacement:
    def test_parse_round_trip(self):
        p = RookPlacement.from_text("border:EESS;rooks:2,1")
        assert p.rook_rows == (2, 1)
        assert p.to_text() == "border:EESS;rooks:2,1"

    def test_rook_outside_board(self):
        b = FerrersBoard.from_column_heights((2, 1))
        with pytest.raises(InvalidObjectError):
            RookPlacement(b, (1, 2))

    def test_not_a_permutation(self):
        b = FerrersBoard.from_column_heights((2, 2))
        with pytest.raises(InvalidObjectError):
            RookPlacement(b, (1, 1))

    def test_bad_text(self):
        with pytest.raises(ParseError):
            RookPlacement.from_text("EESS;2,1")


class TestMatching:
    def test_shape(self):
        m = Matching(((1, 3), (2, 4)))
        assert m.shape.steps == "EESS"
        assert m.partner(1) == 3

    def test_fixed_points(self):
        m = Matching(((1, 4), (3, 7), (6, 8)), (2, 5))
        assert m.size == 8
        assert not m.is_perfect
        assert m.shape.steps == "EESESS"
        red = m.without_fixed_points()
        assert red.arcs == ((1, 3), (2, 5), (4, 6))

    def test_text_round_trip(self):
        m = Matching.from_text("(1,4)(3,7)(6,8);fp:2,5")
        assert m.to_text() == "(1,4)(3,7)(6,8);fp:2,5"
        assert Matching.from_text("(1,2)").arcs == ((1, 2),)

    def test_invalid(self):
        with pytest.raises(InvalidObjectError):
            Matching(((1, 2), (2, 3)))
        with pytest.raises(InvalidObjectError):
            Matching(((2, 1),))
        with pytest.raises(InvalidObjectError):
            Matching(((1, 3),))  # vertex 2 missing


class TestSetPartition:
    def test_arcs(self):
        p = SetPartition.from_text("{1,3,5}{2}{4,7}{6,8}")
        assert p.arcs == ((1, 3), (3, 5), (4, 7), (6, 8))
        assert p.to_text() == "{1,3,5}{2}{4,7}{6,8}"

    def test_invalid(self):
        with pytest.raises(InvalidObjectError):
            SetPartition(((1, 2), (2, 3)))
        with pytest.raises(InvalidObjectError):
            SetPartition(((1, 3),))


class TestLabeledDyckPath:
    def test_valid(self):
        lp = LabeledDyckPath(DyckPath("ES"), (0, 1, 0))
        assert lp.to_text() == "ES;0,1,0"

    def test_monotonicity(self):
        with pytest.raises(InvalidObjectError):
            LabeledDyckPath(DyckPath("ES"), (0, 2, 0))
        with pytest.raises(InvalidObjectError):
            LabeledDyckPath(DyckPath("ES"), (0, 1))


class TestKappa:
    def test_figure_example(self):
        m = Matching(((1, 6), (2, 12), (3, 4), (5, 7), (8, 10), (9, 11)))
        p = kappa(m)
        assert p.board.border.steps == "EEESESSEESSS"
        assert p.rook_rows == (5, 1, 6, 4, 3, 2)
        assert kappa_inv(p) == m

    def test_smallest(self):
        p = kappa(Matching(((1, 2),)))
        assert p.to_text() == "border:ES;rooks:1"

    def test_rejects_fixed_points(self):
        with pytest.raises(InvalidObjectError):
            kappa(Matching(((1, 3),), (2,)))

    def test_m2(self):
        placements = {kappa(Matching(a)).to_text() for a in
                      (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))}
        assert placements == {
            "border:ESES;rooks:2,1",
            "border:EESS;rooks:2,1",
            "border:EESS;rooks:1,2",
        }


class TestPartitionToMatching:
    def test_figure_example(self):
        p = SetPartition.from_text("{1,3,5}{2}{4,7}{6,8}")
        m = partition_to_matching(p)
        assert m.arcs == ((1, 2), (3, 5), (4, 7), (6, 8))

    def test_all_singletons(self):
        p = SetPartition.from_text("{1}{2}{3}")
        assert partition_to_matching(p).arcs == ()

    def test_one_block(self):
        p = SetPartition.from_text("{1,2,3}")
        assert partition_to_matching(p).arcs == ((1, 2), (3, 4))


class TestGammaRestriction:
    def test_figure_example(self):
        p = RookPlacement.from_text(
            "border:EEESESESEESESSSS;rooks:1,7,8,6,3,2,5,4"
        )
        assert gamma_restriction(p, 7) == (1, 3, 2)

    def test_origin_empty(self):
        p = RookPlacement.from_text("border:EESS;rooks:2,1")
        assert gamma_restriction(p, 0) == ()

    def test_full_square(self):
        # the top-right corner of a square board spans the whole board
        p = RookPlacement.from_text("border:EESS;rooks:2,1")
        assert gamma_restriction(p, 2) == (2, 1)

    def test_bottom_corner_empty(self):
        p = RookPlacement.from_text("border:EESS;rooks:2,1")
        assert gamma_restriction(p, 2 * p.n) == ()
