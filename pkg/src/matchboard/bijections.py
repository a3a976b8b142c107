"""Bijections between pattern-avoiding placements and structured path sets.

A 321-avoiding placement maps to a pair of noncrossing paths through the
sequence j_i = 2*lis - height; a 213-avoiding placement maps through the
minimal board containing its rooks.  312-avoiding placements map to labeled
Dyck paths carrying increasing-subsequence lengths.  Matchings with fixed
points and permutations enter through kappa_prime and chi.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .errors import InvalidObjectError, ParseError, PatternViolationError
from .model import (
    DyckPath,
    FerrersBoard,
    LabeledDyckPath,
    Matching,
    RookPlacement,
    gamma_restriction,
    kappa,
)
from .patterns import Pattern, find_arc_occurrence, lis_labels, perm_contains

__all__ = [
    "NoncrossingPathPair",
    "LabeledPathClass",
    "delta321",
    "delta321_by_switch",
    "delta321_inv",
    "delta213",
    "delta213_inv",
    "pi_labeling",
    "kappa_prime",
    "chi",
    "board_minimal",
    "minimal_board",
    "j_sequence",
    "diagonal_property",
    "zero_condition",
    "peak_property",
    "e2_member",
    "a2_member",
    "check_fixed_point_class",
]


@dataclass(frozen=True)
class NoncrossingPathPair:
    """A pair of equal-length border paths with the bottom one never rising
    above the top one."""

    bottom: DyckPath
    top: DyckPath

    def __post_init__(self):
        if self.bottom.n != self.top.n:
            raise InvalidObjectError("paths in a pair must have equal semilength")
        for jb, jt in zip(self.bottom.heights, self.top.heights):
            if jb > jt:
                raise InvalidObjectError(
                    f"bottom path {self.bottom.steps} rises above top {self.top.steps}"
                )

    @property
    def n(self) -> int:
        return self.top.n

    def ends_with_south(self, k: int) -> bool:
        suffix = "S" * k
        return self.bottom.steps.endswith(suffix) and self.top.steps.endswith(suffix)

    def to_text(self) -> str:
        return f"bottom:{self.bottom.steps};top:{self.top.steps}"

    @classmethod
    def from_text(cls, text: str) -> "NoncrossingPathPair":
        parts = text.strip().split(";")
        if len(parts) != 2 or not parts[0].startswith("bottom:") or not parts[1].startswith("top:"):
            raise ParseError(f"bad path-pair encoding {text!r}")
        try:
            return cls(
                DyckPath.from_text(parts[0][len("bottom:"):]),
                DyckPath.from_text(parts[1][len("top:"):]),
            )
        except InvalidObjectError as e:
            raise ParseError(str(e)) from e


def _require_avoiding(p: RookPlacement, pattern: Pattern, map_name: str) -> None:
    for v in p.board.border.peak_indices():
        perm = gamma_restriction(p, v)
        if perm_contains(perm, pattern):
            raise PatternViolationError(
                f"{map_name} needs a {pattern.to_text()}-avoiding placement; "
                f"the restriction at border vertex V_{v} contains it",
                vertices=(v,),
            )


def j_sequence(p: RookPlacement) -> tuple[int, ...]:
    """The sequence 2*lis_i - h_i along the border."""
    hs = p.board.border.heights
    return tuple(2 * l - h for l, h in zip(lis_labels(p), hs))


def delta321(p: RookPlacement) -> NoncrossingPathPair:
    """Bottom path with height sequence 2*lis_i - h_i under the board border."""
    _require_avoiding(p, Pattern((3, 2, 1)), "delta321")
    bottom = DyckPath.from_heights(j_sequence(p))
    return NoncrossingPathPair(bottom, p.board.border)


def delta321_by_switch(p: RookPlacement) -> NoncrossingPathPair:
    """Same map as delta321, described by flipping every border step whose
    two endpoints carry the same lis label."""
    _require_avoiding(p, Pattern((3, 2, 1)), "delta321_by_switch")
    labels = lis_labels(p)
    flipped = []
    for idx, ch in enumerate(p.board.border.steps):
        if labels[idx] == labels[idx + 1]:
            flipped.append("S" if ch == "E" else "E")
        else:
            flipped.append(ch)
    return NoncrossingPathPair(DyckPath("".join(flipped)), p.board.border)


@lru_cache(maxsize=None)
def _delta321_table(top_steps: str) -> dict[str, tuple[int, ...]]:
    # forward images of every 321-avoiding placement on the board
    from .families import placements_on_board

    board = FerrersBoard(DyckPath(top_steps))
    table: dict[str, tuple[int, ...]] = {}
    for p in placements_on_board(board):
        try:
            pair = delta321(p)
        except PatternViolationError:
            continue
        table[pair.bottom.steps] = p.rook_rows
    return table


def delta321_inv(pair: NoncrossingPathPair) -> RookPlacement:
    """Inverse of delta321, realized as a per-board lookup of the forward
    map over all 321-avoiding placements."""
    table = _delta321_table(pair.top.steps)
    rows = table.get(pair.bottom.steps)
    if rows is None:
        raise InvalidObjectError(f"{pair.to_text()} is not a delta321 image")
    return RookPlacement(FerrersBoard(pair.top), rows)


def minimal_board(rook_rows) -> FerrersBoard:
    """Smallest Ferrers board containing rooks at (c, rook_rows[c-1])."""
    rows = list(rook_rows)
    heights = []
    running = 0
    for r in reversed(rows):
        running = max(running, r)
        heights.append(running)
    heights.reverse()
    return FerrersBoard.from_column_heights(heights)


def delta213(p: RookPlacement) -> NoncrossingPathPair:
    """Bottom path given by the border of the smallest board containing the
    rooks."""
    _require_avoiding(p, Pattern((2, 1, 3)), "delta213")
    return NoncrossingPathPair(minimal_board(p.rook_rows).border, p.board.border)


def delta213_inv(pair: NoncrossingPathPair) -> RookPlacement:
    """Rebuild the rooks from the bottom board, filling rows top to bottom
    with a rook in the rightmost unused column, then embed in the top board."""
    inner = FerrersBoard(pair.bottom)
    n = inner.n
    heights = inner.column_heights
    used: set[int] = set()
    rook_rows = [0] * n
    for r in range(n, 0, -1):
        col = max(c for c in range(1, n + 1) if heights[c - 1] >= r and c not in used)
        used.add(col)
        rook_rows[col - 1] = r
    return RookPlacement(FerrersBoard(pair.top), tuple(rook_rows))


def pi_labeling(p: RookPlacement) -> LabeledDyckPath:
    """Label each border vertex with its increasing-subsequence length."""
    _require_avoiding(p, Pattern((3, 1, 2)), "pi_labeling")
    return LabeledDyckPath(p.board.border, lis_labels(p))


_FP_CONFIGS = {
    # pattern -> (arc slots, fixed slot) among x1 < ... < x5
    (1, 2, 3): (((1, 5), (2, 4)), 3),
    (2, 1, 3): (((1, 5), (3, 4)), 2),
    (3, 2, 1): (((1, 4), (2, 5)), 3),
}


def check_fixed_point_class(m: Matching, tau: Pattern) -> None:
    """Raise unless m belongs to the fixed-point class of tau: removing the
    fixed points leaves a tau-avoiding matching, and no five vertices place
    a fixed point in the forbidden slot between two specific arcs."""
    if tau.perm not in _FP_CONFIGS:
        raise InvalidObjectError(f"no fixed-point class for pattern {tau.to_text()}")
    occ = find_arc_occurrence(m.arcs, tau)
    if occ is not None:
        raise PatternViolationError(
            f"matching contains {tau.to_text()} at vertices {occ}", vertices=occ
        )
    (slots_a, slots_b), fixed_slot = _FP_CONFIGS[tau.perm]
    for a1, a2 in m.arcs:
        for b1, b2 in m.arcs:
            for f in m.fixed_points:
                xs = sorted((a1, a2, b1, b2, f))
                if len(set(xs)) != 5:
                    continue
                pos = {v: i + 1 for i, v in enumerate(xs)}
                if (
                    pos[f] == fixed_slot
                    and (pos[a1], pos[a2]) == slots_a
                    and (pos[b1], pos[b2]) == slots_b
                ):
                    raise PatternViolationError(
                        f"forbidden fixed point {f} between arcs ({a1},{a2}) and "
                        f"({b1},{b2}) for pattern {tau.to_text()}",
                        vertices=tuple(xs),
                    )


def kappa_prime(m: Matching, tau) -> RookPlacement:
    """Close up the k fixed points with k new pairwise-crossing arcs to the
    new top vertices, then apply kappa.  Defined on the fixed-point class of
    tau for tau in {321, 213}."""
    tau = Pattern.from_text(tau) if isinstance(tau, str) else tau
    if tau.perm not in {(3, 2, 1), (2, 1, 3)}:
        raise InvalidObjectError("kappa_prime is defined for patterns 321 and 213")
    check_fixed_point_class(m, tau)
    n, k = m.n, len(m.fixed_points)
    size = 2 * n + 2 * k
    new_arcs = tuple(
        (x, size + 1 - i) for i, x in enumerate(m.fixed_points, start=1)
    )
    return kappa(Matching(m.arcs + new_arcs))


def board_minimal(p: RookPlacement) -> bool:
    """True when the board is the smallest one containing the rooks, i.e.
    every peak corner square holds a rook."""
    verts = p.board.border.vertices
    return all(
        p.rook_row(verts[i][0]) == verts[i][1]
        for i in p.board.border.peak_indices()
    )


def chi(perm) -> RookPlacement:
    """Place rooks at (i, perm(i)) on the smallest board containing them."""
    rows = tuple(int(v) for v in perm)
    if sorted(rows) != list(range(1, len(rows) + 1)):
        raise InvalidObjectError(f"{rows} is not a permutation")
    return RookPlacement(minimal_board(rows), rows)


def diagonal_property(lp: LabeledDyckPath) -> bool:
    """Labels weakly decrease along every aligned vertex pair."""
    labels = lp.labels
    return all(labels[i] >= labels[j] for i, j in lp.path.aligned_pairs())


def zero_condition(lp: LabeledDyckPath) -> bool:
    """Labels vanish exactly at the diagonal-touching vertices."""
    return all(
        (a == 0) == (h == 0) for a, h in zip(lp.labels, lp.path.heights)
    )


def peak_property(lp: LabeledDyckPath) -> bool:
    """Around every peak the labels read a-1, a, a-1."""
    labels = lp.labels
    return all(
        labels[i - 1] == labels[i] - 1 == labels[i + 1]
        for i in lp.path.peak_indices()
    )


class LabeledPathClass(Enum):
    """Membership predicates for the structured labeled-path families."""

    L = "L"
    K = "K"
    K_LT2 = "K_lt2"
    L_LT3 = "L_lt3"
    K_PEAK = "K_peak"
    L_PEAK = "L_peak"

    def contains(self, lp: LabeledDyckPath) -> bool:
        if any(a < 0 for a in lp.labels) or not diagonal_property(lp):
            return False
        in_l = zero_condition(lp)
        in_k = lp.labels[-1] == 0
        if self is LabeledPathClass.L:
            return in_l
        if self is LabeledPathClass.K:
            return in_k
        if self is LabeledPathClass.K_LT2:
            return in_k and max(lp.labels, default=0) < 2
        if self is LabeledPathClass.L_LT3:
            return in_l and max(lp.labels, default=0) < 3
        if self is LabeledPathClass.K_PEAK:
            return in_k and peak_property(lp)
        return in_l and peak_property(lp)


def e2_member(pair: NoncrossingPathPair) -> bool:
    """Bottom heights forced by top heights below 5: h in {1,3} forces j=1,
    h in {0,4} forces j=0, h=2 allows j in {0,2}."""
    for j, h in zip(pair.bottom.heights, pair.top.heights):
        if h >= 5:
            return False
        if h in (1, 3) and j != 1:
            return False
        if h in (0, 4) and j != 0:
            return False
        if h == 2 and j not in (0, 2):
            return False
    return True


def a2_member(pair: NoncrossingPathPair) -> bool:
    """No bottom-path peak lies strictly south and strictly west of a vertex
    of the top path."""
    n = pair.n
    top_heights = FerrersBoard(pair.top).column_heights
    verts = pair.bottom.vertices
    for i in pair.bottom.peak_indices():
        x, y = verts[i]
        if x < n and top_heights[x] > y:
            return False
    return True
