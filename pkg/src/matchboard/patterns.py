"""Pattern containment for permutations, placements, matchings, and
partitions, plus the increasing-subsequence labels used downstream.

Arc-diagram containment: a matching or partition contains a pattern t of
length k when 2k distinct vertices x_1 < ... < x_2k carry the arcs
(x_a, x_{2k+1-t(a)}) for all a.  The first k chosen vertices are then
necessarily openers and the last k closers.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from itertools import combinations

from .errors import InvalidObjectError, ParseError
from .model import Matching, RookPlacement, SetPartition, gamma_restriction

__all__ = [
    "Pattern",
    "S3_PATTERNS",
    "perm_contains",
    "placement_avoids",
    "matching_avoids",
    "partition_avoids",
    "find_arc_occurrence",
    "length3_mask",
    "mask_for",
    "lis_labels",
    "lis_length",
    "parse_pattern_set",
]


@dataclass(frozen=True)
class Pattern:
    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(v) for v in self.perm))
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise InvalidObjectError(f"{self.perm} is not a permutation of [k]")

    def __len__(self):
        return len(self.perm)

    def to_text(self) -> str:
        return "".join(str(v) for v in self.perm)

    @classmethod
    def from_text(cls, text: str) -> "Pattern":
        text = text.strip()
        if not text.isdigit():
            raise ParseError(f"bad pattern {text!r}")
        try:
            return cls(tuple(int(ch) for ch in text))
        except InvalidObjectError as e:
            raise ParseError(str(e)) from e


S3_PATTERNS = tuple(
    Pattern(p) for p in [(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)]
)
_S3_INDEX = {p.perm: i for i, p in enumerate(S3_PATTERNS)}


def parse_pattern_set(text: str) -> frozenset[Pattern]:
    """Parse a comma-separated pattern list such as '123,321'."""
    items = [tok for tok in text.split(",") if tok.strip()]
    if not items:
        raise ParseError(f"empty pattern set {text!r}")
    return frozenset(Pattern.from_text(tok) for tok in items)


def perm_contains(p, t) -> bool:
    """True when some subsequence of p is order-isomorphic to t."""
    pv = p.perm if isinstance(p, Pattern) else tuple(p)
    tv = t.perm if isinstance(t, Pattern) else tuple(t)
    k = len(tv)
    if k == 0:
        return True
    if k > len(pv):
        return False

    def extend(chosen: tuple[int, ...], start: int) -> bool:
        a = len(chosen)
        if a == k:
            return True
        for pos in range(start, len(pv) - (k - a) + 1):
            val = pv[pos]
            ok = True
            for b, prev in enumerate(chosen):
                if (tv[b] < tv[a]) != (pv[prev] < val):
                    ok = False
                    break
            if ok and extend(chosen + (pos,), pos + 1):
                return True
        return False

    return extend((), 0)


def placement_avoids(p: RookPlacement, t, all_vertices: bool = False) -> bool:
    """True when no border-vertex restriction of the placement contains any
    of the patterns.  By default only peak vertices are tested, since every
    other restriction embeds in a peak's; all_vertices=True forces the
    direct definition."""
    pats = _as_pattern_tuple(t)
    if all_vertices:
        vertex_ids = range(2 * p.n + 1)
    else:
        vertex_ids = p.board.border.peak_indices()
    for v in vertex_ids:
        perm = gamma_restriction(p, v)
        if any(perm_contains(perm, pat) for pat in pats):
            return False
    return True


def _as_pattern_tuple(t) -> tuple[Pattern, ...]:
    if isinstance(t, Pattern):
        return (t,)
    return tuple(t)


def find_arc_occurrence(arcs, t: Pattern):
    """Return the 2k vertices of an occurrence of t among the arcs, or None.

    Vertices must be distinct, every chosen opener must precede every chosen
    closer, and opener rank a must be matched to closer rank k + 1 - t(a).
    """
    k = len(t.perm)
    arcs = sorted(arcs)
    if k == 0 or len(arcs) < k:
        return None
    for combo in combinations(arcs, k):
        lefts = [a for a, _ in combo]
        rights = [b for _, b in combo]
        if max(lefts) >= min(rights) or len(set(lefts)) < k or len(set(rights)) < k:
            continue
        rights_sorted = sorted(rights)
        ok = True
        for a_rank, (_, b) in enumerate(combo, start=1):
            # combo is sorted by opener, so a_rank orders the openers
            j = rights_sorted.index(b) + 1
            if t.perm[a_rank - 1] != k + 1 - j:
                ok = False
                break
        if ok:
            return tuple(sorted(lefts) + rights_sorted)
    return None


def matching_avoids(m: Matching, t) -> bool:
    """True when the matching's arcs contain no occurrence of any pattern;
    fixed points never participate."""
    pats = _as_pattern_tuple(t)
    return all(find_arc_occurrence(m.arcs, pat) is None for pat in pats)


def partition_avoids(p: SetPartition, t) -> bool:
    """True when the partition's arc diagram avoids all the patterns;
    singleton blocks contribute no arcs."""
    pats = _as_pattern_tuple(t)
    return all(find_arc_occurrence(p.arcs, pat) is None for pat in pats)


def length3_mask(arcs) -> int:
    """Bitmask over S3_PATTERNS of the length-3 patterns occurring among the
    arcs.  Used by the counting layer to answer many avoidance queries from
    one sweep."""
    arcs = sorted(arcs)
    mask = 0
    for (a1, b1), (a2, b2), (a3, b3) in combinations(arcs, 3):
        if a3 >= b1 or a3 >= b2 or a3 >= b3:
            continue
        # openers a1 < a2 < a3 all precede the closers, so the closer ranks
        # determine the induced pattern
        r1 = 1 + (b1 > b2) + (b1 > b3)
        r2 = 1 + (b2 > b1) + (b2 > b3)
        r3 = 1 + (b3 > b1) + (b3 > b2)
        mask |= 1 << _S3_INDEX[(4 - r1, 4 - r2, 4 - r3)]
        if mask == 63:
            return mask
    return mask


def mask_for(patterns) -> int:
    """Bitmask of a set of length-3 patterns, for use with length3_mask."""
    mask = 0
    for p in patterns:
        if len(p.perm) != 3:
            raise InvalidObjectError(f"mask_for needs length-3 patterns, got {p.perm}")
        mask |= 1 << _S3_INDEX[p.perm]
    return mask


def lis_length(perm) -> int:
    """Longest increasing subsequence length via patience sorting."""
    tails: list[int] = []
    for v in perm:
        i = bisect.bisect_left(tails, v)
        if i == len(tails):
            tails.append(v)
        else:
            tails[i] = v
    return len(tails)


def lis_labels(p: RookPlacement) -> tuple[int, ...]:
    """For each border vertex V_i, the length of the longest increasing
    rook sequence inside the rectangle under V_i."""
    out = []
    for v in range(2 * p.n + 1):
        out.append(lis_length(gamma_restriction(p, v)))
    return tuple(out)
