"""Segment scoring tables: pair schemes and gap schemes.

Pair schemes for same-type segments ``s``, ``t`` with mutual
neighborhood ``MN``::

    progressive   SEG(s,t)
    linear        SEG(s,t) + |MN|   * sum_u (SEG(s,u) + SEG(t,u))
    quadratic     SEG(s,t) + |MN|^2 * sum_u (SEG(s,u) + SEG(t,u))

Gap schemes: ``zero`` charges nothing for leaving a segment unmatched;
``max`` charges the best bit score of ``s`` against its neighborhood.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .neighborhoods import NeighborIndex
from .sequences import Segment

__all__ = [
    "GapScheme",
    "PairScheme",
    "ScoringScheme",
    "SegmentScoreTable",
    "build_score_table",
    "score_gap",
    "score_pair",
]


class PairScheme(str, enum.Enum):
    PROGRESSIVE = "progressive"
    LINEAR = "linear"
    QUADRATIC = "quadratic"


class GapScheme(str, enum.Enum):
    ZERO = "zero"
    MAX = "max"


@dataclass(frozen=True)
class ScoringScheme:
    pair_scheme: PairScheme = PairScheme.LINEAR
    gap_scheme: GapScheme = GapScheme.MAX

    def __post_init__(self):
        object.__setattr__(self, "pair_scheme", PairScheme(self.pair_scheme))
        object.__setattr__(self, "gap_scheme", GapScheme(self.gap_scheme))


def score_pair(s: Segment, t: Segment, index: NeighborIndex, scheme: ScoringScheme) -> float:
    if s.seg_type != t.seg_type:
        raise ValueError(f"type mismatch: {s.label} is {s.seg_type}, {t.label} is {t.seg_type}")
    if s.seq_id == t.seq_id:
        raise ValueError(f"{s.label} and {t.label} belong to the same sequence")
    direct = index.seg(s, t)
    pair = PairScheme(scheme.pair_scheme)
    if pair is PairScheme.PROGRESSIVE:
        return direct
    mn = index.mutual_neighborhood(s, t)
    support = sum(index.seg(s, u) + index.seg(t, u) for u in mn)
    power = 1 if pair is PairScheme.LINEAR else 2
    return direct + len(mn) ** power * support


def score_gap(s: Segment, index: NeighborIndex, scheme: ScoringScheme) -> float:
    if GapScheme(scheme.gap_scheme) is GapScheme.ZERO:
        return 0.0
    return max((index.seg(s, t) for t in index.neighborhood.get(s.key, ())), default=0.0)


@dataclass
class SegmentScoreTable:
    """SCORE(s, t) for neighbor-segment pairs and SCORE(s, -) per segment."""

    pair_scores: dict = field(default_factory=dict)  # (SegKey, SegKey) -> float, both orientations
    gap_scores: dict = field(default_factory=dict)  # SegKey -> float

    def pair(self, s: Segment, t: Segment) -> float:
        try:
            return self.pair_scores[(s.key, t.key)]
        except KeyError:
            raise KeyError(f"no segment score for {s.label} / {t.label}") from None

    def gap(self, s: Segment) -> float:
        try:
            return self.gap_scores[s.key]
        except KeyError:
            raise KeyError(f"no gap score for {s.label}") from None

    def to_tsv(self) -> str:
        def fmt(key):
            return f"{key[0]}:{key[1]}"

        lines = [
            f"{fmt(a)}\t{fmt(b)}\t{v:.6f}" for (a, b), v in sorted(self.pair_scores.items()) if a < b
        ]
        lines += [f"{fmt(a)}\t-\t{v:.6f}" for a, v in sorted(self.gap_scores.items())]
        return "\n".join(lines) + ("\n" if lines else "")


def build_score_table(index: NeighborIndex, scheme: ScoringScheme) -> SegmentScoreTable:
    table = SegmentScoreTable()
    for sid in index.seq_ids:
        for s in index.neighbor_sequence(sid):
            table.gap_scores[s.key] = score_gap(s, index, scheme)
    for a, b in index.pair_keys():
        s, t = index.segments[a], index.segments[b]
        v = score_pair(s, t, index, scheme)
        table.pair_scores[(a, b)] = v
        table.pair_scores[(b, a)] = v
    return table
