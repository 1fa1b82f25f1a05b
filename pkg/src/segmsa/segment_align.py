"""Global alignment at the segment level and the pairwise distance matrix."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .scoring import SegmentScoreTable
from .sequences import Segment

log = logging.getLogger(__name__)

__all__ = ["SegmentAlignment", "build_distance_matrix", "segment_dp", "segment_nw"]

_MATCH, _GAP_I, _GAP_J = 0, 1, 2


def segment_dp(
    n: int,
    m: int,
    match: Callable[[int, int], float],
    gap_a: Sequence[float],
    gap_b: Sequence[float],
) -> tuple[float, list]:
    """Needleman-Wunsch over two lists of items with per-item gap costs.

    ``match(a, b)`` may return ``-inf`` to forbid a pairing. Leaving item
    ``a`` of the first list unmatched costs ``gap_a[a]``. Returns the score
    and columns ``(a or None, b or None)``. Ties prefer a match, then a
    gap in the first list, then a gap in the second.
    """
    D = np.empty((n + 1, m + 1))
    move = np.zeros((n + 1, m + 1), dtype=np.int8)
    D[0, 0] = 0.0
    for a in range(1, n + 1):
        D[a, 0] = D[a - 1, 0] - gap_a[a - 1]
        move[a, 0] = _GAP_J
    for b in range(1, m + 1):
        D[0, b] = D[0, b - 1] - gap_b[b - 1]
        move[0, b] = _GAP_I
    for a in range(1, n + 1):
        for b in range(1, m + 1):
            best, how = D[a - 1, b - 1] + match(a - 1, b - 1), _MATCH
            v = D[a, b - 1] - gap_b[b - 1]
            if v > best:
                best, how = v, _GAP_I
            v = D[a - 1, b] - gap_a[a - 1]
            if v > best:
                best, how = v, _GAP_J
            D[a, b] = best
            move[a, b] = how

    cols = []
    a, b = n, m
    while a or b:
        how = move[a, b]
        if how == _MATCH:
            cols.append((a - 1, b - 1))
            a, b = a - 1, b - 1
        elif how == _GAP_I:
            cols.append((None, b - 1))
            b -= 1
        else:
            cols.append((a - 1, None))
            a -= 1
    cols.reverse()
    return float(D[n, m]), cols


@dataclass
class SegmentAlignment:
    columns: list  # (Segment or None, Segment or None)
    score: float
    cells: int = 0


def segment_nw(bi: Sequence[Segment], bj: Sequence[Segment], table: SegmentScoreTable) -> SegmentAlignment:
    """Optimal global segment alignment of two neighbor sequences.

    Matches are allowed only between segments of equal type and score
    ``SCORE(s, t)``; an unmatched segment costs ``SCORE(s, -)``.
    """
    scores = {}
    for a, s in enumerate(bi):
        for b, t in enumerate(bj):
            if s.seg_type == t.seg_type:
                scores[a, b] = table.pair(s, t)
    gap_i = [table.gap(s) for s in bi]
    gap_j = [table.gap(t) for t in bj]
    score, cols = segment_dp(len(bi), len(bj), lambda a, b: scores.get((a, b), -math.inf), gap_i, gap_j)
    columns = [(None if a is None else bi[a], None if b is None else bj[b]) for a, b in cols]
    return SegmentAlignment(columns, score, len(bi) * len(bj))


def build_distance_matrix(scores: dict, k: int) -> tuple[np.ndarray, list[str]]:
    """Turn pairwise global segment alignment scores into NJ distances.

    ``scores[(i, j)]`` for ``i < j``; ``D = 1 - max(G, 0) / max(G)``. When no
    pair has a positive score every distance is 1.
    """
    D = np.zeros((k, k))
    notes = []
    G = {p: max(0.0, float(v)) for p, v in scores.items()}
    top = max(G.values(), default=0.0)
    if top <= 0.0:
        if k > 1:
            notes.append("no positive segment alignment score; using uniform distances")
            log.warning(notes[-1])
        D[:] = 1.0
        np.fill_diagonal(D, 0.0)
        return D, notes
    for i in range(k):
        for j in range(i + 1, k):
            D[i, j] = D[j, i] = 1.0 - G[(i, j)] / top
    return D, notes
