"""Segment-pair bit scores, divergence levels and neighbor structures.

For every pair of same-type informative segments in different sequences
the local aligner H gives a bit score. A segment ``t`` of sequence ``j``
is a *neighbor* of ``s`` (sequence ``i``) when that score reaches
``c(alpha_ij) * len(s)``, where ``alpha_ij`` is the bits-per-column of the
local alignment of the two informative sequences and ``c`` a threshold
curve. Closest neighbors and mutual neighborhoods follow from these sets.

Every argmax breaks ties by smaller start coordinate, then sequence id.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .pairwise import LocalAligner, LocalAlignment, SmithWaterman
from .sequences import InformativeView, InputError, Segment

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_CURVE",
    "NeighborIndex",
    "SegPairScore",
    "ThresholdCurve",
    "all_segment_pair_scores",
    "build_neighbor_index",
    "divergence",
    "divergence_matrix",
    "read_threshold_curve",
    "threshold",
]

SegKey = tuple  # (seq_id, start)


@dataclass(frozen=True)
class SegPairScore:
    """Bit score of the local alignment of ``s`` (x side) with ``t`` (y side)."""

    s: Segment
    t: Segment
    seg_score: float
    alignment: LocalAlignment = field(compare=False, repr=False)


def _map(fn, items, threads):
    if threads and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


def all_segment_pair_scores(
    views: Sequence[InformativeView], H: Optional[LocalAligner] = None, threads: int = 1
) -> list[SegPairScore]:
    """Score every cross-sequence pair of same-type informative segments.

    The result is sorted by (s, t) and does not depend on ``threads``.
    """
    H = H or SmithWaterman()
    jobs = []
    for vi, vj in combinations(views, 2):
        for s in vi.informative_segments:
            for t in vj.informative_segments:
                if s.seg_type == t.seg_type:
                    jobs.append((s, t, vi.parent.segment_residues(s), vj.parent.segment_residues(t)))

    def run(job):
        s, t, xs, ys = job
        aln = H(xs, ys)
        return SegPairScore(s, t, aln.bit_score, aln)

    return _map(run, jobs, threads)


def divergence(view_i: InformativeView, view_j: InformativeView, H: Optional[LocalAligner] = None) -> float:
    """Bits per aligned column of the informative-sequence local alignment, in [0, 2]."""
    H = H or SmithWaterman()
    if not view_i.concatenated or not view_j.concatenated:
        log.debug("empty informative sequence for %s/%s; divergence set to 0", view_i.seq_id, view_j.seq_id)
        return 0.0
    # equal-score local alignments may differ in length; fix the argument order so alpha is symmetric
    x, y = sorted((view_i.concatenated, view_j.concatenated))
    aln = H(x, y)
    if not aln:
        log.debug("empty local alignment for %s/%s; divergence set to 0", view_i.seq_id, view_j.seq_id)
        return 0.0
    return float(min(2.0, max(0.0, aln.bit_score / aln.length)))


def divergence_matrix(
    views: Sequence[InformativeView], H: Optional[LocalAligner] = None, threads: int = 1
) -> tuple[np.ndarray, list[str]]:
    """Symmetric matrix of divergence levels plus diagnostics for degenerate pairs."""
    H = H or SmithWaterman()
    k = len(views)
    pairs = list(combinations(range(k), 2))
    values = _map(lambda p: divergence(views[p[0]], views[p[1]], H), pairs, threads)
    out = np.zeros((k, k))
    notes = []
    for (i, j), a in zip(pairs, values):
        out[i, j] = out[j, i] = a
        if a == 0.0 and (not views[i].concatenated or not views[j].concatenated):
            notes.append(f"divergence {views[i].seq_id}/{views[j].seq_id}: empty informative sequence, set to 0")
        elif a == 0.0:
            notes.append(f"divergence {views[i].seq_id}/{views[j].seq_id}: empty local alignment, set to 0")
    return out, notes


# ---------------------------------------------------------------------------
# threshold curve


@dataclass(frozen=True)
class ThresholdCurve:
    """Piecewise-linear map from divergence level to bits per residue.

    Linear between breakpoints, constant beyond the first and last one.
    """

    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple(sorted((float(d), float(c)) for d, c in self.breakpoints))
        if not pts:
            raise InputError("threshold curve needs at least one breakpoint")
        ds = [d for d, _ in pts]
        cs = [c for _, c in pts]
        if len(set(ds)) != len(ds):
            raise InputError("duplicate divergence value in threshold curve")
        if min(cs) < 0:
            raise InputError("threshold curve must be non-negative")
        if any(b < a for a, b in zip(cs, cs[1:])):
            raise InputError("threshold curve must be non-decreasing")
        object.__setattr__(self, "breakpoints", pts)

    def __call__(self, d: float) -> float:
        ds, cs = zip(*self.breakpoints)
        return float(np.interp(d, ds, cs))

    def format(self) -> str:
        return "".join(f"{d:g}\t{c:g}\n" for d, c in self.breakpoints)


#: c(d) = clamp(0.5 d, 0.25, 1.0)
DEFAULT_CURVE = ThresholdCurve(((0.0, 0.25), (0.5, 0.25), (2.0, 1.0)))


def threshold(curve: ThresholdCurve, alpha_ij: float) -> float:
    if not 0.0 <= alpha_ij <= 2.0:
        raise ValueError(f"divergence level {alpha_ij} outside [0, 2]")
    return curve(alpha_ij)


def read_threshold_curve(path) -> ThresholdCurve:
    pts = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split()
            if len(fields) != 2:
                raise InputError(f"{path}:{lineno}: expected 'd<TAB>c(d)'")
            try:
                pts.append((float(fields[0]), float(fields[1])))
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
    return ThresholdCurve(tuple(pts))


# ---------------------------------------------------------------------------
# neighbor index


def _pick(cands: Iterable[tuple[float, Segment]]) -> Optional[Segment]:
    best = min(cands, key=lambda c: (-c[0], c[1].start, c[1].seq_id), default=None)
    return None if best is None else best[1]


@dataclass
class NeighborIndex:
    seq_ids: tuple[str, ...]
    segments: dict  # SegKey -> Segment, all informative segments
    seg_scores: dict  # (SegKey, SegKey) -> bit score, both orientations
    alignments: dict  # (SegKey, SegKey) -> LocalAlignment, x side = first key
    divergences: np.ndarray
    curve: ThresholdCurve
    neighbors: dict = field(default_factory=dict)  # (SegKey, seq_id) -> tuple[Segment]
    closest: dict = field(default_factory=dict)  # (SegKey, seq_id) -> Segment
    neighborhood: dict = field(default_factory=dict)  # SegKey -> tuple[Segment]
    nei_segments: dict = field(default_factory=dict)  # seq_id -> tuple[Segment]
    mutual: dict = field(default_factory=dict)  # (SegKey, SegKey) -> tuple[Segment]

    def seg(self, s: Segment, t: Segment) -> float:
        return self.seg_scores[(s.key, t.key)]

    def alignment(self, s: Segment, t: Segment) -> LocalAlignment:
        """Local alignment with ``s`` on the x side."""
        return self.alignments[(s.key, t.key)]

    def mutual_neighborhood(self, s: Segment, t: Segment) -> tuple[Segment, ...]:
        return self.mutual.get((s.key, t.key), ())

    def neighbor_sequence(self, seq_id: str) -> tuple[Segment, ...]:
        return self.nei_segments.get(seq_id, ())

    def pair_keys(self):
        """Unordered same-type neighbor-segment pairs from distinct sequences, sorted."""
        return sorted(k for k in self.mutual if k[0] < k[1])


def _flip(aln: LocalAlignment) -> LocalAlignment:
    return LocalAlignment(
        x_start=aln.y_start,
        x_end=aln.y_end,
        y_start=aln.x_start,
        y_end=aln.x_end,
        aligned_pairs=[(b, a) for a, b in aln.aligned_pairs],
        raw_score=aln.raw_score,
        bit_score=aln.bit_score,
        cells=aln.cells,
    )


def build_neighbor_index(
    views: Sequence[InformativeView],
    scores: Sequence[SegPairScore],
    divergences: np.ndarray,
    curve: ThresholdCurve = DEFAULT_CURVE,
) -> NeighborIndex:
    seq_ids = tuple(v.seq_id for v in views)
    pos = {sid: n for n, sid in enumerate(seq_ids)}
    segments = {s.key: s for v in views for s in v.informative_segments}
    seg_scores, alignments = {}, {}
    for sc in scores:
        seg_scores[(sc.s.key, sc.t.key)] = sc.seg_score
        seg_scores[(sc.t.key, sc.s.key)] = sc.seg_score
        alignments[(sc.s.key, sc.t.key)] = sc.alignment
        alignments[(sc.t.key, sc.s.key)] = _flip(sc.alignment)

    idx = NeighborIndex(seq_ids, segments, seg_scores, alignments, divergences, curve)

    is_neighbor = set()
    for v in views:
        i = pos[v.seq_id]
        for s in v.informative_segments:
            hood = []
            for w in views:
                if w is v:
                    continue
                bar = threshold(curve, float(divergences[i, pos[w.seq_id]])) * len(s)
                found = tuple(
                    t
                    for t in w.informative_segments
                    if t.seg_type == s.seg_type and seg_scores[(s.key, t.key)] >= bar
                )
                if not found:
                    continue
                idx.neighbors[(s.key, w.seq_id)] = found
                is_neighbor.update(t.key for t in found)
                best = _pick((seg_scores[(s.key, t.key)], t) for t in found)
                idx.closest[(s.key, w.seq_id)] = best
                hood.append(best)
            idx.neighborhood[s.key] = tuple(hood)

    for v in views:
        idx.nei_segments[v.seq_id] = tuple(s for s in v.informative_segments if s.key in is_neighbor)

    for vi, vj in combinations(views, 2):
        for s in idx.nei_segments[vi.seq_id]:
            for t in idx.nei_segments[vj.seq_id]:
                if s.seg_type != t.seg_type:
                    continue
                mn = []
                for vl in views:
                    if vl is vi or vl is vj:
                        continue
                    ns = idx.neighbors.get((s.key, vl.seq_id), ())
                    nt = {u.key for u in idx.neighbors.get((t.key, vl.seq_id), ())}
                    both = [u for u in ns if u.key in nt]
                    best = _pick(
                        (seg_scores[(s.key, u.key)] + seg_scores[(t.key, u.key)], u) for u in both
                    )
                    if best is not None:
                        mn.append(best)
                idx.mutual[(s.key, t.key)] = tuple(mn)
                idx.mutual[(t.key, s.key)] = tuple(mn)
    return idx
