"""End-to-end template-guided progressive alignment."""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .guide_tree import TreeNode, neighbor_joining
from .matrices import SubstitutionMatrix, blosum62
from .neighborhoods import (
    DEFAULT_CURVE,
    NeighborIndex,
    ThresholdCurve,
    all_segment_pair_scores,
    build_neighbor_index,
    divergence_matrix,
)
from .pairwise import DEFAULT_LAMBDA, DEFAULT_LOG_K, SmithWaterman
from .progressive import Msa, SegmentProfile, assemble_msa, progressive_segment_msa
from .scoring import GapScheme, PairScheme, ScoringScheme, SegmentScoreTable, build_score_table
from .segment_align import build_distance_matrix, segment_nw
from .sequences import AnnotatedSequence, classify_informative

log = logging.getLogger(__name__)

__all__ = ["AlignmentResult", "Config", "SegmentModel", "align", "build_segment_model"]


@dataclass
class Config:
    alpha: float = 6.0
    min_seg_len: int = 5
    merge_gap: int = 4
    pair_scheme: PairScheme = PairScheme.LINEAR
    gap_scheme: GapScheme = GapScheme.MAX
    curve: ThresholdCurve = DEFAULT_CURVE
    matrix: Optional[SubstitutionMatrix] = None
    gap_open: float = 11
    gap_extend: float = 1
    lam: float = DEFAULT_LAMBDA
    log_k: float = DEFAULT_LOG_K
    out_format: str = "fasta"
    threads: int = 1
    seed: int = 0  # reserved; the pipeline is deterministic
    segment_guided: bool = True

    def __post_init__(self):
        self.pair_scheme = PairScheme(self.pair_scheme)
        self.gap_scheme = GapScheme(self.gap_scheme)
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.min_seg_len < 1 or self.merge_gap < 0:
            raise ValueError("min_seg_len >= 1 and merge_gap >= 0 required")
        if self.gap_open < 0 or self.gap_extend < 0:
            raise ValueError("gap penalties are non-negative costs")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.out_format not in ("fasta", "clustal"):
            raise ValueError(f"unknown output format {self.out_format!r}")
        if self.matrix is None:
            self.matrix = blosum62()

    @property
    def scheme(self) -> ScoringScheme:
        return ScoringScheme(self.pair_scheme, self.gap_scheme)

    def local_aligner(self) -> SmithWaterman:
        return SmithWaterman(self.matrix, self.gap_open, self.gap_extend, self.lam, self.log_k)


@dataclass
class AlignmentResult:
    msa: Msa
    tree: TreeNode
    distances: np.ndarray
    names: tuple[str, ...]
    views: list = field(default_factory=list)
    index: Optional[NeighborIndex] = None
    table: Optional[SegmentScoreTable] = None
    segment_scores: dict = field(default_factory=dict)  # (i, j) -> global segment alignment score
    root_profile: Optional[SegmentProfile] = None
    timings: dict = field(default_factory=dict)
    cells: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def report(self) -> str:
        lines = [f"sequences={len(self.names)}", f"columns={self.msa.width}"]
        lines += [f"time_{k}={v:.4f}" for k, v in self.timings.items()]
        lines += [f"cells_{k}={v}" for k, v in self.cells.items()]
        lines += [f"note={n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def _pairwise_segment_scores(index, table, names):
    scores, cells = {}, 0
    for i, j in combinations(range(len(names)), 2):
        aln = segment_nw(index.neighbor_sequence(names[i]), index.neighbor_sequence(names[j]), table)
        scores[(i, j)] = aln.score
        cells += aln.cells
    return scores, cells


@dataclass
class SegmentModel:
    """Everything up to and including the pairwise distance matrix."""

    names: tuple
    views: list
    index: Optional[NeighborIndex]
    table: Optional[SegmentScoreTable]
    segment_scores: dict
    distances: np.ndarray
    timings: dict = field(default_factory=dict)
    cells: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


class _Stopwatch:
    def __init__(self, timings):
        self.timings = timings

    @contextmanager
    def __call__(self, name):
        t0 = time.perf_counter()
        yield
        self.timings[name] = time.perf_counter() - t0


def build_segment_model(sequences: Sequence[AnnotatedSequence], config: Optional[Config] = None) -> SegmentModel:
    """Informative segments, neighbor index, score table and distances."""
    config = config or Config()
    if len(sequences) < 2:
        raise ValueError("need at least two sequences")
    names = tuple(s.id for s in sequences)
    if len(set(names)) != len(names):
        raise ValueError("duplicate sequence ids")
    k = len(sequences)
    model = SegmentModel(names, [], None, None, {}, np.ones((k, k)) - np.eye(k))
    model.cells = {"segment_nw": 0, "segment_profile": 0, "residue": 0}
    if not config.segment_guided:
        model.notes.append("segment guidance disabled")
        return model

    stage = _Stopwatch(model.timings)
    H = config.local_aligner()
    with stage("informative"):
        model.views = [
            classify_informative(s, config.alpha, config.min_seg_len, config.merge_gap) for s in sequences
        ]
    with stage("segment_pairs"):
        pair_scores = all_segment_pair_scores(model.views, H, config.threads)
    with stage("divergence"):
        alphas, div_notes = divergence_matrix(model.views, H, config.threads)
        model.notes.extend(div_notes)
    with stage("neighbors"):
        model.index = build_neighbor_index(model.views, pair_scores, alphas, config.curve)
    with stage("score_table"):
        model.table = build_score_table(model.index, config.scheme)
    with stage("distances"):
        model.segment_scores, model.cells["segment_nw"] = _pairwise_segment_scores(
            model.index, model.table, names
        )
        model.distances, dist_notes = build_distance_matrix(model.segment_scores, k)
        model.notes.extend(dist_notes)
    return model


def align(sequences: Sequence[AnnotatedSequence], config: Optional[Config] = None) -> AlignmentResult:
    """Run the full pipeline on annotated sequences."""
    config = config or Config()
    model = build_segment_model(sequences, config)
    stage = _Stopwatch(model.timings)
    with stage("guide_tree"):
        tree = neighbor_joining(model.distances, model.names)
    root = None
    if config.segment_guided:
        with stage("segment_msa"):
            root, model.cells["segment_profile"] = progressive_segment_msa(tree, model.index, model.table)
            root.check(model.index.nei_segments)
    with stage("assemble"):
        msa, stats = assemble_msa(
            root,
            sequences,
            tree,
            model.index,
            config.matrix,
            config.gap_open,
            config.gap_extend,
            config.threads,
        )
    model.cells["residue"] = stats.residue_cells
    return AlignmentResult(
        msa=msa,
        tree=tree,
        distances=model.distances,
        names=model.names,
        views=model.views,
        index=model.index,
        table=model.table,
        segment_scores=model.segment_scores,
        root_profile=root,
        timings=model.timings,
        cells=model.cells,
        notes=model.notes + stats.notes,
    )
