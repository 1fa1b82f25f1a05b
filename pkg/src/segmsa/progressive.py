"""Progressive segment-level MSA and residue-level assembly.

Two passes over the guide tree:

1. :func:`progressive_segment_msa` aligns neighbor sequences segment by
   segment, giving a :class:`SegmentProfile` whose columns group matched
   segments.
2. :func:`assemble_msa` builds the residue alignment in the same merge
   order. At each merge, residues paired by the local alignment of the best
   matched segment pair in every shared segment column become anchors; the
   residues between consecutive anchors (non-informative segments plus the
   unaligned heads and tails of informative ones) are stitched in by
   global residue alignment.

With no segment columns at all the second pass reduces to plain
progressive residue alignment.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .guide_tree import TreeNode
from .matrices import SubstitutionMatrix, blosum62
from .neighborhoods import NeighborIndex
from .pairwise import GAP, ResidueAlignment, affine_dp, global_align_residues
from .scoring import SegmentScoreTable
from .segment_align import segment_dp
from .sequences import AnnotatedSequence, Segment

log = logging.getLogger(__name__)

__all__ = [
    "AssemblyStats",
    "InvariantError",
    "Msa",
    "SegmentProfile",
    "align_profiles",
    "assemble_msa",
    "progressive_segment_msa",
    "stitch",
]


class InvariantError(RuntimeError):
    """An output failed an internal consistency check."""


@dataclass
class SegmentProfile:
    members: tuple[str, ...]
    columns: list  # tuples of Segment or None, one entry per member

    @classmethod
    def single(cls, seq_id: str, segments: Sequence[Segment]) -> "SegmentProfile":
        return cls((seq_id,), [(s,) for s in segments])

    def row(self, member: str) -> list:
        m = self.members.index(member)
        return [col[m] for col in self.columns]

    def check(self, nei: dict) -> None:
        for col in self.columns:
            if len(col) != len(self.members):
                raise InvariantError("ragged segment profile")
            if all(s is None for s in col):
                raise InvariantError("all-gap segment column")
            types = {s.seg_type for s in col if s is not None}
            if len(types) > 1:
                raise InvariantError(f"segment column mixes types {sorted(types)}")
        for m in self.members:
            got = tuple(s for s in self.row(m) if s is not None)
            if got != tuple(nei[m]):
                raise InvariantError(f"segment row of {m} does not recover its neighbor segments")


def align_profiles(P: SegmentProfile, Q: SegmentProfile, table: SegmentScoreTable):
    """Segment-level profile-profile alignment.

    Column pairs score the mean SCORE over their non-gap cross pairs (or
    ``-inf`` if their types differ); leaving a column unmatched costs the
    mean of its segments' gap scores. Returns ``(profile, score, cells)``.
    """
    if set(P.members) & set(Q.members):
        raise ValueError("profiles share members")

    def present(col):
        return [s for s in col if s is not None]

    p_cols = [present(c) for c in P.columns]
    q_cols = [present(c) for c in Q.columns]

    def match(a, b):
        sa, sb = p_cols[a], q_cols[b]
        if sa[0].seg_type != sb[0].seg_type:
            return -math.inf
        return sum(table.pair(s, t) for s in sa for t in sb) / (len(sa) * len(sb))

    gap_p = [sum(table.gap(s) for s in c) / len(c) for c in p_cols]
    gap_q = [sum(table.gap(t) for t in c) / len(c) for c in q_cols]
    score, path = segment_dp(len(p_cols), len(q_cols), match, gap_p, gap_q)

    none_p = (None,) * len(P.members)
    none_q = (None,) * len(Q.members)
    cols = [
        (P.columns[a] if a is not None else none_p) + (Q.columns[b] if b is not None else none_q)
        for a, b in path
    ]
    return SegmentProfile(P.members + Q.members, cols), score, len(p_cols) * len(q_cols)


def progressive_segment_msa(tree: TreeNode, index: NeighborIndex, table: SegmentScoreTable):
    """Fold the guide tree into one segment profile. Returns ``(profile, cells)``."""
    cells = 0

    def walk(node):
        nonlocal cells
        if node.is_leaf:
            return SegmentProfile.single(node.name, index.neighbor_sequence(node.name))
        left, right = (walk(c) for c in node.children)
        merged, _, c = align_profiles(left, right, table)
        cells += c
        return merged

    return walk(tree), cells


# ---------------------------------------------------------------------------
# residue level


@dataclass(frozen=True)
class Msa:
    ids: tuple[str, ...]
    rows: tuple[str, ...]

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __len__(self):
        return len(self.ids)

    def row(self, seq_id: str) -> str:
        return self.rows[self.ids.index(seq_id)]

    def degapped(self) -> dict:
        return {i: r.replace("-", "") for i, r in zip(self.ids, self.rows)}

    def residue_columns(self) -> np.ndarray:
        """``members x width`` array of residue indices, -1 for gaps."""
        out = np.full((len(self.ids), self.width), -1, dtype=np.intp)
        for m, row in enumerate(self.rows):
            mask = np.frombuffer(row.encode("ascii"), dtype=np.uint8) != ord("-")
            out[m, mask] = np.arange(int(mask.sum()))
        return out

    def check(self, sequences: Optional[Sequence[AnnotatedSequence]] = None) -> None:
        if len(set(len(r) for r in self.rows)) > 1:
            raise InvariantError("MSA rows differ in length")
        if self.rows and self.width:
            cols = self.residue_columns()
            if (cols < 0).all(axis=0).any():
                raise InvariantError("MSA contains an all-gap column")
        if sequences is not None:
            orig = {s.id: s.residues for s in sequences}
            if set(orig) != set(self.ids):
                raise InvariantError("MSA members differ from the input sequences")
            for sid, residues in self.degapped().items():
                if residues != orig[sid]:
                    raise InvariantError(f"row {sid} does not degap to its input sequence")


@dataclass
class AssemblyStats:
    residue_cells: int = 0
    anchors: int = 0
    regions: int = 0
    notes: list = field(default_factory=list)


def stitch(
    region_i: str,
    region_j: str,
    matrix: Optional[SubstitutionMatrix] = None,
    gap_open: float = 11,
    gap_extend: float = 1,
) -> ResidueAlignment:
    """Globally align the residues lying between two matched segment pairs."""
    return global_align_residues(region_i, region_j, matrix, gap_open, gap_extend)


@dataclass
class _ResidueProfile:
    members: tuple[str, ...]
    grid: np.ndarray  # members x cols, residue index or -1
    residues: tuple[str, ...]  # per member

    def column_of(self, m: int) -> np.ndarray:
        """Column index of every residue of member ``m``."""
        return np.flatnonzero(self.grid[m] >= 0)


def _leaf_profile(seq: AnnotatedSequence) -> _ResidueProfile:
    return _ResidueProfile((seq.id,), np.arange(len(seq))[None, :], (seq.residues,))


class _Assembler:
    def __init__(self, matrix, gap_open, gap_extend, threads):
        self.matrix = matrix
        self.gap_open = gap_open
        self.gap_extend = gap_extend
        self.threads = threads
        self.stats = AssemblyStats()
        self.W = matrix.scores.astype(np.float64)
        self.n_letters = len(matrix.alphabet)
        self._encoded = {}

    def _encode(self, prof: _ResidueProfile, m: int) -> np.ndarray:
        sid = prof.members[m]
        if sid not in self._encoded:
            self._encoded[sid] = self.matrix.encode(prof.residues[m])
        return self._encoded[sid]

    def _codes(self, prof: _ResidueProfile, cols: np.ndarray) -> np.ndarray:
        """Letter codes of a column block, -1 at gaps."""
        block = prof.grid[:, cols]
        out = np.full(block.shape, -1, dtype=np.intp)
        for m in range(len(prof.members)):
            mask = block[m] >= 0
            if mask.any():
                out[m, mask] = self._encode(prof, m)[block[m, mask]]
        return out

    def _freq(self, codes: np.ndarray) -> np.ndarray:
        f = np.zeros((codes.shape[1], self.n_letters))
        for row in codes:
            mask = row >= 0
            np.add.at(f, (np.flatnonzero(mask), row[mask]), 1.0)
        return f

    def align_block(self, P: _ResidueProfile, pc: np.ndarray, Q: _ResidueProfile, qc: np.ndarray):
        """Align column blocks; returns ``(path, cells)`` with block-local indices."""
        a, b = len(pc), len(qc)
        if a == 0 or b == 0:
            return [(i, GAP) for i in range(a)] + [(GAP, j) for j in range(b)], 0
        if len(P.members) == 1 and len(Q.members) == 1:
            x = "".join(P.residues[0][r] for r in P.grid[0, pc])
            y = "".join(Q.residues[0][r] for r in Q.grid[0, qc])
            aln = stitch(x, y, self.matrix, self.gap_open, self.gap_extend)
            return aln.path, a * b
        fp = self._freq(self._codes(P, pc))
        fq = self._freq(self._codes(Q, qc))
        S = (fp @ self.W @ fq.T) / np.outer(fp.sum(axis=1), fq.sum(axis=1))
        res = affine_dp(S, self.gap_open, self.gap_extend)
        return res.path, res.cells

    def anchors(self, P, Q, columns, index) -> list:
        """Monotone (P column, Q column) pairs fixed by matched segments."""
        pm = {m: n for n, m in enumerate(P.members)}
        qm = {m: n for n, m in enumerate(Q.members)}
        colmaps = {}

        def col_of(prof, n):
            key = (id(prof), n)
            if key not in colmaps:
                colmaps[key] = prof.column_of(n)
            return colmaps[key]

        out = []
        for col in columns:
            ps = [(pm[s.seq_id], s) for s in col if s is not None and s.seq_id in pm]
            qs = [(qm[t.seq_id], t) for t in col if t is not None and t.seq_id in qm]
            if not ps or not qs:
                continue
            (mp, s), (mq, t) = max(
                ((p, q) for p in ps for q in qs),
                key=lambda pq: (index.seg(pq[0][1], pq[1][1]), pq[0][1].key, pq[1][1].key),
            )
            aln = index.alignment(s, t)
            cp, cq = col_of(P, mp), col_of(Q, mq)
            for x, y in aln.aligned_pairs:
                if x is not GAP and y is not GAP:
                    out.append((int(cp[s.start + x]), int(cq[t.start + y])))
        chain = []
        for p, q in out:
            if not chain or (p > chain[-1][0] and q > chain[-1][1]):
                chain.append((p, q))
        return chain

    def merge(self, P: _ResidueProfile, Q: _ResidueProfile, columns, index) -> _ResidueProfile:
        anchors = self.anchors(P, Q, columns, index) if index is not None else []
        self.stats.anchors += len(anchors)
        bounds = [(-1, -1)] + anchors + [(P.grid.shape[1], Q.grid.shape[1])]
        blocks = [
            (np.arange(p0 + 1, p1), np.arange(q0 + 1, q1)) for (p0, q0), (p1, q1) in zip(bounds, bounds[1:])
        ]
        self.stats.regions += sum(1 for pc, qc in blocks if len(pc) or len(qc))

        def run(block):
            return self.align_block(P, block[0], Q, block[1])

        if self.threads > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(run, blocks))
        else:
            results = [run(b) for b in blocks]

        pairs = []
        for n, ((pc, qc), (path, cells)) in enumerate(zip(blocks, results)):
            self.stats.residue_cells += cells
            pairs.extend((None if i is GAP else int(pc[i]), None if j is GAP else int(qc[j])) for i, j in path)
            if n < len(anchors):
                pairs.append(anchors[n])

        mp, mq = P.grid.shape[0], Q.grid.shape[0]
        grid = np.full((mp + mq, len(pairs)), -1, dtype=np.intp)
        for c, (i, j) in enumerate(pairs):
            if i is not None:
                grid[:mp, c] = P.grid[:, i]
            if j is not None:
                grid[mp:, c] = Q.grid[:, j]
        return _ResidueProfile(P.members + Q.members, grid, P.residues + Q.residues)


def assemble_msa(
    root_profile: SegmentProfile,
    sequences: Sequence[AnnotatedSequence],
    tree: TreeNode,
    index: Optional[NeighborIndex],
    matrix: Optional[SubstitutionMatrix] = None,
    gap_open: float = 11,
    gap_extend: float = 1,
    threads: int = 1,
) -> tuple[Msa, AssemblyStats]:
    """Residue-level MSA of all sequences, anchored on the segment profile.

    Rows come out in the order of ``sequences``.
    """
    matrix = matrix or blosum62()
    by_id = {s.id: s for s in sequences}
    asm = _Assembler(matrix, gap_open, gap_extend, threads)
    columns = root_profile.columns if root_profile is not None else []
    if not columns:
        note = "no matched segments; falling back to plain progressive residue alignment"
        asm.stats.notes.append(note)
        log.warning(note)

    def walk(node):
        if node.is_leaf:
            return _leaf_profile(by_id[node.name])
        left, right = (walk(c) for c in node.children)
        return asm.merge(left, right, columns, index)

    prof = walk(tree)
    order = [prof.members.index(s.id) for s in sequences]
    rows = []
    for m in order:
        residues = prof.residues[m]
        rows.append("".join("-" if r < 0 else residues[r] for r in prof.grid[m]))
    msa = Msa(tuple(s.id for s in sequences), tuple(rows))
    msa.check(sequences)
    return msa, asm.stats
