"""Alignment accuracy: sum-of-pairs score and conserved-column recovery."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .matrices import SubstitutionMatrix, blosum62
from .progressive import Msa
from .sequences import InputError

__all__ = [
    "EvalReport",
    "ReferenceAlignment",
    "column_correlation",
    "evaluate",
    "pair_correlation",
    "sp_score",
]


@dataclass(frozen=True)
class ReferenceAlignment:
    msa: Msa
    flagged: tuple[int, ...]

    def __post_init__(self):
        bad = [c for c in self.flagged if not 0 <= c < self.msa.width]
        if bad:
            raise InputError(f"flagged column {bad[0]} outside reference width {self.msa.width}")
        object.__setattr__(self, "flagged", tuple(sorted(set(self.flagged))))

    @classmethod
    def all_columns(cls, msa: Msa) -> "ReferenceAlignment":
        return cls(msa, tuple(range(msa.width)))


def sp_score(msa: Msa, matrix: Optional[SubstitutionMatrix] = None, gap_penalty: float = 4) -> float:
    """Sum over columns and row pairs: substitution score, ``-gap_penalty`` for residue/gap."""
    matrix = matrix or blosum62()
    k = len(msa)
    if k < 2 or msa.width == 0:
        return 0.0
    idx = np.full(128, -1, dtype=np.intp)
    for n, ch in enumerate(matrix.alphabet):
        idx[ord(ch)] = n
    codes = np.stack([idx[np.frombuffer(r.encode("ascii"), dtype=np.uint8)] for r in msa.rows])
    gap = np.stack([np.frombuffer(r.encode("ascii"), dtype=np.uint8) == ord("-") for r in msa.rows])
    total = 0.0
    for a, b in combinations(range(k), 2):
        both = ~gap[a] & ~gap[b]
        total += float(matrix.scores[codes[a, both], codes[b, both]].sum())
        total -= gap_penalty * float(np.count_nonzero(gap[a] ^ gap[b]))
    return total


def _compatible(test: Msa, ref: Msa) -> tuple[np.ndarray, np.ndarray]:
    if set(test.ids) != set(ref.ids):
        raise InputError("test and reference alignments have different members")
    t_deg, r_deg = test.degapped(), ref.degapped()
    for sid in ref.ids:
        if t_deg[sid] != r_deg[sid]:
            raise InputError(f"member {sid} degaps differently in test and reference")
    order = [test.ids.index(sid) for sid in ref.ids]
    return test.residue_columns()[order], ref.residue_columns()


def column_correlation(test: Msa, ref: ReferenceAlignment) -> Optional[float]:
    """Percentage of flagged reference columns reproduced exactly in ``test``.

    A column is reproduced when the same set of (member, residue) pairs
    forms one column of the test alignment. ``None`` when nothing is
    flagged.
    """
    if not ref.flagged:
        return None
    t_cols, r_cols = _compatible(test, ref.msa)
    # position of every residue of every member in the test alignment
    where = {}
    for m in range(t_cols.shape[0]):
        pos = np.flatnonzero(t_cols[m] >= 0)
        where[m] = pos
    hit = 0
    for c in ref.flagged:
        col = r_cols[:, c]
        present = np.flatnonzero(col >= 0)
        test_cols = {int(where[m][col[m]]) for m in present}
        if len(test_cols) != 1:
            continue
        tc = test_cols.pop()
        if np.array_equal(t_cols[:, tc] >= 0, col >= 0):
            hit += 1
    return 100.0 * hit / len(ref.flagged)


def pair_correlation(test: Msa, ref: ReferenceAlignment) -> Optional[float]:
    """Percentage of residue pairs in flagged reference columns aligned together in ``test``."""
    if not ref.flagged:
        return None
    t_cols, r_cols = _compatible(test, ref.msa)
    where = {m: np.flatnonzero(t_cols[m] >= 0) for m in range(t_cols.shape[0])}
    total = hit = 0
    for c in ref.flagged:
        col = r_cols[:, c]
        present = np.flatnonzero(col >= 0)
        for a, b in combinations(present, 2):
            total += 1
            hit += where[a][col[a]] == where[b][col[b]]
    if total == 0:
        return None
    return 100.0 * hit / total


@dataclass
class EvalReport:
    column_correlation: Optional[float]
    pair_correlation: Optional[float]
    sp_score: float
    flagged: int

    def as_text(self) -> str:
        def pct(v):
            return "N/A" if v is None else f"{v:.2f}"

        return (
            f"column_correlation={pct(self.column_correlation)}\n"
            f"pair_correlation={pct(self.pair_correlation)}\n"
            f"sp_score={self.sp_score:g}\n"
            f"flagged_columns={self.flagged}\n"
        )


def evaluate(
    test: Msa,
    ref: ReferenceAlignment,
    matrix: Optional[SubstitutionMatrix] = None,
    gap_penalty: float = 4,
) -> EvalReport:
    return EvalReport(
        column_correlation(test, ref),
        pair_correlation(test, ref),
        sp_score(test, matrix, gap_penalty),
        len(ref.flagged),
    )


def flagged_from_lines(lines: Sequence[str]) -> tuple[int, ...]:
    out = []
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(int(line))
        except ValueError:
            raise InputError(f"flags line {n}: not an integer: {line!r}") from None
    return tuple(out)
