"""Residue-level pairwise alignment.

Gap convention throughout: a gap of length ``L`` costs
``gap_open + L * gap_extend`` (the BLAST convention, so open=11/extend=1
charges 12 for a single-residue gap). Penalties are given as positive
costs.

The quadratic kernel fills one DP row at a time with numpy. Horizontal
gaps are resolved with a running maximum over the row instead of a
per-cell loop; this is exact as long as ``gap_open >= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .matrices import SubstitutionMatrix, blosum62

__all__ = [
    "GAP",
    "DPResult",
    "LocalAligner",
    "LocalAlignment",
    "ResidueAlignment",
    "SmithWaterman",
    "affine_dp",
    "bits",
    "global_align_quadratic",
    "global_align_residues",
    "local_align",
    "score_columns",
]

GAP = None
NEG_INF = -np.inf

DEFAULT_LAMBDA = 0.3176
DEFAULT_LOG_K = math.log(0.134)

_STOP, _DIAG, _VERT = 0, 1, 2


@dataclass
class DPResult:
    score: float
    path: list  # (i or None, j or None), 0-based
    cells: int


def affine_dp(S: np.ndarray, gap_open: float, gap_extend: float, local: bool = False) -> DPResult:
    """Affine-gap alignment over a precomputed ``n x m`` match-score table.

    Global mode penalises end gaps. Local mode returns the best-scoring
    cell path (first maximum in row-major order). On ties the traceback
    prefers match, then a gap in the second sequence, then a gap in the
    first.
    """
    S = np.asarray(S, dtype=np.float64)
    n, m = S.shape
    o, e = float(gap_open), float(gap_extend)
    if gap_open < 0 or gap_extend < 0:
        raise ValueError("gap penalties are non-negative costs")

    H = np.empty((n + 1, m + 1))
    F = np.full((n + 1, m + 1), NEG_INF)
    ptr = np.zeros((n + 1, m + 1), dtype=np.int8)  # choice behind the non-horizontal value
    from_e = np.zeros((n + 1, m + 1), dtype=bool)
    f_open = np.ones((n + 1, m + 1), dtype=bool)
    e_src = np.zeros((n + 1, m + 1), dtype=np.intp)

    cols = np.arange(m + 1)
    if local:
        H[0] = 0.0
        H[:, 0] = 0.0
    else:
        H[0] = -(o + e * cols)
        H[0, 0] = 0.0
        H[:, 0] = -(o + e * np.arange(n + 1))
        H[0, 0] = 0.0
        F[1:, 0] = H[1:, 0]

    for i in range(1, n + 1):
        prev = H[i - 1]
        f_ext = F[i - 1, 1:] - e
        f_opn = prev[1:] - o - e
        opened = f_opn >= f_ext
        f_row = np.where(opened, f_opn, f_ext)
        F[i, 1:] = f_row
        f_open[i, 1:] = opened

        diag = prev[:-1] + S[i - 1]
        best = np.where(diag >= f_row, diag, f_row)
        choice = np.where(diag >= f_row, _DIAG, _VERT)
        if local:
            stop = best <= 0.0
            best = np.where(stop, 0.0, best)
            choice = np.where(stop, _STOP, choice)
        ptr[i, 1:] = choice

        hp = np.empty(m + 1)
        hp[0] = H[i, 0]
        hp[1:] = best
        # best horizontal-gap origin k < j for every column j
        v = hp + e * cols
        run = np.maximum.accumulate(v)
        arg = np.maximum.accumulate(np.where(v == run, cols, 0))
        e_row = run[:-1] - o - e * cols[1:]
        take_e = e_row > best
        H[i, 1:] = np.where(take_e, e_row, best)
        from_e[i, 1:] = take_e
        e_src[i, 1:] = arg[:-1]

    if local:
        flat = int(np.argmax(H))
        i, j = divmod(flat, m + 1)
        score = float(H[i, j])
        if score <= 0.0:
            return DPResult(0.0, [], n * m)
    else:
        i, j = n, m
        score = float(H[n, m])

    path = []
    state = "H"
    while True:
        if state == "F":
            path.append((i - 1, GAP))
            state = "H" if f_open[i, j] else "F"
            i -= 1
            continue
        if local:
            if i == 0 or j == 0:
                break
        else:
            if i == 0 and j == 0:
                break
            if i == 0:
                path.extend((GAP, jj) for jj in range(j - 1, -1, -1))
                break
            if j == 0:
                path.extend((ii, GAP) for ii in range(i - 1, -1, -1))
                break
        if state == "H" and from_e[i, j]:
            k = e_src[i, j]
            path.extend((GAP, jj) for jj in range(j - 1, k - 1, -1))
            j = k
            state = "Hp"
            if j == 0:
                continue
        p = ptr[i, j]
        if p == _DIAG:
            path.append((i - 1, j - 1))
            i, j = i - 1, j - 1
            state = "H"
        elif p == _VERT:
            state = "F"
        else:
            break
    path.reverse()
    return DPResult(score, path, n * m)


def score_columns(
    x: str, y: str, path, matrix: SubstitutionMatrix, gap_open: float, gap_extend: float
) -> int:
    """Score an alignment path column by column (affine gaps)."""
    total = 0
    run = None  # "x" if previous column gapped x, "y" if it gapped y
    for a, b in path:
        if a is not GAP and b is not GAP:
            total += matrix.score(x[a], y[b])
            run = None
        elif a is GAP:
            total -= gap_extend + (gap_open if run != "x" else 0)
            run = "x"
        else:
            total -= gap_extend + (gap_open if run != "y" else 0)
            run = "y"
    return total


# ---------------------------------------------------------------------------
# local alignment and bit scores


def bits(raw_score: float, lam: float = DEFAULT_LAMBDA, log_k: float = DEFAULT_LOG_K) -> float:
    """Karlin-Altschul bit score ``(lam * S - ln K) / ln 2``, floored at 0."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return max(0.0, (lam * raw_score - log_k) / math.log(2.0))


@dataclass
class LocalAlignment:
    x_start: int = 0
    x_end: int = 0
    y_start: int = 0
    y_end: int = 0
    aligned_pairs: list = field(default_factory=list)
    raw_score: int = 0
    bit_score: float = 0.0
    cells: int = 0

    @property
    def length(self) -> int:
        """Number of alignment columns."""
        return len(self.aligned_pairs)

    def __bool__(self):
        return bool(self.aligned_pairs)


def local_align(
    x: str,
    y: str,
    matrix: Optional[SubstitutionMatrix] = None,
    gap_open: float = 11,
    gap_extend: float = 1,
    lam: float = DEFAULT_LAMBDA,
    log_k: float = DEFAULT_LOG_K,
) -> LocalAlignment:
    """Optimal Smith-Waterman local alignment with affine gaps."""
    matrix = matrix or blosum62()
    if not x or not y:
        return LocalAlignment(bit_score=bits(0, lam, log_k))
    res = affine_dp(matrix.pair_table(x, y), gap_open, gap_extend, local=True)
    raw = int(round(res.score))
    if not res.path:
        return LocalAlignment(bit_score=bits(0, lam, log_k), cells=res.cells)
    xs = [a for a, _ in res.path if a is not GAP]
    ys = [b for _, b in res.path if b is not GAP]
    return LocalAlignment(
        x_start=xs[0],
        x_end=xs[-1] + 1,
        y_start=ys[0],
        y_end=ys[-1] + 1,
        aligned_pairs=res.path,
        raw_score=raw,
        bit_score=bits(raw, lam, log_k),
        cells=res.cells,
    )


#: the pluggable local aligner H: (x, y) -> LocalAlignment
LocalAligner = Callable[[str, str], LocalAlignment]


@dataclass(frozen=True)
class SmithWaterman:
    """Default local aligner H: exhaustive Smith-Waterman."""

    matrix: SubstitutionMatrix = field(default_factory=blosum62)
    gap_open: float = 11
    gap_extend: float = 1
    lam: float = DEFAULT_LAMBDA
    log_k: float = DEFAULT_LOG_K

    def __call__(self, x: str, y: str) -> LocalAlignment:
        return local_align(x, y, self.matrix, self.gap_open, self.gap_extend, self.lam, self.log_k)


# ---------------------------------------------------------------------------
# global alignment


@dataclass
class ResidueAlignment:
    top: str
    bottom: str
    score: int = 0

    def __post_init__(self):
        if len(self.top) != len(self.bottom):
            raise ValueError("alignment rows differ in length")

    def __len__(self):
        return len(self.top)

    @property
    def path(self) -> list:
        """Columns as ``(x_index or None, y_index or None)``."""
        out, i, j = [], 0, 0
        for a, b in zip(self.top, self.bottom):
            out.append((None if a == "-" else i, None if b == "-" else j))
            i += a != "-"
            j += b != "-"
        return out


def _rows_from_path(x: str, y: str, path) -> tuple[str, str]:
    top = "".join("-" if a is GAP else x[a] for a, _ in path)
    bottom = "".join("-" if b is GAP else y[b] for _, b in path)
    return top, bottom


def global_align_quadratic(
    x: str,
    y: str,
    matrix: Optional[SubstitutionMatrix] = None,
    gap_open: float = 11,
    gap_extend: float = 1,
) -> ResidueAlignment:
    """Gotoh global alignment in quadratic space."""
    matrix = matrix or blosum62()
    table = matrix.pair_table(x, y) if x and y else np.zeros((len(x), len(y)))
    res = affine_dp(table, gap_open, gap_extend)
    top, bottom = _rows_from_path(x, y, res.path)
    return ResidueAlignment(top, bottom, int(round(res.score)))


def _mm_pass(cost: Callable[[int], np.ndarray], M: int, N: int, g: float, h: float, tb: float):
    """Last-row costs of a forward Gotoh sweep (minimisation).

    Returns ``CC[j]`` (best cost of A[:M] vs B[:j]) and ``DD[j]`` (best cost
    ending in a deletion of A). ``tb`` is the open cost charged to a
    deletion touching the start of A.
    """
    ar = np.arange(N + 1, dtype=np.float64)
    CC = g + h * ar
    CC[0] = 0.0
    DD = CC + g
    t = tb
    for i in range(M):
        t += h
        DD[1:] = np.minimum(DD[1:], CC[1:] + g) + h
        cp = np.minimum(DD[1:], CC[:-1] + cost(i))
        full = np.empty(N + 1)
        full[0] = t
        full[1:] = cp
        run = np.minimum.accumulate(full - h * ar)
        CC = full
        CC[1:] = np.minimum(cp, run[:-1] + g + h * ar[1:])
    DD[0] = CC[0]
    return CC, DD


def global_align_residues(
    x: str,
    y: str,
    matrix: Optional[SubstitutionMatrix] = None,
    gap_open: float = 11,
    gap_extend: float = 1,
) -> ResidueAlignment:
    """Optimal affine-gap global alignment in linear space (Myers-Miller).

    Same optimum as :func:`global_align_quadratic`; the layout may differ
    between co-optimal alignments.
    """
    matrix = matrix or blosum62()
    g, h = float(gap_open), float(gap_extend)
    if not x or not y:
        top, bottom = (x, "-" * len(x)) if x else ("-" * len(y), y)
        score = -(g + h * len(top)) if top else 0
        return ResidueAlignment(top, bottom, int(score))

    ax = matrix.encode(x)
    by = matrix.encode(y)
    neg = -matrix.scores.astype(np.float64)
    ops: list = []  # path columns

    def gap(k):
        return 0.0 if k <= 0 else g + h * k

    def diff(a0, a1, b0, b1, tb, te):
        M, N = a1 - a0, b1 - b0
        if N == 0:
            ops.extend((i, GAP) for i in range(a0, a1))
            return
        if M == 0:
            ops.extend((GAP, j) for j in range(b0, b1))
            return
        if M == 1:
            best = min(tb, te) + h + gap(N)
            pick = None
            row = neg[ax[a0], by[b0:b1]]
            for j in range(N):
                c = gap(j) + row[j] + gap(N - j - 1)
                if c < best:
                    best, pick = c, j
            if pick is None:
                if tb <= te:
                    ops.append((a0, GAP))
                    ops.extend((GAP, j) for j in range(b0, b1))
                else:
                    ops.extend((GAP, j) for j in range(b0, b1))
                    ops.append((a0, GAP))
            else:
                ops.extend((GAP, j) for j in range(b0, b0 + pick))
                ops.append((a0, b0 + pick))
                ops.extend((GAP, j) for j in range(b0 + pick + 1, b1))
            return

        mid = M // 2
        fwd_cols = neg[:, by[b0:b1]]
        rev_cols = fwd_cols[:, ::-1]
        CC, DD = _mm_pass(lambda i: fwd_cols[ax[a0 + i]], mid, N, g, h, tb)
        RR, SS = _mm_pass(lambda i: rev_cols[ax[a1 - 1 - i]], M - mid, N, g, h, te)
        type1 = CC + RR[::-1]
        type2 = DD + SS[::-1] - g
        j1 = int(np.argmin(type1))
        j2 = int(np.argmin(type2))
        if type1[j1] <= type2[j2]:
            diff(a0, a0 + mid, b0, b0 + j1, tb, g)
            diff(a0 + mid, a1, b0 + j1, b1, g, te)
        else:
            diff(a0, a0 + mid - 1, b0, b0 + j2, tb, 0.0)
            ops.append((a0 + mid - 1, GAP))
            ops.append((a0 + mid, GAP))
            diff(a0 + mid + 1, a1, b0 + j2, b1, 0.0, te)

    diff(0, len(x), 0, len(y), g, g)
    top, bottom = _rows_from_path(x, y, ops)
    return ResidueAlignment(top, bottom, int(round(score_columns(x, y, ops, matrix, g, h))))
