"""Synthetic annotated families with planted, typed motifs.

Each instance comes with its ground-truth reference alignment: motif
residues share columns, everything else is left-justified between motifs.
Motif columns are flagged as the conserved features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evaluation import ReferenceAlignment
from .progressive import Msa
from .sequences import AnnotatedSequence, Segment

__all__ = ["PlantedInstance", "planted_motif_instance", "random_annotated_family"]

AMINO = "ARNDCQEGHILKMFPSTWYV"


@dataclass
class PlantedInstance:
    sequences: list
    reference: ReferenceAlignment
    motif_types: tuple


def _random_residues(rng, n):
    return "".join(rng.choice(list(AMINO), size=n))


def _background_segments(rng, seq_id, lo, hi, max_weight):
    """Low-weight segments tiling part of ``[lo, hi)``."""
    out = []
    pos = lo
    while pos < hi:
        pos += int(rng.integers(0, 4))
        length = int(rng.integers(3, 16))
        if pos + length > hi:
            break
        out.append(Segment(seq_id, pos, pos + length, str(rng.choice(["H", "E", "C"])), float(rng.uniform(1, max_weight))))
        pos += length
    return out


def planted_motif_instance(
    rng: np.random.Generator,
    k: int = 5,
    length: int = 150,
    n_motifs: int = 3,
    motif_len: tuple = (8, 12),
    motif_weight: float = 8.0,
    mutation_rate: float = 0.10,
    background_weight: float = 5.0,
    min_spacer: int = 4,
) -> PlantedInstance:
    """Plant ``n_motifs`` shared motifs into ``k`` random sequences.

    Each motif copy carries at most ``floor(mutation_rate * len)`` point
    substitutions. Background segments get weights below
    ``background_weight``.
    """
    lens = [int(rng.integers(motif_len[0], motif_len[1] + 1)) for _ in range(n_motifs)]
    motifs = [_random_residues(rng, n) for n in lens]
    types = tuple(str(rng.choice(["H", "E"])) for _ in range(n_motifs))
    free = length - sum(lens)
    if free < (n_motifs + 1) * min_spacer:
        raise ValueError("sequence too short for the motifs")

    seqs = []
    layouts = []  # per sequence: list of spacer lengths
    for m in range(k):
        seq_id = f"seq{m + 1:02d}"
        extra = free - (n_motifs + 1) * min_spacer
        cuts = np.sort(rng.integers(0, extra + 1, size=n_motifs))
        spacers = np.diff(np.concatenate([[0], cuts, [extra]])) + min_spacer
        parts, segs = [], []
        pos = 0
        for n in range(n_motifs):
            sp = int(spacers[n])
            parts.append(_random_residues(rng, sp))
            segs += _background_segments(rng, seq_id, pos, pos + sp, background_weight)
            pos += sp
            copy = list(motifs[n])
            n_mut = int(rng.integers(0, int(mutation_rate * lens[n]) + 1))
            for site in rng.choice(lens[n], size=n_mut, replace=False):
                choices = [a for a in AMINO if a != copy[site]]
                copy[site] = str(rng.choice(choices))
            parts.append("".join(copy))
            segs.append(Segment(seq_id, pos, pos + lens[n], types[n], motif_weight))
            pos += lens[n]
        sp = int(spacers[-1])
        parts.append(_random_residues(rng, sp))
        segs += _background_segments(rng, seq_id, pos, pos + sp, background_weight)
        seqs.append(AnnotatedSequence(seq_id, "".join(parts), tuple(sorted(segs))))
        layouts.append([int(s) for s in spacers])

    rows = [[] for _ in range(k)]
    flagged = []
    width = 0
    for n in range(n_motifs + 1):
        span = max(lay[n] for lay in layouts)
        for m, seq in enumerate(seqs):
            start = sum(layouts[m][:n]) + sum(lens[:n])
            chunk = seq.residues[start:start + layouts[m][n]]
            rows[m].append(chunk + "-" * (span - len(chunk)))
        width += span
        if n < n_motifs:
            for m, seq in enumerate(seqs):
                start = sum(layouts[m][: n + 1]) + sum(lens[:n])
                rows[m].append(seq.residues[start:start + lens[n]])
            flagged.extend(range(width, width + lens[n]))
            width += lens[n]
    msa = Msa(tuple(s.id for s in seqs), tuple("".join(r) for r in rows))
    return PlantedInstance(seqs, ReferenceAlignment(msa, tuple(flagged)), types)


def random_annotated_family(rng: np.random.Generator, k: int, max_len: int = 300) -> list:
    """Unrelated random sequences with random segment annotations of any weight."""
    out = []
    for m in range(k):
        seq_id = f"r{m}"
        n = int(rng.integers(1, max_len + 1))
        residues = _random_residues(rng, n)
        segs = _background_segments(rng, seq_id, 0, n, 10.0)
        out.append(AnnotatedSequence(seq_id, residues, tuple(segs)))
    return out
