"""Annotated sequences, segment decompositions and informative views.

Sequences are read from FASTA; segment annotations (secondary-structure
spans or any other typed, weighted features) come from a small TSV file::

    # seq_id  start  end  type  weight
    seq1      0      12   H     8.4
    seq1      20     27   E     6.1

Coordinates are 0-based, half-open.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ALPHABET",
    "AnnotatedSequence",
    "InformativeView",
    "InputError",
    "Segment",
    "classify_informative",
    "format_fasta",
    "format_segment_annotations",
    "parse_fasta",
    "parse_segment_annotations",
    "read_fasta",
    "read_segment_annotations",
]

#: the 20 standard amino acids plus X
ALPHABET = "ARNDCQEGHILKMFPSTWYVX"


class InputError(ValueError):
    """Malformed or inconsistent user input."""


@dataclass(frozen=True, order=True)
class Segment:
    """A typed, weighted span ``[start, end)`` of one sequence."""

    seq_id: str
    start: int
    end: int
    seg_type: str = field(compare=False)
    weight: float = field(compare=False)

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise InputError(f"bad segment span [{self.start}, {self.end}) on {self.seq_id!r}")
        if not self.weight >= 0:
            raise InputError(f"negative segment weight {self.weight} on {self.seq_id!r}")

    def __len__(self):
        return self.end - self.start

    @property
    def key(self) -> tuple[str, int]:
        return (self.seq_id, self.start)

    @property
    def label(self) -> str:
        return f"{self.seq_id}:{self.start}-{self.end}"


@dataclass(frozen=True)
class AnnotatedSequence:
    id: str
    residues: str
    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        _check_segments(self.id, len(self.residues), self.segments)

    def __len__(self):
        return len(self.residues)

    def segment_residues(self, seg: Segment) -> str:
        return self.residues[seg.start:seg.end]

    def with_segments(self, segments: Iterable[Segment]) -> "AnnotatedSequence":
        return replace(self, segments=tuple(sorted(segments)))


@dataclass(frozen=True)
class InformativeView:
    """Informative segments of a sequence and their concatenation.

    ``index_map[p]`` is the parent residue index of position ``p`` of
    ``concatenated``.
    """

    parent: AnnotatedSequence
    informative_segments: tuple[Segment, ...]
    concatenated: str
    index_map: np.ndarray

    @property
    def seq_id(self) -> str:
        return self.parent.id


def _check_segments(seq_id: str, length: int, segments: Sequence[Segment]) -> None:
    prev_end = 0
    for seg in segments:
        if seg.seq_id != seq_id:
            raise InputError(f"segment {seg.label} attached to sequence {seq_id!r}")
        if seg.end > length:
            raise InputError(f"segment {seg.label} out of range for length {length}")
        if seg.start < prev_end:
            raise InputError(f"overlapping or unsorted segments on {seq_id!r} at {seg.label}")
        prev_end = seg.end


# ---------------------------------------------------------------------------
# FASTA


def _as_text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        return data.decode("ascii")
    return data


def parse_fasta(data: bytes | str) -> list[AnnotatedSequence]:
    """Parse FASTA text into sequences with empty segment lists.

    The id is the first whitespace-delimited word of the header. Residues
    are uppercased and must come from :data:`ALPHABET`.
    """
    records: list[tuple[str, list[str]]] = []
    for lineno, line in enumerate(_as_text(data).splitlines(), 1):
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith(">"):
            words = line[1:].split()
            if not words:
                raise InputError(f"line {lineno}: empty FASTA header")
            records.append((words[0], []))
            continue
        if not records:
            raise InputError(f"line {lineno}: sequence data before first header")
        records[-1][1].append(line)

    seen = set()
    out = []
    for seq_id, chunks in records:
        if seq_id in seen:
            raise InputError(f"duplicate sequence id {seq_id!r}")
        seen.add(seq_id)
        residues = "".join("".join(chunks).split()).upper()
        if not residues:
            raise InputError(f"empty sequence {seq_id!r}")
        bad = sorted(set(residues) - set(ALPHABET))
        if bad:
            raise InputError(f"illegal residue {bad[0]!r} in sequence {seq_id!r}")
        out.append(AnnotatedSequence(seq_id, residues))
    return out


def format_fasta(sequences: Iterable[AnnotatedSequence], width: int = 60) -> str:
    lines = []
    for seq in sequences:
        lines.append(f">{seq.id}")
        for i in range(0, len(seq.residues), width):
            lines.append(seq.residues[i:i + width])
    return "\n".join(lines) + "\n"


def read_fasta(path) -> list[AnnotatedSequence]:
    with open(path, "rb") as fh:
        return parse_fasta(fh.read())


# ---------------------------------------------------------------------------
# segment annotations


def parse_segment_annotations(
    data: bytes | str, sequences: Sequence[AnnotatedSequence]
) -> list[AnnotatedSequence]:
    """Attach TSV segment annotations to ``sequences``.

    Rows are ``seq_id start end type weight``; blank lines and ``#``
    comments are skipped. Returns new sequence objects in input order.
    """
    by_id = {s.id: [] for s in sequences}
    lengths = {s.id: len(s) for s in sequences}
    for lineno, line in enumerate(_as_text(data).splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 5:
            raise InputError(f"line {lineno}: expected 5 fields, got {len(fields)}")
        seq_id, start, end, seg_type, weight = fields
        if seq_id not in by_id:
            raise InputError(f"line {lineno}: unknown sequence id {seq_id!r}")
        try:
            start_i, end_i, weight_f = int(start), int(end), float(weight)
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        if weight_f < 0:
            raise InputError(f"line {lineno}: negative weight {weight_f}")
        if not 0 <= start_i < end_i <= lengths[seq_id]:
            raise InputError(
                f"line {lineno}: segment [{start_i}, {end_i}) out of range "
                f"for {seq_id!r} (length {lengths[seq_id]})"
            )
        by_id[seq_id].append(Segment(seq_id, start_i, end_i, seg_type, weight_f))
    return [s.with_segments(by_id[s.id]) for s in sequences]


def format_segment_annotations(sequences: Iterable[AnnotatedSequence]) -> str:
    buf = io.StringIO()
    for seq in sequences:
        for seg in seq.segments:
            buf.write(f"{seg.seq_id}\t{seg.start}\t{seg.end}\t{seg.seg_type}\t{seg.weight:g}\n")
    return buf.getvalue()


def read_segment_annotations(path, sequences) -> list[AnnotatedSequence]:
    with open(path, "rb") as fh:
        return parse_segment_annotations(fh.read(), sequences)


# ---------------------------------------------------------------------------
# informative segments


def _mean_weight(parts: Sequence[Segment]) -> float:
    w = sum(p.weight * len(p) for p in parts) / sum(len(p) for p in parts)
    # keep rounding from pushing the mean outside the parts' range
    return min(max(w, min(p.weight for p in parts)), max(p.weight for p in parts))


def classify_informative(
    seq: AnnotatedSequence, alpha: float = 6.0, min_len: int = 5, merge_gap: int = 4
) -> InformativeView:
    """Select the informative segments of ``seq``.

    A segment is informative when ``weight >= alpha`` and it spans at least
    ``min_len`` residues. Consecutive informative segments of the same type
    separated by fewer than ``merge_gap`` residues are fused, absorbing the
    residues between them; the fused weight is the length-weighted mean of
    the parts.
    """
    if alpha < 0 or min_len < 1 or merge_gap < 0:
        raise ValueError("need alpha >= 0, min_len >= 1, merge_gap >= 0")

    kept = [s for s in seq.segments if s.weight >= alpha and len(s) >= min_len]
    merged: list[Segment] = []
    parts: list[list[Segment]] = []
    for seg in kept:
        if merged:
            last = merged[-1]
            if last.seg_type == seg.seg_type and seg.start - last.end < merge_gap:
                parts[-1].append(seg)
                merged[-1] = Segment(seq.id, last.start, seg.end, last.seg_type, _mean_weight(parts[-1]))
                continue
        merged.append(seg)
        parts.append([seg])

    if merged:
        index_map = np.concatenate([np.arange(s.start, s.end) for s in merged])
    else:
        index_map = np.zeros(0, dtype=np.intp)
    concatenated = "".join(seq.residues[s.start:s.end] for s in merged)
    return InformativeView(seq, tuple(merged), concatenated, index_map)
