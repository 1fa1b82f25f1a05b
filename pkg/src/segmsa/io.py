"""Readers and writers for alignments, distance matrices and score dumps."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .progressive import Msa
from .sequences import ALPHABET, InputError

__all__ = ["format_aligned_fasta", "format_clustal", "format_msa", "format_phylip", "parse_aligned_fasta"]


def format_aligned_fasta(msa: Msa, width: int = 60) -> str:
    out = []
    for sid, row in zip(msa.ids, msa.rows):
        out.append(f">{sid}")
        out.extend(row[i:i + width] for i in range(0, len(row), width))
    return "\n".join(out) + "\n"


def format_clustal(msa: Msa, width: int = 60) -> str:
    pad = max((len(i) for i in msa.ids), default=0) + 4
    out = ["CLUSTAL W multiple sequence alignment", "", ""]
    for start in range(0, max(msa.width, 1), width):
        for sid, row in zip(msa.ids, msa.rows):
            out.append(f"{sid:<{pad}}{row[start:start + width]}")
        cons = []
        for c in range(start, min(start + width, msa.width)):
            col = {r[c] for r in msa.rows}
            cons.append("*" if len(col) == 1 and "-" not in col else " ")
        out.append(" " * pad + "".join(cons))
        out.append("")
    return "\n".join(out) + "\n"


def format_msa(msa: Msa, fmt: str = "fasta") -> str:
    if fmt == "fasta":
        return format_aligned_fasta(msa)
    if fmt == "clustal":
        return format_clustal(msa)
    raise ValueError(f"unknown alignment format {fmt!r}")


def parse_aligned_fasta(data: bytes | str) -> Msa:
    text = data.decode("ascii") if isinstance(data, (bytes, bytearray)) else data
    ids, rows = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            words = line[1:].split()
            if not words:
                raise InputError(f"line {lineno}: empty header")
            ids.append(words[0])
            rows.append([])
        elif not ids:
            raise InputError(f"line {lineno}: data before first header")
        else:
            rows[-1].append(line.replace(".", "-").upper())
    joined = ["".join(r) for r in rows]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate ids in alignment")
    if len({len(r) for r in joined}) > 1:
        raise InputError("alignment rows differ in length")
    legal = set(ALPHABET) | {"-"}
    for sid, row in zip(ids, joined):
        bad = set(row) - legal
        if bad:
            raise InputError(f"illegal character {sorted(bad)[0]!r} in alignment row {sid!r}")
    return Msa(tuple(ids), tuple(joined))


def format_phylip(D: np.ndarray, names: Sequence[str]) -> str:
    lines = [f"{len(names)}"]
    for name, row in zip(names, D):
        lines.append(f"{name:<10} " + " ".join(f"{v:.6f}" for v in row))
    return "\n".join(lines) + "\n"
