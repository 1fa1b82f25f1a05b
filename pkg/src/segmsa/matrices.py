"""Substitution matrices in NCBI text format."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .sequences import ALPHABET, InputError

__all__ = ["SubstitutionMatrix", "blosum62", "parse_ncbi_matrix", "read_matrix"]


@dataclass(frozen=True, eq=False)
class SubstitutionMatrix:
    """Integer score table over an amino-acid alphabet.

    ``scores[i, j]`` scores ``alphabet[i]`` against ``alphabet[j]``.
    ``encode`` maps a residue string to row indices for fancy indexing.
    """

    name: str
    alphabet: str
    scores: np.ndarray

    def __post_init__(self):
        n = len(self.alphabet)
        if self.scores.shape != (n, n):
            raise InputError(f"matrix {self.name}: shape {self.scores.shape} for {n} letters")
        if not np.array_equal(self.scores, self.scores.T):
            raise InputError(f"matrix {self.name} is not symmetric")
        missing = set(ALPHABET) - set(self.alphabet)
        if missing:
            raise InputError(f"matrix {self.name} lacks residues {''.join(sorted(missing))}")
        lut = np.full(128, -1, dtype=np.intp)
        for i, ch in enumerate(self.alphabet):
            lut[ord(ch)] = i
        object.__setattr__(self, "_lut", lut)

    def encode(self, residues: str) -> np.ndarray:
        codes = self._lut[np.frombuffer(residues.encode("ascii"), dtype=np.uint8)]
        if (codes < 0).any():
            bad = residues[int(np.flatnonzero(codes < 0)[0])]
            raise InputError(f"residue {bad!r} not in matrix {self.name}")
        return codes

    def score(self, a: str, b: str) -> int:
        return int(self.scores[self._lut[ord(a)], self._lut[ord(b)]])

    def pair_table(self, x: str, y: str) -> np.ndarray:
        """``len(x) x len(y)`` table of substitution scores."""
        return self.scores[np.ix_(self.encode(x), self.encode(y))]


def parse_ncbi_matrix(text: str, name: str = "custom") -> SubstitutionMatrix:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise InputError(f"matrix {name}: no data")
    header = rows[0]
    body = rows[1:]
    if len(body) != len(header):
        raise InputError(f"matrix {name}: {len(header)} columns but {len(body)} rows")
    scores = np.zeros((len(header), len(header)), dtype=np.int64)
    for i, row in enumerate(body):
        if row[0] != header[i] or len(row) != len(header) + 1:
            raise InputError(f"matrix {name}: malformed row {i + 1}")
        scores[i] = [int(v) for v in row[1:]]
    return SubstitutionMatrix(name, "".join(header), scores)


def read_matrix(path) -> SubstitutionMatrix:
    with open(path) as fh:
        return parse_ncbi_matrix(fh.read(), name=str(path))


@lru_cache(maxsize=None)
def blosum62() -> SubstitutionMatrix:
    text = resources.files("segmsa").joinpath("data/BLOSUM62").read_text()
    return parse_ncbi_matrix(text, name="BLOSUM62")
