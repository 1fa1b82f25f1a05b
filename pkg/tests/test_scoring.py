import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segmsa.neighborhoods import DEFAULT_CURVE, NeighborIndex
from segmsa.pipeline import Config, build_segment_model
from segmsa.scoring import GapScheme, PairScheme, ScoringScheme, build_score_table, score_gap, score_pair
from segmsa.sequences import Segment
from segmsa.synthetic import planted_motif_instance

S = Segment("a", 0, 8, "H", 9)
T = Segment("b", 0, 8, "H", 9)
U1 = Segment("c", 0, 8, "H", 9)
U2 = Segment("d", 0, 8, "H", 9)
E = Segment("b", 10, 18, "E", 9)


def hand_index(seg, mutual=(), hood=None):
    """Index with explicit SEG values; ``seg`` maps (label, label) to scores."""
    segments = {x.key: x for x in (S, T, U1, U2, E)}
    scores = {}
    for (p, q), v in seg.items():
        scores[(p.key, q.key)] = scores[(q.key, p.key)] = v
    idx = NeighborIndex(("a", "b", "c", "d"), segments, scores, {}, np.zeros((4, 4)), DEFAULT_CURVE)
    idx.mutual[(S.key, T.key)] = idx.mutual[(T.key, S.key)] = tuple(mutual)
    if hood is not None:
        idx.neighborhood[S.key] = tuple(hood)
    return idx


def test_progressive_is_direct_score():
    idx = hand_index({(S, T): 12.0}, mutual=[U1])
    assert score_pair(S, T, idx, ScoringScheme("progressive")) == 12.0


def test_linear_with_empty_mutual_neighborhood():
    idx = hand_index({(S, T): 12.0})
    assert score_pair(S, T, idx, ScoringScheme("linear")) == 12.0


def test_quadratic_example():
    idx = hand_index({(S, T): 10, (S, U1): 12, (T, U1): 8, (S, U2): 9, (T, U2): 7}, mutual=[U1, U2])
    assert score_pair(S, T, idx, ScoringScheme("quadratic")) == 10 + 4 * 36 == 154
    assert score_pair(S, T, idx, ScoringScheme("linear")) == 10 + 2 * 36


def test_type_and_sequence_guards():
    idx = hand_index({(S, T): 1})
    with pytest.raises(ValueError, match="type mismatch"):
        score_pair(S, E, idx, ScoringScheme())
    with pytest.raises(ValueError, match="same sequence"):
        score_pair(T, T, idx, ScoringScheme())


def test_gap_schemes():
    idx = hand_index({(S, T): 8.2, (S, U1): 11.5}, hood=[T, U1])
    assert score_gap(S, idx, ScoringScheme(gap_scheme="zero")) == 0
    assert score_gap(S, idx, ScoringScheme(gap_scheme="max")) == 11.5
    empty = hand_index({}, hood=[])
    assert score_gap(S, empty, ScoringScheme(gap_scheme="max")) == 0


def test_scheme_coercion():
    sc = ScoringScheme("quadratic", "zero")
    assert sc.pair_scheme is PairScheme.QUADRATIC and sc.gap_scheme is GapScheme.ZERO
    with pytest.raises(ValueError):
        ScoringScheme("cubic")


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15, deadline=None)
def test_scheme_ordering_and_nonnegative_gaps(seed):
    inst = planted_motif_instance(np.random.default_rng(seed), k=4, length=80, n_motifs=2)
    model = build_segment_model(inst.sequences, Config())
    idx = model.index
    tables = {p: build_score_table(idx, ScoringScheme(p, "max")) for p in PairScheme}
    for key, prog in tables[PairScheme.PROGRESSIVE].pair_scores.items():
        lin = tables[PairScheme.LINEAR].pair_scores[key]
        quad = tables[PairScheme.QUADRATIC].pair_scores[key]
        assert prog <= lin <= quad
    for v in tables[PairScheme.LINEAR].gap_scores.values():
        assert v >= 0


def test_table_tsv_lists_each_pair_once():
    inst = planted_motif_instance(np.random.default_rng(3), k=3, length=60, n_motifs=1)
    table = build_segment_model(inst.sequences).table
    rows = table.to_tsv().splitlines()
    pair_rows = [r for r in rows if "\t-\t" not in r]
    assert len(pair_rows) == len(table.pair_scores) // 2
    assert len(rows) - len(pair_rows) == len(table.gap_scores)
