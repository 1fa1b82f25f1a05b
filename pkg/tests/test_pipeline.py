import numpy as np
import pytest

from segmsa.io import format_aligned_fasta, format_phylip
from segmsa.pipeline import Config, align, build_segment_model
from segmsa.sequences import AnnotatedSequence, Segment
from segmsa.synthetic import planted_motif_instance, random_annotated_family


def test_identical_sequences():
    seq = "MKT" + "WKDHWECF" + "GSGS"
    res = align([AnnotatedSequence(n, seq, (Segment(n, 3, 11, "H", 9),)) for n in "abc"])
    assert res.msa.rows == (seq,) * 3
    # identical inputs are equidistant, so every branch has the same length
    leaves = [n for n in res.tree.postorder() if n.is_leaf]
    assert sorted(n.name for n in leaves) == ["a", "b", "c"]
    assert len({n.length for n in leaves}) == 1
    assert np.all(res.distances == 0)


def test_no_informative_segments_falls_back(caplog):
    seqs = [AnnotatedSequence("a", "ACDEFGHIK"), AnnotatedSequence("b", "ACDFGHIK"), AnnotatedSequence("c", "ACEFGHK")]
    res = align(seqs)
    res.msa.check(seqs)
    assert any("falling back" in n for n in res.notes)
    assert "falling back" in caplog.text
    assert res.cells["segment_nw"] == 0


def test_segment_guidance_off():
    inst = planted_motif_instance(np.random.default_rng(0), k=4, length=60, n_motifs=1)
    res = align(inst.sequences, Config(segment_guided=False))
    res.msa.check(inst.sequences)
    assert res.cells["segment_nw"] == 0 and res.cells["residue"] > 0


def test_needs_two_sequences():
    with pytest.raises(ValueError):
        align([AnnotatedSequence("a", "ACD")])


@pytest.mark.parametrize("scheme", ["progressive", "linear", "quadratic"])
@pytest.mark.parametrize("gaps", ["zero", "max"])
def test_all_schemes_produce_valid_msa(scheme, gaps):
    inst = planted_motif_instance(np.random.default_rng(5), k=5, length=100, n_motifs=2)
    res = align(inst.sequences, Config(pair_scheme=scheme, gap_scheme=gaps))
    res.msa.check(inst.sequences)


def test_threads_do_not_change_output():
    inst = planted_motif_instance(np.random.default_rng(12), k=6, length=120, n_motifs=3)
    a = align(inst.sequences, Config(threads=1))
    b = align(inst.sequences, Config(threads=4))
    assert format_aligned_fasta(a.msa) == format_aligned_fasta(b.msa)
    assert a.tree.newick() == b.tree.newick()
    assert format_phylip(a.distances, a.names) == format_phylip(b.distances, b.names)


def test_random_families_round_trip():
    rng = np.random.default_rng(77)
    for _ in range(10):
        seqs = random_annotated_family(rng, int(rng.integers(2, 6)), max_len=80)
        align(seqs).msa.check(seqs)


def test_model_distances_are_a_metric_shape():
    inst = planted_motif_instance(np.random.default_rng(3), k=5, length=100, n_motifs=2)
    model = build_segment_model(inst.sequences)
    D = model.distances
    assert np.array_equal(D, D.T) and np.all(np.diag(D) == 0)
    assert np.all((D >= 0) & (D <= 1))


def test_report_lists_stages():
    inst = planted_motif_instance(np.random.default_rng(4), k=3, length=60, n_motifs=1)
    text = align(inst.sequences).report()
    assert "time_assemble=" in text and "cells_segment_nw=" in text
