import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segmsa.neighborhoods import (
    DEFAULT_CURVE,
    ThresholdCurve,
    all_segment_pair_scores,
    build_neighbor_index,
    divergence,
    divergence_matrix,
    read_threshold_curve,
    threshold,
)
from segmsa.pairwise import bits
from segmsa.sequences import AnnotatedSequence, InputError, Segment, classify_informative


def view(seq_id, residues, segs):
    seq = AnnotatedSequence(seq_id, residues, tuple(Segment(seq_id, a, b, t, 9.0) for a, b, t in segs))
    return classify_informative(seq, 6, 5, 4)


def index_of(views, curve=DEFAULT_CURVE):
    scores = all_segment_pair_scores(views)
    alphas, _ = divergence_matrix(views)
    return build_neighbor_index(views, scores, alphas, curve)


def test_pair_score_bits():
    (sc,) = all_segment_pair_scores([view("a", "WWWWW", [(0, 5, "H")]), view("b", "WWWWW", [(0, 5, "H")])])
    assert sc.seg_score == pytest.approx(bits(55))


def test_pair_score_type_guard():
    assert all_segment_pair_scores([view("a", "WWWWW", [(0, 5, "H")]), view("b", "WWWWW", [(0, 5, "E")])]) == []


def test_pair_score_single_sequence():
    assert all_segment_pair_scores([view("a", "WWWWW", [(0, 5, "H")])]) == []


def test_divergence_clamped():
    a = view("a", "W" * 10, [(0, 10, "H")])
    b = view("b", "W" * 10, [(0, 10, "H")])
    # (0.3176 * 110 - ln 0.134) / ln 2 / 10 is about 5.33
    assert bits(110) / 10 == pytest.approx(5.33, abs=0.01)
    assert divergence(a, b) == 2.0


def test_divergence_empty_alignment():
    a = view("a", "WWWWW", [(0, 5, "H")])
    b = view("b", "DDDDD", [(0, 5, "H")])
    assert divergence(a, b) == 0.0
    D, notes = divergence_matrix([a, b])
    assert D[0, 1] == 0.0 and notes


def test_divergence_empty_view():
    a = view("a", "WWWWW", [])
    b = view("b", "WWWWW", [(0, 5, "H")])
    assert divergence(a, b) == 0.0


@given(st.text("ACDEKW", min_size=5, max_size=30), st.text("ACDEKW", min_size=5, max_size=30))
@settings(max_examples=60, deadline=None)
def test_divergence_symmetric_and_bounded(x, y):
    a = view("a", x, [(0, len(x), "H")])
    b = view("b", y, [(0, len(y), "H")])
    d = divergence(a, b)
    assert 0.0 <= d <= 2.0
    assert d == divergence(b, a)


def test_default_curve():
    assert threshold(DEFAULT_CURVE, 2.0) == 1.0
    assert threshold(DEFAULT_CURVE, 0.0) == 0.25
    assert threshold(DEFAULT_CURVE, 1.0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        threshold(DEFAULT_CURVE, 2.5)


def test_constant_curve():
    c = ThresholdCurve(((0.0, 0.3), (2.0, 0.3)))
    assert all(c(d) == pytest.approx(0.3) for d in np.linspace(0, 2, 21))


@pytest.mark.parametrize("pts", [((0.0, 0.5), (1.0, 0.2)), ((0.0, -0.1), (2.0, 1.0)), ((1.0, 0.5), (1.0, 0.6))])
def test_curve_validation(pts):
    with pytest.raises(InputError):
        ThresholdCurve(pts)


def test_curve_file(tmp_path):
    p = tmp_path / "c.tsv"
    p.write_text("# d c\n0\t0.3\n2\t0.6\n")
    c = read_threshold_curve(p)
    assert c(1.0) == pytest.approx(0.45)


@given(st.lists(st.tuples(st.floats(0, 2), st.floats(0, 3)), min_size=1, max_size=6))
def test_curve_monotone(raw):
    ds = sorted({round(d, 6) for d, _ in raw})
    cs = sorted(c for _, c in raw)[: len(ds)]
    curve = ThresholdCurve(tuple(zip(ds, cs)))
    grid = np.linspace(0, 2, 41)
    vals = [curve(d) for d in grid]
    assert all(v >= 0 for v in vals)
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


MOTIF = "WKDHWECF"


def test_identical_sequences_neighborhood():
    views = [view(n, "AA" + MOTIF + "AA", [(2, 10, "H")]) for n in "abc"]
    idx = index_of(views)
    s1, s2, s3 = (v.informative_segments[0] for v in views)
    assert set(idx.neighborhood[s1.key]) == {s2, s3}
    assert idx.mutual_neighborhood(s1, s2) == (s3,)
    assert idx.mutual_neighborhood(s2, s1) == (s3,)
    assert idx.neighbor_sequence("a") == (s1,)


def test_below_threshold_everywhere():
    views = [view("a", MOTIF, [(0, 8, "H")]), view("b", "DDDDDDDD", [(0, 8, "H")]), view("c", MOTIF, [(0, 8, "E")])]
    idx = index_of(views)
    s = views[0].informative_segments[0]
    assert idx.neighborhood[s.key] == ()
    assert all(s not in idx.neighbor_sequence(sid) for sid in "abc")


def test_closest_tie_prefers_smaller_start():
    a = view("a", MOTIF, [(0, 8, "H")])
    b = view("b", MOTIF + "GGGGG" + MOTIF, [(0, 8, "H"), (13, 21, "H")])
    idx = index_of([a, b])
    s = a.informative_segments[0]
    t0, t1 = b.informative_segments
    assert set(idx.neighbors[(s.key, "b")]) == {t0, t1}
    assert idx.seg(s, t0) == idx.seg(s, t1)
    assert idx.closest[(s.key, "b")] == t0


@st.composite
def families(draw):
    k = draw(st.integers(2, 4))
    views = []
    for n in range(k):
        pieces, segs, pos = [], [], 0
        for _ in range(draw(st.integers(0, 3))):
            body = draw(st.text("WKDHEC", min_size=5, max_size=9))
            segs.append((pos, pos + len(body), draw(st.sampled_from("HE"))))
            pieces.append(body + "GGGG")
            pos += len(body) + 4
        views.append(view(f"s{n}", "".join(pieces) or "G", segs))
    return views


@given(families())
@settings(max_examples=60, deadline=None)
def test_index_invariants(views):
    idx = index_of(views)
    pos = {v.seq_id: n for n, v in enumerate(views)}
    for v in views:
        for s in v.informative_segments:
            for w in views:
                if w is v:
                    continue
                bar = DEFAULT_CURVE(idx.divergences[pos[v.seq_id], pos[w.seq_id]]) * len(s)
                # brute-force recomputation of the neighbor set and its argmax
                expected = [t for t in w.informative_segments if t.seg_type == s.seg_type and idx.seg(s, t) >= bar]
                assert list(idx.neighbors.get((s.key, w.seq_id), ())) == expected
                if expected:
                    best = max(idx.seg(s, t) for t in expected)
                    ties = [t for t in expected if idx.seg(s, t) == best]
                    assert idx.closest[(s.key, w.seq_id)] == min(ties, key=lambda t: t.start)
        nei = set(idx.neighbor_sequence(v.seq_id))
        assert nei <= set(v.informative_segments)
    for (a, b), mn in idx.mutual.items():
        assert idx.mutual[(b, a)] == mn
        assert all(u.seq_id not in (a[0], b[0]) for u in mn)


def test_lower_threshold_grows_neighborhoods():
    views = [view("a", "AKWDHWECFA", [(0, 10, "H")]), view("b", "AKWDHWEKFA", [(0, 10, "H")]), view("c", "DKWAHWDCFE", [(0, 10, "H")])]
    low = index_of(views, ThresholdCurve(((0.0, 0.1), (2.0, 0.1))))
    high = index_of(views, ThresholdCurve(((0.0, 10.0), (2.0, 10.0))))
    for key in high.neighborhood:
        assert set(high.neighborhood[key]) <= set(low.neighborhood[key])
    assert all(not h for h in high.neighborhood.values())


def test_pair_scores_thread_independent():
    views = [view(n, "AA" + MOTIF + "AAGG" + MOTIF[::-1], [(2, 10, "H"), (14, 22, "E")]) for n in "abcd"]
    one = all_segment_pair_scores(views, threads=1)
    many = all_segment_pair_scores(views, threads=4)
    assert [(p.s, p.t, p.seg_score) for p in one] == [(p.s, p.t, p.seg_score) for p in many]
    assert len(one) == len(list(itertools.combinations(range(4), 2))) * 2
