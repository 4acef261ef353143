import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from erdos_rogers.cliques import to_mask
from erdos_rogers.hypergraph import (
    TYPE1,
    TYPE2,
    TYPE3,
    WITNESS_LINE_COUNT,
    BadProbability,
    Hypergraph,
    complete_set,
    enumerate_dangerous,
    heavy_lines,
    lines_meeting_subset,
    max_degree,
    sample_hypergraph,
    verify_properties,
)
from erdos_rogers.plane import build_affine_plane, general_position, truncate

from .oracles import brute_dangerous


def tp(q):
    return truncate(build_affine_plane(q))


def census_dict(C):
    return {frozenset(d.vertices): d.kind for d in C}


def removed_ids(H):
    return [L.id for L in H.base.removed_lines]


def test_sample_extremes():
    T = tp(5)
    assert sample_hypergraph(T, 1.0, 3).kept == tuple(L.id for L in T.lines)
    assert sample_hypergraph(T, 0.0, 3).kept == ()
    for p in (-0.1, 1.5, float("nan")):
        with pytest.raises(BadProbability):
            sample_hypergraph(T, p, 0)


def test_sample_binomial_q13():
    T = tp(13)
    p = math.log(13) ** 2 / 13
    sizes = np.array([len(sample_hypergraph(T, p, s).kept) for s in range(100)])
    mean, sd = 169 * p, math.sqrt(169 * p * (1 - p))
    assert abs(mean - 85.5) < 0.5 and abs(sd - 6.5) < 0.1
    assert np.all(np.abs(sizes - mean) <= 4 * sd)
    assert abs(sizes.mean() - mean) <= 3 * sd / 10


def test_sample_deterministic_and_monotone():
    T = tp(7)
    assert sample_hypergraph(T, 0.4, 9) == sample_hypergraph(T, 0.4, 9)
    lo, hi = sample_hypergraph(T, 0.3, 9), sample_hypergraph(T, 0.6, 9)
    assert set(lo.kept) <= set(hi.kept)


def test_max_degree():
    assert max_degree(sample_hypergraph(tp(5), 0.0, 0)) == 0
    assert max_degree(sample_hypergraph(tp(5), 1.0, 0)) == 5
    p = math.log(13) ** 2 / 13
    degs = [max_degree(sample_hypergraph(tp(13), p, s)) for s in range(100)]
    assert max(degs) <= 13


def test_complete_set():
    T = tp(5)
    H = sample_hypergraph(T, 0.5, 1)
    L = T.lines_by_id[H.kept[0]]
    assert complete_set(H, L.points[:2])
    assert complete_set(H, L.points)
    V = T.removed_lines[0]
    assert not complete_set(H, V.points[:2])


def test_lines_meeting_and_heavy():
    H = sample_hypergraph(tp(7), 1.0, 0)
    assert lines_meeting_subset(H, []) == 0
    assert lines_meeting_subset(H, [3]) == 7
    for t in range(5):
        A = list(range(t, 49, 7))
        assert lines_meeting_subset(H, A) >= 49 / 2
    H = sample_hypergraph(tp(7), 0.5, 4)
    B = list(range(0, 49, 3))
    assert heavy_lines(H, B, 1) == lines_meeting_subset(H, B)
    assert heavy_lines(H, B, 8) == 0
    L = H.base.lines_by_id[H.kept[0]]
    assert heavy_lines(H, L.points, 7) == 1
    with pytest.raises(ValueError):
        heavy_lines(H, B, 0)


@given(st.floats(0, 1), st.floats(0, 1), st.integers(0, 1000), st.sets(st.integers(0, 48), max_size=20), st.integers(1, 4))
def test_monotone_in_kept(p1, p2, seed, B, t):
    lo, hi = sorted((p1, p2))
    a, b = sample_hypergraph(tp(7), lo, seed), sample_hypergraph(tp(7), hi, seed)
    assert lines_meeting_subset(a, B) <= lines_meeting_subset(b, B)
    assert heavy_lines(a, B, t) <= heavy_lines(b, B, t)


def test_census_empty():
    assert len(enumerate_dangerous(sample_hypergraph(tp(5), 0.0, 0))) == 0


def test_census_q5_full_exhaustive():
    H = sample_hypergraph(tp(5), 1.0, 0)
    C = enumerate_dangerous(H)
    assert census_dict(C) == brute_dangerous(5, H.kept, removed_ids(H), exhaustive=True)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_census_q7_matches_oracle(seed):
    H = sample_hypergraph(tp(7), 0.4, seed)
    assert census_dict(enumerate_dangerous(H)) == brute_dangerous(7, H.kept, removed_ids(H))


@given(st.floats(0.3, 1.0), st.integers(0, 10**6))
def test_census_q5_property(p, seed):
    H = sample_hypergraph(tp(5), p, seed)
    assert census_dict(enumerate_dangerous(H)) == brute_dangerous(5, H.kept, removed_ids(H))


@given(st.floats(0, 1), st.floats(0, 1), st.integers(0, 10**6))
def test_census_monotone(p1, p2, seed):
    lo, hi = sorted((p1, p2))
    a = enumerate_dangerous(sample_hypergraph(tp(5), lo, seed)).vertex_sets()
    b = enumerate_dangerous(sample_hypergraph(tp(5), hi, seed)).vertex_sets()
    assert a <= b


def _on(H, p, a, b):
    return H.base.collinear(p, a, b)


@pytest.mark.parametrize("q, p, seed", [(5, 1.0, 0), (7, 0.6, 2), (7, 0.8, 5)])
def test_census_soundness(q, p, seed):
    H = sample_hypergraph(tp(q), p, seed)
    C = enumerate_dangerous(H)
    assert len(C.vertex_sets()) == len(C)
    for d in C[:: max(1, len(C) // 3000)]:
        v1, v2, v3, v4 = d.core
        assert complete_set(H, d.vertices)
        assert general_position(H.base, d.core)
        assert len(d.witness_lines) == WITNESS_LINE_COUNT[d.kind]
        assert set(d.witness_lines) <= set(H.kept)
        core_pairs = list(combinations(d.core, 2))
        if d.kind == TYPE1:
            assert list(d.core) == sorted(d.core) and d.extras[0] > v4
            assert general_position(H.base, d.vertices)
        elif d.kind == TYPE2:
            (x,) = d.extras
            hits = [pr for pr in core_pairs if _on(H, x, *pr)]
            assert hits == [(v2, v3)] or hits == [(v3, v2)]
            assert v1 < v4 and v2 < v3 and x < v2
        else:
            assert d.kind == TYPE3
            y, z = d.extras
            assert _on(H, y, v1, v3) and _on(H, y, v2, v4)
            assert _on(H, z, v1, v2) and _on(H, z, v3, v4)
            assert sum(_on(H, y, *pr) for pr in core_pairs) == 2
            assert sum(_on(H, z, *pr) for pr in core_pairs) == 2
            assert v1 == min(d.core) and v2 < v3


def test_census_canonical_is_stable():
    H = sample_hypergraph(tp(7), 0.7, 11)
    a, b = enumerate_dangerous(H), enumerate_dangerous(H)
    assert list(a) == list(b)
    kinds = [d.kind for d in a]
    assert kinds == sorted(kinds)


def test_member_within():
    H = sample_hypergraph(tp(5), 1.0, 0)
    C = enumerate_dangerous(H)
    d = C[len(C) // 2]
    extra = next(v for v in range(25) if v not in d.vertices)
    found = C.member_within(d.mask | 1 << extra)
    assert found is not None and set(found.vertices) <= set(d.vertices) | {extra}
    assert C.member_within(to_mask([0, 1, 2, 3])) is None


def test_verify_full_q3():
    H = sample_hypergraph(tp(3), 1.0, 0)
    rep = verify_properties(H, math.log(3) ** 2, 5, 0)
    assert rep.h0_ok and rep.max_degree == 3
    assert rep.dangerous_count == len(brute_dangerous(3, H.kept, removed_ids(H), exhaustive=True))


def test_verify_empty():
    H = sample_hypergraph(tp(5), 0.0, 0)
    rep = verify_properties(H, 2.0, 3, 0)
    assert rep.h0_ok and rep.max_degree == 0 and rep.dangerous_count == 0 and rep.h1_min_sampled == 0


def test_verify_q13_skips_h5():
    q = 13
    a = math.log(q) ** 2
    H = sample_hypergraph(tp(q), a / q, 1)
    rep = verify_properties(H, a, 10, 1)
    assert rep.h5_min_sampled == {}
    assert any("H5 not applicable" in n for n in rep.notices)
    names = {c.name: c.verdict for c in rep.checks()}
    assert names["H5_min_heavy_lines"] == "n/a"
    assert names["H0_pair_in_at_most_one_line"] == "pass"
    assert rep.derived_h5_bound == rep.h1_min_sampled - math.ceil(len(H.kept) / 16)


def test_verify_q17_aux_implication():
    q = 17
    a = math.log(q) ** 2
    H = sample_hypergraph(tp(q), a / q, 2)
    rep = verify_properties(H, a, 4, 2, census=False)
    assert rep.dangerous_count is None
    assert list(rep.h5_min_sampled) == [1]
    assert rep.aux_implication_ok
    assert rep.h5_min_sampled[1] >= rep.derived_h5_bound


def test_verify_deterministic():
    H = sample_hypergraph(tp(7), 0.5, 3)
    assert verify_properties(H, 3.0, 5, 8) == verify_properties(H, 3.0, 5, 8)


def test_hypergraph_rejects_removed_lines():
    T = tp(5)
    with pytest.raises(ValueError):
        Hypergraph(T, (T.removed_lines[0].id,))
