import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from erdos_rogers.rng import bernoulli, derive_seed, mix64, sample_subset, uniforms


def test_uniforms_in_unit_interval_and_stable():
    u = uniforms(7, np.arange(10000))
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 0.01
    assert np.array_equal(u, uniforms(7, np.arange(10000)))
    assert not np.array_equal(u, uniforms(8, np.arange(10000)))


def test_uniform_is_per_counter():
    # a draw depends on its counter only, not on which other counters are asked for
    full = uniforms(3, np.arange(100))
    assert np.array_equal(full[[5, 50, 99]], uniforms(3, [5, 50, 99]))


def test_derive_seed_distinguishes_tags():
    seeds = {derive_seed(1, t) for t in range(100)}
    assert len(seeds) == 100
    assert 0 <= mix64(2**64 - 1) < 2**64


@given(st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32))
def test_bernoulli_coupling(p1, p2, seed):
    lo, hi = sorted((p1, p2))
    c = np.arange(500)
    a, b = bernoulli(seed, c, lo), bernoulli(seed, c, hi)
    assert not np.any(a & ~b)


@given(st.integers(0, 200), st.data(), st.integers(0, 2**40), st.integers(0, 50))
def test_sample_subset_shape(n, data, seed, trial):
    w = data.draw(st.integers(0, n))
    s = sample_subset(n, w, seed, trial)
    assert len(s) == w == len(set(s))
    assert s == sorted(s)
    assert all(0 <= v < n for v in s)
    assert s == sample_subset(n, w, seed, trial)


def test_sample_subset_roughly_uniform():
    counts = np.zeros(10)
    for t in range(4000):
        counts[sample_subset(10, 3, 11, t)] += 1
    # each element expected 1200 times, sd about 29
    assert np.all(np.abs(counts - 1200) < 150)
