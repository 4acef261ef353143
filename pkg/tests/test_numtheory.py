import pytest
from hypothesis import given
from hypothesis import strategies as st

from erdos_rogers.numtheory import (
    NotPrime,
    bertrand_prime,
    is_prime,
    next_prime,
    prev_prime,
    primes_between,
    require_prime,
)

from .oracles import smallest_bertrand, trial_division_prime


@pytest.mark.parametrize("n, q", [(1, 2), (10, 7), (100, 23), (10**4, 211), (10**6, 2003)])
def test_bertrand_values(n, q):
    assert bertrand_prime(n) == q
    assert 4 * n <= q * q <= 16 * n


@given(st.integers(1, 5000))
def test_bertrand_matches_scan(n):
    q = bertrand_prime(n)
    assert q == smallest_bertrand(n)
    assert 4 * n <= q * q <= 16 * n


def test_bertrand_rejects_zero():
    with pytest.raises(ValueError):
        bertrand_prime(0)


@given(st.integers(-10, 20000))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == trial_division_prime(n)


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    # strong pseudoprime to bases 2, 3, 5, 7
    assert not is_prime(3215031751)


def test_prime_neighbours():
    assert next_prime(24) == 29
    assert next_prime(29) == 29
    assert prev_prime(28) == 23
    assert prev_prime(1) is None
    assert primes_between(10, 30) == [11, 13, 17, 19, 23, 29]
    assert primes_between(24, 28) == []


def test_require_prime():
    require_prime(13)
    with pytest.raises(NotPrime):
        require_prime(15)
