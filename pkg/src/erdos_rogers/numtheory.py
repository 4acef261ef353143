"""Small prime utilities."""

from __future__ import annotations

import math

import numpy as np

# deterministic Miller-Rabin for n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class NotPrime(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(q: int, what: str = "q") -> None:
    if not is_prime(q):
        raise NotPrime(f"{what}={q} is not prime")


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def prev_prime(n: int) -> int | None:
    """Largest prime <= n, or None."""
    while n >= 2:
        if is_prime(n):
            return n
        n -= 1
    return None


def primes_between(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi (sieve of Eratosthenes)."""
    if hi < 2 or hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(hi) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(sieve) if p >= lo]


def bertrand_prime(n: int) -> int:
    """Smallest prime q with 4n <= q**2 <= 16n.

    Bertrand's postulate puts a prime in [ceil(2 sqrt n), 4 sqrt n], so the
    search always terminates inside the window.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    q = math.isqrt(4 * n)
    if q * q < 4 * n:
        q += 1
    q = next_prime(q)
    assert q * q <= 16 * n, (n, q)
    return q
