"""Counter-based random streams.

Every random draw in the package is a pure function of ``(seed, counter)``,
so results never depend on iteration order or on how work is partitioned.
The mixer is the splitmix64 finalizer, evaluated on numpy ``uint64`` arrays
(arithmetic wraps modulo 2**64).
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# stage tags for seed derivation; part of the on-disk format contract
STAGE_HYPERGRAPH = 1
STAGE_PARTITION = 2
STAGE_SPARSIFY = 3
STAGE_COVER = 4
STAGE_PROPERTIES = 5


def mix64(x: int) -> int:
    """splitmix64 finalizer on a Python int (taken modulo 2**64)."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master: int, tag: int) -> int:
    """Seed for a pipeline stage (or trial) derived from a master seed."""
    return mix64(mix64(master & MASK64) ^ (tag & MASK64))


def _mix64_array(x: np.ndarray) -> np.ndarray:
    x = x + np.uint64(_GOLDEN)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def uniforms(seed: int, counters) -> np.ndarray:
    """Uniform doubles in [0, 1), one per counter, keyed by ``seed``."""
    c = np.asarray(counters, dtype=np.uint64)
    key = np.uint64(mix64(seed & MASK64))
    with np.errstate(over="ignore"):
        bits = _mix64_array(_mix64_array(c ^ key) + key)
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def bernoulli(seed: int, counters, p: float) -> np.ndarray:
    """Independent Bernoulli(p) draws; raising ``p`` never turns a True off."""
    return uniforms(seed, counters) < p


def sample_subset(n: int, w: int, seed: int, trial: int = 0) -> list[int]:
    """Uniform ``w``-subset of ``range(n)`` by partial Fisher-Yates.

    The stream is keyed by ``(seed, trial)``, so trials are reproducible and
    can be evaluated in any order.
    """
    if not 0 <= w <= n:
        raise ValueError(f"subset size {w} outside [0, {n}]")
    u = uniforms(derive_seed(seed, trial), np.arange(w, dtype=np.uint64))
    span = np.arange(n, n - w, -1, dtype=np.float64)
    jumps = (u * span).astype(np.int64).tolist()
    perm = list(range(n))
    for i, j in enumerate(jumps):
        j += i
        perm[i], perm[j] = perm[j], perm[i]
    return sorted(perm[:w])
