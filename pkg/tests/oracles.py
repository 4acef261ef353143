"""Independent reference implementations used only by the tests.

Nothing here calls the package's search or incidence code: collinearity and
line membership come straight from coordinates mod q.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

# ---------------------------------------------------------------- geometry


def coords(q: int) -> np.ndarray:
    idx = np.arange(q * q)
    return np.stack([idx // q, idx % q], axis=1)


def line_id_of_pair(q: int, u: int, v: int) -> int:
    """Affine line through u != v; vertical lines are q*q + x."""
    (x1, y1), (x2, y2) = divmod(u, q), divmod(v, q)
    if x1 == x2:
        return q * q + x1
    m = (y2 - y1) * pow(x2 - x1, -1, q) % q
    b = (y1 - m * x1) % q
    return m * q + b


def pair_line_table(q: int) -> np.ndarray:
    n = q * q
    t = np.full((n, n), -1, dtype=np.int64)
    for u in range(n):
        for v in range(u + 1, n):
            t[u, v] = t[v, u] = line_id_of_pair(q, u, v)
    return t


def collinear_table(q: int, removed: set[int]) -> np.ndarray:
    """col[a, b, c] iff a, b, c are distinct and lie on a common non-removed line."""
    n = q * q
    xy = coords(q)
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    det = (xy[b, 0] - xy[a, 0]) * (xy[c, 1] - xy[a, 1]) - (xy[b, 1] - xy[a, 1]) * (xy[c, 0] - xy[a, 0])
    distinct = (a != b) & (b != c) & (a != c)
    col = distinct & (det % q == 0)
    lines = pair_line_table(q)
    ab = lines[a, b]
    return col & ~np.isin(ab, list(removed))


def covered_table(q: int, kept: set[int]) -> np.ndarray:
    lines = pair_line_table(q)
    cov = np.isin(lines, list(kept))
    np.fill_diagonal(cov, False)
    return cov


# ------------------------------------------------------- dangerous sets

_MATCHINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
_CORE_PAIRS = list(combinations(range(4), 2))


def _complete_sets(cov: np.ndarray, k: int) -> np.ndarray:
    """All k-sets (sorted rows) whose pairs are all covered, grown one vertex at a time."""
    n = cov.shape[0]
    rows = np.arange(n)[:, None]
    for _ in range(k - 1):
        out = []
        for v in range(n):
            sel = rows[:, -1] < v
            sel &= cov[rows, v].all(axis=1)
            if sel.any():
                r = rows[sel]
                out.append(np.hstack([r, np.full((len(r), 1), v)]))
        rows = np.vstack(out) if out else np.empty((0, rows.shape[1] + 1), dtype=int)
    return rows


def _all_subsets(n: int, k: int) -> np.ndarray:
    return np.array(list(combinations(range(n), k)), dtype=int).reshape(-1, k)


def brute_dangerous(q: int, kept, removed_ids, exhaustive: bool = False) -> dict[frozenset, int]:
    """vertex set -> kind (1, 2, 3) straight from the definitions.

    Candidates are the complete 5- and 6-sets (completeness is part of every
    definition).  With ``exhaustive`` every 5- and 6-subset is generated and
    filtered, which is only affordable for q <= 5.
    """
    kept = set(kept)
    cov = covered_table(q, kept)
    col = collinear_table(q, set(removed_ids))
    out: dict[frozenset, int] = {}

    def candidates(k):
        if exhaustive:
            rows = _all_subsets(q * q, k)
            ok = np.ones(len(rows), dtype=bool)
            for i, j in combinations(range(k), 2):
                ok &= cov[rows[:, i], rows[:, j]]
            return rows[ok]
        return _complete_sets(cov, k)

    five = candidates(5)
    if len(five):
        ntrip = np.zeros(len(five), dtype=int)
        for i, j, l in combinations(range(5), 3):
            ntrip += col[five[:, i], five[:, j], five[:, l]]
        for row, t in zip(five.tolist(), ntrip.tolist()):
            if t == 0:
                out[frozenset(row)] = 1
            elif t == 1:
                out[frozenset(row)] = 2

    six = candidates(6)
    if len(six):
        hit = np.zeros(len(six), dtype=bool)
        for yi, zi in combinations(range(6), 2):
            core = [i for i in range(6) if i not in (yi, zi)]
            C = six[:, core]
            gp = np.ones(len(six), dtype=bool)
            for i, j, l in combinations(range(4), 3):
                gp &= ~col[C[:, i], C[:, j], C[:, l]]

            def pattern(p):
                return np.stack([col[six[:, p], C[:, a], C[:, b]] for a, b in _CORE_PAIRS], axis=1)

            py, pz = pattern(yi), pattern(zi)
            for my, mz in ((a, b) for a in _MATCHINGS for b in _MATCHINGS if a != b):
                ty = np.array([(a, b) in my for a, b in _CORE_PAIRS])
                tz = np.array([(a, b) in mz for a, b in _CORE_PAIRS])
                hit |= gp & (py == ty).all(axis=1) & (pz == tz).all(axis=1)
        for row in six[hit].tolist():
            out[frozenset(row)] = 3
    return out


# ---------------------------------------------------------------- graphs


def partite_adjacency(q: int, kept, labels: dict[int, tuple[int, ...]]) -> np.ndarray:
    """u ~ v iff a kept line holds both and their labels on it differ."""
    n = q * q
    lines = pair_line_table(q)
    kept = set(kept)
    adj = np.zeros((n, n), dtype=bool)
    for u in range(n):
        for v in range(u + 1, n):
            lid = int(lines[u, v])
            if lid not in kept:
                continue
            # a line's points sorted by index run along x, or along y for verticals
            pu, pv = (u % q, v % q) if lid >= q * q else (u // q, v // q)
            if labels[lid][pu] != labels[lid][pv]:
                adj[u, v] = adj[v, u] = True
    return adj


def naive_cliques(adj: np.ndarray, k: int, vertices=None) -> list[tuple[int, ...]]:
    vs = range(len(adj)) if vertices is None else sorted(vertices)
    return [c for c in combinations(vs, k) if all(adj[a, b] for a, b in combinations(c, 2))]


def naive_ks1_per_edge(adj: np.ndarray, s: int, u: int, v: int) -> int:
    common = [w for w in range(len(adj)) if adj[u, w] and adj[v, w]]
    return sum(1 for c in combinations(common, s - 1) if all(adj[a, b] for a, b in combinations(c, 2)))


def brute_s_independence(adj: np.ndarray, s: int) -> int:
    n = len(adj)
    for size in range(n, 0, -1):
        for sub in combinations(range(n), size):
            if not any(all(adj[a, b] for a, b in combinations(c, 2)) for c in combinations(sub, s)):
                return size
    return 0


# ----------------------------------------------------------- numbers


def trial_division_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def smallest_bertrand(n: int) -> int:
    q = 2
    while not (trial_division_prime(q) and 4 * n <= q * q):
        q += 1
    return q


def mp_two_y_dab(q: int, s: int, beta_exponent_scale: int = 4):
    """2 y d_AB with y and d_AB evaluated separately at 400 digits.

    y = (ln q)^(-4 s^2) q^(-64 s beta q), d_AB = q^(64 s beta q); the
    product is computed as an exponent sum so nothing underflows.
    """
    import mpmath as mp

    with mp.workdps(400):
        L = mp.log(q)
        beta = L ** (beta_exponent_scale * s * s)
        H = 64 * s * beta * q * L
        ln_y = -4 * s * s * mp.log(L) - H
        ln_d = H
        return +mp.mpf(2) * mp.e ** (ln_y + ln_d)
