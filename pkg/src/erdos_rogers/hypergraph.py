"""Random line subsets of a truncated plane and their dangerous sets."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .checks import BELOW, HOLDS, NOT_APPLICABLE, Check, verdict
from .cliques import bits, to_mask
from .plane import TruncatedPlane
from .rng import bernoulli, sample_subset

TYPE1, TYPE2, TYPE3 = 1, 2, 3
WITNESS_LINE_COUNT = {TYPE1: 10, TYPE2: 8, TYPE3: 7}


class BadProbability(ValueError):
    pass


def check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0 or p != p:
        raise BadProbability(f"probability {p} outside [0, 1]")


@dataclass(eq=False)
class Hypergraph:
    base: TruncatedPlane
    kept: tuple[int, ...]
    keep_prob: float = 1.0
    seed: int = 0

    def __post_init__(self):
        self.kept = tuple(sorted(self.kept))
        valid = self.base.lines_by_id
        bad = [lid for lid in self.kept if lid not in valid]
        if bad:
            raise ValueError(f"kept line ids not in the truncated plane: {bad[:5]}")

    def __eq__(self, other):
        return (
            isinstance(other, Hypergraph)
            and self.base == other.base
            and self.kept == other.kept
            and self.keep_prob == other.keep_prob
            and self.seed == other.seed
        )

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def n_points(self) -> int:
        return self.base.n_points

    @cached_property
    def kept_set(self) -> frozenset[int]:
        return frozenset(self.kept)

    @cached_property
    def kept_masks(self) -> list[int]:
        masks = self.base.line_masks
        return [masks[lid] for lid in self.kept]

    @cached_property
    def point_lines(self) -> tuple[tuple[int, ...], ...]:
        """Kept line ids through each point."""
        ks = self.kept_set
        return tuple(tuple(l for l in ls if l in ks) for ls in self.base.point_lines)

    @cached_property
    def cover_masks(self) -> list[int]:
        """Bitset of points joined to each point by some kept line."""
        cov = [0] * self.n_points
        for m in self.kept_masks:
            for p in bits(m):
                cov[p] |= m
        return [c & ~(1 << p) for p, c in enumerate(cov)]

    def line_of(self, u: int, v: int) -> int | None:
        """Id of the kept line through u and v, if any."""
        lid = int(self.base.line_of[u, v])
        return lid if lid in self.kept_set else None


def sample_hypergraph(tp: TruncatedPlane, keep_prob: float, seed: int) -> Hypergraph:
    """Keep each line independently; the draw for a line depends only on (seed, line id)."""
    check_probability(keep_prob)
    ids = [ln.id for ln in tp.lines]
    keep = bernoulli(seed, ids, keep_prob)
    return Hypergraph(tp, tuple(lid for lid, k in zip(ids, keep) if k), keep_prob, seed)


def degrees(H: Hypergraph) -> list[int]:
    return [len(ls) for ls in H.point_lines]


def max_degree(H: Hypergraph) -> int:
    return max(degrees(H), default=0)


def complete_set(H: Hypergraph, S: Iterable[int]) -> bool:
    """Every pair of S lies on a kept line."""
    pts = [H.base.index(p) for p in S]
    cov = H.cover_masks
    return all(cov[a] >> b & 1 for a, b in combinations(pts, 2))


def lines_meeting_subset(H: Hypergraph, A: Iterable[int] | int) -> int:
    am = A if isinstance(A, int) else to_mask(H.base.index(p) for p in A)
    return sum(1 for m in H.kept_masks if m & am)


def heavy_lines(H: Hypergraph, B: Iterable[int] | int, t: int) -> int:
    """Kept lines meeting B in at least t points."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    bm = B if isinstance(B, int) else to_mask(H.base.index(p) for p in B)
    return sum(1 for m in H.kept_masks if (m & bm).bit_count() >= t)


@dataclass(frozen=True)
class DangerousSet:
    """A dangerous configuration with roles assigned.

    ``core`` is (v1, v2, v3, v4) in role order.  For Type 1 the core is the
    four smallest labels; for Type 2 the extra point x lies on L(v2, v3);
    for Type 3, y is on L(v1, v3) and L(v2, v4) and z on L(v1, v2) and
    L(v3, v4).
    """

    kind: int
    core: tuple[int, int, int, int]
    extras: tuple[int, ...]
    witness_lines: tuple[int, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.core + self.extras))

    @property
    def mask(self) -> int:
        return to_mask(self.core + self.extras)


def _canonical(H: Hypergraph, kind: int, mask: int) -> DangerousSet:
    pts = list(bits(mask))
    lo = H.base.line_of
    lines = {}
    for a, b in combinations(pts, 2):
        lines.setdefault(int(lo[a, b]), set()).update((a, b))
    witness = tuple(sorted(lines))
    if kind == TYPE1:
        return DangerousSet(kind, tuple(pts[:4]), (pts[4],), witness)
    if kind == TYPE2:
        (triple,) = [sorted(s) for s in lines.values() if len(s) == 3]
        x, v2, v3 = triple
        v1, v4 = sorted(set(pts) - set(triple))
        return DangerousSet(kind, (v1, v2, v3, v4), (x,), witness)
    on_triple = set()
    for s in lines.values():
        if len(s) == 3:
            on_triple.update(combinations(sorted(s), 2))
    diagonals = [p for p in combinations(pts, 2) if p not in on_triple]
    extras = min(diagonals, key=lambda e: sorted(set(pts) - set(e)))
    core = sorted(set(pts) - set(extras))
    v1 = core[0]
    (v4,) = [b for a, b in diagonals if a == v1] + [a for a, b in diagonals if b == v1]
    v2, v3 = sorted(set(core) - {v1, v4})
    line13 = lines[int(lo[v1, v3])]
    y = next(e for e in extras if e in line13)
    z = next(e for e in extras if e != y)
    return DangerousSet(kind, (v1, v2, v3, v4), (y, z), witness)


class Census(Sequence):
    """Duplicate-free list of dangerous sets, ordered by (kind, vertex bitset).

    Members are stored as vertex bitsets and materialised on access, so a
    census with millions of entries stays cheap to hold.
    """

    def __init__(self, H: Hypergraph, found: dict[int, int]):
        self.H = H
        self._entries = sorted(found.items(), key=lambda e: (e[1], e[0]))

    def __len__(self):
        return len(self._entries)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        mask, kind = self._entries[i]
        return _canonical(self.H, kind, mask)

    def kinds(self) -> dict[int, int]:
        out = {TYPE1: 0, TYPE2: 0, TYPE3: 0}
        for _, k in self._entries:
            out[k] += 1
        return out

    @cached_property
    def kind_of(self) -> dict[int, int]:
        """Vertex bitset -> kind."""
        return dict(self._entries)

    @property
    def masks(self):
        return self.kind_of.keys()

    def vertex_sets(self) -> set[frozenset[int]]:
        return {frozenset(bits(m)) for m, _ in self._entries}

    @cached_property
    def union_mask(self) -> int:
        u = 0
        for m, _ in self._entries:
            u |= m
        return u

    def member_within(self, mask: int) -> DangerousSet | None:
        """Some censused set contained in the vertex set ``mask``."""
        pts = list(bits(mask))
        kind_of = self.kind_of
        for k in (5, 6):
            for sub in combinations(pts, k):
                m = to_mask(sub)
                if m in kind_of:
                    return _canonical(self.H, kind_of[m], m)
        return None


def enumerate_dangerous(H: Hypergraph) -> Census:
    """All Type 1/2/3 dangerous sets of H.

    Walks the 4-cliques in general position of the "pair covered by a kept
    line" graph, then extends each core by the points joined to all four
    core points, classified by how many of the six core lines hold them.
    """
    q = H.q
    n = q * q
    cov = H.cover_masks
    lo = H.base.line_of.tolist()
    lm = [0] * (q * q + q)
    for ln in H.base.lines:
        lm[ln.id] = ln.mask
    found: dict[int, int] = {}
    for a in range(n):
        ca = cov[a]
        Na = ca >> (a + 1) << (a + 1)
        row_a = lo[a]
        for b in bits(Na):
            row_b = lo[b]
            lab = row_a[b]
            Nab = (Na >> (b + 1) << (b + 1)) & cov[b] & ~lm[lab]
            cab = ca & cov[b]
            for c in bits(Nab):
                lac, lbc = row_a[c], row_b[c]
                Nabc = (Nab >> (c + 1) << (c + 1)) & cov[c] & ~(lm[lac] | lm[lbc])
                cabc = cab & cov[c]
                for d in bits(Nabc):
                    common = cabc & cov[d]
                    if not common:
                        continue
                    m_ab, m_ac, m_bc = lm[lab], lm[lac], lm[lbc]
                    m_ad, m_bd, m_cd = lm[row_a[d]], lm[row_b[d]], lm[lo[c][d]]
                    core = (1 << a) | (1 << b) | (1 << c) | (1 << d)
                    on = m_ab | m_ac | m_ad | m_bc | m_bd | m_cd
                    diag = ((m_ab & m_cd) | (m_ac & m_bd) | (m_ad & m_bc)) & ~core
                    for x in bits(common & ~on):
                        found[core | (1 << x)] = TYPE1
                    for x in bits(common & on & ~diag):
                        found[core | (1 << x)] = TYPE2
                    dg = common & diag
                    if dg & (dg - 1):
                        ys = list(bits(dg))
                        for y, z in combinations(ys, 2):
                            if cov[y] >> z & 1:
                                found[core | (1 << y) | (1 << z)] = TYPE3
    return Census(H, found)


@dataclass
class HReport:
    h0_ok: bool
    max_degree: int
    n_kept: int
    dangerous_count: int | None
    h1_min_sampled: int | None
    h1_samples: int
    h5_min_sampled: dict[int, int | None]
    h5_samples: int
    derived_h5_bound: int | None
    aux_implication_ok: bool
    alpha: float
    thresholds: dict[str, float] = field(default_factory=dict)
    notices: list[str] = field(default_factory=list)
    seed: int = 0

    def checks(self) -> list[Check]:
        th = self.thresholds
        rows = [
            Check("H0_pair_in_at_most_one_line", self.h0_ok, True, verdict(self.h0_ok)),
            Check("H3_max_degree", self.max_degree, th["h3"], _cmp(self.max_degree <= th["h3"])),
        ]
        if self.dangerous_count is None:
            rows.append(Check("H4_dangerous_count", None, th["h4"], NOT_APPLICABLE))
        else:
            rows.append(
                Check("H4_dangerous_count", self.dangerous_count, th["h4"], _cmp(self.dangerous_count <= th["h4"]))
            )
        rows.append(
            Check(
                "H1_min_lines_meeting_A",
                self.h1_min_sampled,
                th["h1"],
                _cmp(self.h1_min_sampled is not None and self.h1_min_sampled >= th["h1"]),
                self.seed,
            )
        )
        if not self.h5_min_sampled:
            rows.append(Check("H5_min_heavy_lines", None, th["h5"], NOT_APPLICABLE, self.seed))
        for t, v in sorted(self.h5_min_sampled.items()):
            rows.append(Check(f"H5_min_heavy_lines_t{t}", v, th["h5"], _cmp(v >= th["h5"]), self.seed))
        rows.append(
            Check(
                "H5_aux_graph_implication",
                self.aux_implication_ok,
                self.derived_h5_bound,
                verdict(self.aux_implication_ok),
                self.seed,
            )
        )
        return rows


def _cmp(ok: bool) -> str:
    # asymptotic thresholds are reported, not enforced, at desk scale
    return HOLDS if ok else BELOW


def verify_properties(
    H: Hypergraph,
    alpha: float,
    sample_budget: int,
    seed: int,
    census: Census | None | bool = True,
) -> HReport:
    """Measure H0, H3, H4 exactly and H1, H5 on sampled point sets.

    Every sampled B of size 16*t*q is split into 16*t blocks of q points,
    and the blocks count as measured A sets.  That makes the double-count
    bound ``heavy(B, t) >= min_A |L'_A| - ceil(|L'|/16)`` a deterministic
    consequence of the measured numbers, which is then checked.
    """
    if sample_budget < 1:
        raise ValueError("sample_budget must be >= 1")
    q, n = H.q, H.n_points
    masks = H.kept_masks
    h0 = all((a & b).bit_count() <= 1 for a, b in combinations(masks, 2))
    if census is True:
        census = enumerate_dangerous(H)
    dcount = len(census) if isinstance(census, Census) else None

    notices = []
    h1_values = []
    for t in range(sample_budget):
        A = to_mask(sample_subset(n, q, seed, t))
        h1_values.append(lines_meeting_subset(H, A))

    h5: dict[int, int | None] = {}
    slack = math.ceil(len(masks) / 16)
    heavy: dict[int, list[int]] = {}
    t_max = q // 16
    if t_max < 1:
        notices.append(f"H5 not applicable: no integer t with 1 <= t <= q/16 = {q / 16:.3f}")
    for t in range(1, t_max + 1):
        size = 16 * t * q
        if size > n:
            notices.append(f"H5 t={t}: set size {size} exceeds {n} points")
            continue
        heavy[t] = []
        for trial in range(sample_budget):
            B = sample_subset(n, size, seed, (t << 32) + trial + sample_budget)
            blocks = [to_mask(B[i : i + q]) for i in range(0, size, q)]
            counts = [lines_meeting_subset(H, blk) for blk in blocks]
            h1_values.extend(counts)
            heavy[t].append(heavy_lines(H, to_mask(B), t))
        h5[t] = min(heavy[t])

    h1_min = min(h1_values) if h1_values else None
    derived = h1_min - slack if h1_min is not None else None
    aux_ok = all(h >= derived for hs in heavy.values() for h in hs) if derived is not None else True
    thresholds = {
        "h3": 2 * alpha,
        "h4": math.ceil(2 * alpha**8 * q),
        "h1": math.ceil(alpha * q / 4),
        "h5": math.ceil(alpha * q / 8),
    }
    return HReport(
        h0_ok=h0,
        max_degree=max_degree(H),
        n_kept=len(masks),
        dangerous_count=dcount,
        h1_min_sampled=h1_min,
        h1_samples=len(h1_values),
        h5_min_sampled=h5,
        h5_samples=sample_budget * len(heavy),
        derived_h5_bound=derived,
        aux_implication_ok=aux_ok,
        alpha=alpha,
        thresholds=thresholds,
        notices=notices,
        seed=seed,
    )
