"""Exact clique search on bitset graphs.

A :class:`Graph` stores one Python ``int`` per vertex as its neighbourhood
bitset.  Vertex labels are never renumbered: an induced subgraph keeps the
labels of its parent and simply marks the other vertices inactive.  That
keeps witnesses comparable across the build/prune/induce stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

from .rng import sample_subset


class TooLarge(ValueError):
    pass


class BadSize(ValueError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Simple undirected graph on vertex labels ``0..n-1``."""

    def __init__(self, n: int, adj: list[int] | None = None, active: int | None = None):
        self.n = n
        self.adj = list(adj) if adj is not None else [0] * n
        self.active = (1 << n) - 1 if active is None else active

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.active == other.active
            and self.adj == other.adj
        )

    def __repr__(self):
        return f"Graph(n={self.n}, vertices={self.n_vertices}, edges={self.n_edges})"

    @property
    def vertices(self) -> list[int]:
        return list(bits(self.active))

    @property
    def n_vertices(self) -> int:
        return self.active.bit_count()

    @cached_property
    def n_edges(self) -> int:
        return sum(self.adj[v].bit_count() for v in bits(self.active)) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in bits(self.active):
            for v in bits(self.adj[u] >> (u + 1) << (u + 1)):
                yield u, v

    def induced(self, vertices: Iterable[int] | int) -> "Graph":
        keep = vertices if isinstance(vertices, int) else to_mask(vertices)
        keep &= self.active
        adj = [a & keep if keep >> v & 1 else 0 for v, a in enumerate(self.adj)]
        return Graph(self.n, adj, keep)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for u, v in combinations(vs, 2)) and all(
            self.active >> v & 1 for v in vs
        )

    @cached_property
    def degeneracy_order(self) -> list[int]:
        """Smallest-last ordering of the active vertices (bucket queue)."""
        deg = {v: (self.adj[v] & self.active).bit_count() for v in bits(self.active)}
        if not deg:
            return []
        buckets: list[set[int]] = [set() for _ in range(max(deg.values()) + 1)]
        for v, d in deg.items():
            buckets[d].add(v)
        remaining = self.active
        order = []
        lo = 0
        for _ in range(len(deg)):
            lo = max(lo - 1, 0)
            while not buckets[lo]:
                lo += 1
            v = min(buckets[lo])
            buckets[lo].discard(v)
            order.append(v)
            remaining ^= 1 << v
            for u in bits(self.adj[v] & remaining):
                d = deg[u]
                buckets[d].discard(u)
                deg[u] = d - 1
                buckets[d - 1].add(u)
        return order

    @cached_property
    def _later(self) -> dict[int, int]:
        """For each vertex, the bitset of vertices after it in the ordering."""
        out = {}
        acc = 0
        for v in reversed(self.degeneracy_order):
            out[v] = acc
            acc |= 1 << v
        return out


@dataclass(frozen=True)
class CliqueWitness:
    vertices: tuple[int, ...]

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)


@dataclass
class CoverEstimate:
    subset_size: int
    trials: int
    hits: int = 0
    seed: int = 0
    miss_examples: list[list[int]] = field(default_factory=list)

    @property
    def all_hit(self) -> bool:
        return self.hits == self.trials


def _has_colors(adj: list[int], P: int, r: int) -> bool:
    """Greedy colouring of P uses at least r colours (else no r-clique)."""
    c = 0
    while P:
        c += 1
        if c >= r:
            return True
        avail = P
        while avail:
            low = avail & -avail
            P ^= low
            avail &= ~(adj[low.bit_length() - 1] | low)
    return False


def _extend(adj: list[int], P: int, r: int) -> list[int] | None:
    """r pairwise adjacent vertices inside candidate set P, or None."""
    if r == 0:
        return []
    if r == 1:
        return [(P & -P).bit_length() - 1] if P else None
    if P.bit_count() < r:
        return None
    if r >= 3 and not _has_colors(adj, P, r):
        return None
    while P:
        if P.bit_count() < r:
            return None
        low = P & -P
        P ^= low
        v = low.bit_length() - 1
        sub = _extend(adj, P & adj[v], r - 1)
        if sub is not None:
            return [v, *sub]
    return None


def _count(adj: list[int], P: int, r: int) -> int:
    if r == 0:
        return 1
    if r == 1:
        return P.bit_count()
    total = 0
    while P.bit_count() >= r:
        low = P & -P
        P ^= low
        total += _count(adj, P & adj[low.bit_length() - 1], r - 1)
    return total


def _walk(adj: list[int], P: int, r: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if r == 0:
        yield prefix
        return
    while P.bit_count() >= r:
        low = P & -P
        P ^= low
        v = low.bit_length() - 1
        yield from _walk(adj, P & adj[v], r - 1, prefix + (v,))


def find_clique(graph: Graph, k: int, within: Iterable[int] | int | None = None) -> CliqueWitness | None:
    """A k-clique of ``graph`` (optionally inside ``within``), or None.

    Exact: branch and bound over the smallest-last ordering, pruned by
    greedy colouring, stopping at the first clique found.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    P0 = graph.active
    if within is not None:
        P0 &= within if isinstance(within, int) else to_mask(within)
    if k == 1:
        return CliqueWitness(((P0 & -P0).bit_length() - 1,)) if P0 else None
    adj, later = graph.adj, graph._later
    for v in graph.degeneracy_order:
        if not P0 >> v & 1:
            continue
        cand = adj[v] & P0 & later[v]
        if cand.bit_count() < k - 1:
            continue
        sub = _extend(adj, cand, k - 1)
        if sub is not None:
            return CliqueWitness(tuple(sorted([v, *sub])))
    return None


def iter_cliques(graph: Graph, k: int, within: Iterable[int] | int | None = None) -> Iterator[tuple[int, ...]]:
    P0 = graph.active
    if within is not None:
        P0 &= within if isinstance(within, int) else to_mask(within)
    adj, later = graph.adj, graph._later
    for v in graph.degeneracy_order:
        if P0 >> v & 1:
            for c in _walk(adj, adj[v] & P0 & later[v], k - 1, (v,)):
                yield tuple(sorted(c))


def enumerate_cliques(graph: Graph, k: int, within: Iterable[int] | int | None = None) -> list[CliqueWitness]:
    """Every k-clique exactly once, sorted."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return [CliqueWitness(c) for c in sorted(iter_cliques(graph, k, within))]


def count_cliques(graph: Graph, k: int, within: Iterable[int] | int | None = None) -> int:
    P0 = graph.active
    if within is not None:
        P0 &= within if isinstance(within, int) else to_mask(within)
    if k == 0:
        return 1
    adj, later = graph.adj, graph._later
    return sum(
        _count(adj, adj[v] & P0 & later[v], k - 1)
        for v in graph.degeneracy_order
        if P0 >> v & 1
    )


EXACT_LIMIT = 30


def exact_s_independence(graph: Graph, s: int) -> int:
    """Largest vertex set inducing no K_s (exponential; at most 30 vertices).

    Hitting-set branching: find a K_s among the still-available vertices,
    then branch on which of its undecided vertices is dropped.
    """
    if graph.n_vertices > EXACT_LIMIT:
        raise TooLarge(f"{graph.n_vertices} vertices exceeds the exact limit of {EXACT_LIMIT}")
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    adj = graph.adj
    best = 0

    def find(mask: int) -> list[int] | None:
        P = mask
        while P:
            low = P & -P
            P ^= low
            sub = _extend(adj, P & adj[low.bit_length() - 1], s - 1)
            if sub is not None:
                return [low.bit_length() - 1, *sub]
        return None

    def rec(chosen: int, undecided: int) -> None:
        nonlocal best
        avail = chosen | undecided
        if avail.bit_count() <= best:
            return
        clique = find(avail)
        if clique is None:
            best = avail.bit_count()
            return
        free = [v for v in clique if undecided >> v & 1]
        for v in free:
            rec(chosen, undecided & ~(1 << v))
            chosen |= 1 << v
            undecided &= ~(1 << v)

    rec(0, graph.active)
    return best


def sampled_cover_check(graph: Graph, s: int, w: int, trials: int, seed: int) -> CoverEstimate:
    """How many uniform w-subsets of the active vertices contain a K_s."""
    verts = graph.vertices
    n = len(verts)
    if not 0 <= w <= n:
        raise BadSize(f"subset size {w} outside [0, {n}]")
    if trials < 1:
        raise BadSize(f"trials must be >= 1, got {trials}")
    if w == n:
        trials = 1
    est = CoverEstimate(subset_size=w, trials=trials, seed=seed)
    for t in range(trials):
        subset = [verts[i] for i in sample_subset(n, w, seed, t)]
        if find_clique(graph, s, to_mask(subset)) is not None:
            est.hits += 1
        elif len(est.miss_examples) < 10:
            est.miss_examples.append(subset)
    return est
