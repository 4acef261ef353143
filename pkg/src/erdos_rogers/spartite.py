"""Graphs obtained by replacing each kept line with a random complete s-partite graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

import numpy as np

from .cliques import Graph, _count, bits, find_clique, iter_cliques, to_mask
from .hypergraph import Census, Hypergraph, check_probability, max_degree
from .numtheory import NotPrime, is_prime, next_prime, prev_prime
from .rng import bernoulli, uniforms


class BadS(ValueError):
    pass


class STooSmall(ValueError):
    pass


class PTooSmall(ValueError):
    pass


class NotAnEdge(ValueError):
    pass


@dataclass(frozen=True)
class LinePartition:
    line_id: int
    classes: dict[int, int]  # point -> label in 1..s

    def members(self, label: int) -> list[int]:
        return sorted(p for p, c in self.classes.items() if c == label)


@dataclass(eq=False)
class PartiteLineGraph:
    """The graph on q**2 points: u~v iff a kept line holds both with different labels.

    ``labels[line_id]`` lists the class of each point of the line, aligned
    with the line's sorted point tuple.
    """

    H: Hypergraph
    s: int
    seed: int
    labels: dict[int, tuple[int, ...]] = field(repr=False)

    def __post_init__(self):
        if self.s < 2:
            raise BadS(f"s must be >= 2, got {self.s}")
        if sorted(self.labels) != list(self.H.kept):
            raise ValueError("labels must cover exactly the kept lines")
        q = self.H.q
        for lid, lab in self.labels.items():
            if len(lab) != q or not all(1 <= c <= self.s for c in lab):
                raise ValueError(f"line {lid}: need {q} labels in 1..{self.s}")

    def __eq__(self, other):
        return (
            isinstance(other, PartiteLineGraph)
            and self.H == other.H
            and self.s == other.s
            and self.seed == other.seed
            and self.labels == other.labels
        )

    @property
    def n_vertices(self) -> int:
        return self.H.n_points

    @property
    def provenance(self) -> tuple[int, int]:
        return (self.H.seed, self.seed)

    def partition(self, line_id: int) -> LinePartition:
        pts = self.H.base.lines_by_id[line_id].points
        return LinePartition(line_id, dict(zip(pts, self.labels[line_id])))

    def class_masks(self, line_id: int) -> dict[int, int]:
        pts = self.H.base.lines_by_id[line_id].points
        out = {c: 0 for c in range(1, self.s + 1)}
        for p, c in zip(pts, self.labels[line_id]):
            out[c] |= 1 << p
        return out

    @cached_property
    def graph(self) -> Graph:
        adj = [0] * self.n_vertices
        masks = self.H.base.line_masks
        for lid in self.H.kept:
            full = masks[lid]
            for cm in self.class_masks(lid).values():
                other = full & ~cm
                for p in bits(cm):
                    adj[p] |= other
        return Graph(self.n_vertices, adj)

    @property
    def adj(self) -> list[int]:
        return self.graph.adj

    def has_edge(self, u: int, v: int) -> bool:
        return self.graph.has_edge(u, v)

    def line_edge_count(self, line_id: int) -> int:
        sizes = [m.bit_count() for m in self.class_masks(line_id).values()]
        return comb(self.H.q, 2) - sum(comb(k, 2) for k in sizes)


def draw_labels(H: Hypergraph, s: int, seed: int) -> dict[int, tuple[int, ...]]:
    """Uniform labels in 1..s; the draw for point i of line L uses counter L*q + i."""
    q = H.q
    if not H.kept:
        return {}
    counters = (np.asarray(H.kept, dtype=np.uint64)[:, None] * np.uint64(q) + np.arange(q, dtype=np.uint64)).ravel()
    lab = (uniforms(seed, counters) * s).astype(np.int64) + 1
    lab = lab.reshape(len(H.kept), q)
    return {lid: tuple(int(c) for c in row) for lid, row in zip(H.kept, lab)}


def build_graph(H: Hypergraph, s: int, seed: int) -> PartiteLineGraph:
    if s < 2:
        raise BadS(f"s must be >= 2, got {s}")
    return PartiteLineGraph(H, s, seed, draw_labels(H, s, seed))


def ks_witness(G: PartiteLineGraph, C: Iterable[int] | int) -> tuple[int, ...] | None:
    """s mutually adjacent vertices inside C, or None if G[C] has no K_s.

    First looks for a kept line showing all s labels inside C; failing that,
    runs an exact clique search on G[C].
    """
    cm = C if isinstance(C, int) else to_mask(C)
    s = G.s
    for lid in G.H.kept:
        if (G.H.base.line_masks[lid] & cm).bit_count() < s:
            continue
        pick = []
        for m in G.class_masks(lid).values():
            hit = m & cm
            if not hit:
                break
            pick.append((hit & -hit).bit_length() - 1)
        else:
            return tuple(sorted(pick))
    w = find_clique(G.graph, s, cm)
    return w.vertices if w is not None else None


@dataclass(frozen=True)
class KsDecomposition:
    p: int
    s: int
    copies: tuple[tuple[int, ...], ...]  # copies[k][i] = vertex used in class i

    def edges(self, copy: tuple[int, ...]) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return [((i, copy[i]), (j, copy[j])) for i, j in combinations(range(self.s), 2)]


def spartite_decomposition(s: int, p: int) -> KsDecomposition:
    """p**2 edge-disjoint K_s covering the balanced complete s-partite graph with parts of size p.

    Copy (a, b) uses vertex a + b*i (mod p) of class i.  Two copies sharing
    an edge between classes i and j would force (b - b')(i - j) = 0 mod p,
    hence the requirement p >= s.
    """
    if not is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    if p < s:
        raise PTooSmall(f"p={p} < s={s}")
    copies = tuple(tuple((a + b * i) % p for i in range(s)) for a in range(p) for b in range(p))
    return KsDecomposition(p, s, copies)


def decomposition_prime(beta: int, s: int) -> int:
    """Largest prime in [max(beta, s), 2*beta], else the smallest prime >= max(beta, s)."""
    lo = max(beta, s)
    p = prev_prime(2 * beta)
    return p if p is not None and p >= lo else next_prime(lo)


def edge_disjoint_ks(
    G: PartiteLineGraph, U: Iterable[int] | int, beta: int, max_lines: int | None = None
) -> list[tuple[int, ...]]:
    """Edge-disjoint copies of K_s inside G[U], found line by line.

    A kept line qualifies when it meets U in at least 4*s*beta points and
    each class meets U in at least max(2*beta, p) points; the decomposition
    is embedded on the p smallest points of each class.
    """
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    um = U if isinstance(U, int) else to_mask(U)
    s = G.s
    p = decomposition_prime(beta, s)
    need = max(2 * beta, p)
    dec = spartite_decomposition(s, p)
    out = []
    used = 0
    for lid in G.H.kept:
        if max_lines is not None and used >= max_lines:
            break
        if (G.H.base.line_masks[lid] & um).bit_count() < 4 * s * beta:
            continue
        parts = [list(bits(m & um)) for m in G.class_masks(lid).values()]
        if any(len(pt) < need for pt in parts):
            continue
        used += 1
        for copy in dec.copies:
            out.append(tuple(parts[i][copy[i]] for i in range(s)))
    return out


def count_ks1_per_edge(G: PartiteLineGraph, u: int, v: int) -> int:
    """Number of K_{s+1} containing the edge uv."""
    g = G.graph
    if not g.has_edge(u, v):
        raise NotAnEdge(f"{u}-{v} is not an edge")
    return _count(g.adj, g.adj[u] & g.adj[v] & g.active, G.s - 1)


def ks1_counts(G: PartiteLineGraph) -> dict[tuple[int, int], int]:
    return {(u, v): count_ks1_per_edge(G, u, v) for u, v in G.graph.edges()}


def g3_bound(H: Hypergraph, s: int) -> int:
    """4a^2 (4a^2 + 2a)^(s-2) with a = max_degree(H)/2."""
    d = max_degree(H)
    return d * d * (d * d + d) ** (s - 2)


@dataclass
class PruneResult:
    removed: tuple[int, ...]
    kept_graph: Graph


def prune_dangerous(G: PartiteLineGraph, D: Census) -> PruneResult:
    """Delete every vertex of every dangerous set."""
    R = D.union_mask
    keep = G.graph.active & ~R
    return PruneResult(tuple(bits(R)), G.graph.induced(keep))


@dataclass
class AuditReport:
    s: int
    cliques_checked: int
    violations: list[tuple[int, ...]]
    located: dict[tuple[int, ...], tuple[int, ...]] = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return not self.violations


def ks2_dangerous_audit(G: PartiteLineGraph, D: Census, keep_located: int = 100) -> AuditReport:
    """Check that every K_{s+2} of G contains a censused dangerous set."""
    if G.s < 4:
        raise STooSmall(f"audit needs s >= 4, got {G.s}")
    rep = AuditReport(G.s, 0, [])
    for clique in iter_cliques(G.graph, G.s + 2):
        rep.cliques_checked += 1
        hit = D.member_within(to_mask(clique))
        if hit is None:
            rep.violations.append(clique)
        elif len(rep.located) < keep_located:
            rep.located[clique] = hit.vertices
    return rep


def sparsify(G: PartiteLineGraph | Graph, edge_keep_prob: float, seed: int) -> Graph:
    """Keep each edge uv (u < v) iff the draw at counter u*n + v falls below the probability."""
    check_probability(edge_keep_prob)
    g = G.graph if isinstance(G, PartiteLineGraph) else G
    edges = list(g.edges())
    adj = [0] * g.n
    if edges:
        e = np.asarray(edges, dtype=np.uint64)
        keep = bernoulli(seed, e[:, 0] * np.uint64(g.n) + e[:, 1], edge_keep_prob)
        for (u, v), k in zip(edges, keep.tolist()):
            if k:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return Graph(g.n, adj, g.active)


def iter_line_pairs(G: PartiteLineGraph) -> Iterator[tuple[int, int, int]]:
    """(u, v, line id) for every pair of points on a kept line."""
    for lid in G.H.kept:
        for u, v in combinations(G.H.base.lines_by_id[lid].points, 2):
            yield u, v, lid
