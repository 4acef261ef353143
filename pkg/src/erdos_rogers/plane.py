"""Affine planes AG(2, q) over a prime field and their truncations.

Points are indexed ``x*q + y``.  Non-vertical lines ``y = m*x + b`` get id
``m*q + b``; the vertical line ``x = c`` gets id ``q*q + c``.  Truncation
keeps the original line ids, so ids stay meaningful in every derived
structure (hypergraphs, partitions, files on disk).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Union

import numpy as np

from .numtheory import NotPrime, require_prime

VERTICAL = "vertical"

ClassId = Union[int, str]


class SamePoint(ValueError):
    pass


class UnknownClass(ValueError):
    pass


class TooFew(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    x: int
    y: int
    index: int


@dataclass(frozen=True)
class Line:
    id: int
    class_id: ClassId
    points: tuple[int, ...]

    @property
    def mask(self) -> int:
        m = 0
        for p in self.points:
            m |= 1 << p
        return m


def _line_points(q: int, line_id: int) -> tuple[int, ...]:
    if line_id >= q * q:
        c = line_id - q * q
        return tuple(c * q + y for y in range(q))
    m, b = divmod(line_id, q)
    return tuple(sorted(x * q + (m * x + b) % q for x in range(q)))


def _class_of(q: int, line_id: int) -> ClassId:
    return VERTICAL if line_id >= q * q else line_id // q


def _class_line_ids(q: int, class_id: ClassId) -> range:
    if class_id == VERTICAL:
        return range(q * q, q * q + q)
    if isinstance(class_id, (int, np.integer)) and 0 <= class_id < q:
        return range(class_id * q, class_id * q + q)
    raise UnknownClass(f"no parallel class {class_id!r} in AG(2,{q})")


class _Incidence:
    """Shared machinery for the full and truncated planes."""

    q: int

    @property
    def n_points(self) -> int:
        return self.q * self.q

    def point(self, p) -> Point:
        i = self.index(p)
        return Point(i // self.q, i % self.q, i)

    def index(self, p) -> int:
        if isinstance(p, Point):
            return p.index
        if isinstance(p, tuple):
            x, y = p
            return (x % self.q) * self.q + (y % self.q)
        return int(p)

    @cached_property
    def points(self) -> tuple[Point, ...]:
        q = self.q
        return tuple(Point(i // q, i % q, i) for i in range(q * q))

    @cached_property
    def lines_by_id(self) -> dict[int, Line]:
        return {ln.id: ln for ln in self.lines}

    @cached_property
    def point_lines(self) -> tuple[tuple[int, ...], ...]:
        """Line ids through each point, in id order."""
        inc: list[list[int]] = [[] for _ in range(self.n_points)]
        for ln in self.lines:
            for p in ln.points:
                inc[p].append(ln.id)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def line_masks(self) -> dict[int, int]:
        return {ln.id: ln.mask for ln in self.lines}

    @cached_property
    def line_of(self) -> np.ndarray:
        """``line_of[u, v]`` = id of the line through u and v, or -1.

        The diagonal is -1.  Pairs on a removed line are -1 as well.
        """
        q = self.q
        n = q * q
        idx = np.arange(n)
        x, y = idx // q, idx % q
        dx = (x[None, :] - x[:, None]) % q
        dy = (y[None, :] - y[:, None]) % q
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = pow(a, q - 2, q)
        slope = (dy * inv[dx]) % q
        icpt = (y[:, None] - slope * x[:, None]) % q
        table = np.where(dx == 0, q * q + x[:, None], slope * q + icpt)
        table[idx, idx] = -1
        present = np.zeros(q * q + q, dtype=bool)
        present[[ln.id for ln in self.lines]] = True
        table = np.where(present[np.maximum(table, 0)] & (table >= 0), table, -1)
        return table.astype(np.int32)

    def line_through(self, p1, p2) -> Line | None:
        """The line containing both points, or None if it was removed."""
        a, b = self.index(p1), self.index(p2)
        if a == b:
            raise SamePoint(f"points coincide: {a}")
        q = self.q
        (x1, y1), (x2, y2) = divmod(a, q), divmod(b, q)
        if x1 == x2:
            lid = q * q + x1
        else:
            m = (y2 - y1) * pow(x2 - x1, q - 2, q) % q
            lid = m * q + (y1 - m * x1) % q
        return self.lines_by_id.get(lid)

    def collinear(self, a: int, b: int, c: int) -> bool:
        ln = self.line_through(a, b)
        return ln is not None and c in ln.points


@dataclass(eq=False)
class AffinePlane(_Incidence):
    q: int

    def __post_init__(self):
        if self.q < 2:
            raise NotPrime(f"q={self.q} is not prime")
        require_prime(self.q)

    def __eq__(self, other):
        return isinstance(other, AffinePlane) and other.q == self.q

    def __hash__(self):
        return hash(("AffinePlane", self.q))

    @cached_property
    def lines(self) -> tuple[Line, ...]:
        q = self.q
        return tuple(
            Line(lid, _class_of(q, lid), _line_points(q, lid)) for lid in range(q * q + q)
        )

    @cached_property
    def classes(self) -> dict[ClassId, tuple[int, ...]]:
        out: dict[ClassId, tuple[int, ...]] = {m: tuple(_class_line_ids(self.q, m)) for m in range(self.q)}
        out[VERTICAL] = tuple(_class_line_ids(self.q, VERTICAL))
        return out


@dataclass(eq=False)
class TruncatedPlane(_Incidence):
    q: int
    removed_class: ClassId = VERTICAL
    plane: AffinePlane = field(default=None, repr=False)

    def __post_init__(self):
        if self.plane is None:
            self.plane = AffinePlane(self.q)
        self._removed = frozenset(_class_line_ids(self.q, self.removed_class))

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedPlane)
            and other.q == self.q
            and other.removed_class == self.removed_class
        )

    def __hash__(self):
        return hash(("TruncatedPlane", self.q, self.removed_class))

    @cached_property
    def lines(self) -> tuple[Line, ...]:
        return tuple(ln for ln in self.plane.lines if ln.id not in self._removed)

    @property
    def removed_lines(self) -> tuple[Line, ...]:
        return tuple(self.plane.lines_by_id[i] for i in sorted(self._removed))


def build_affine_plane(q: int) -> AffinePlane:
    return AffinePlane(q)


def truncate(plane: AffinePlane, class_id: ClassId = VERTICAL) -> TruncatedPlane:
    _class_line_ids(plane.q, class_id)
    return TruncatedPlane(plane.q, class_id, plane)


def line_through(structure: _Incidence, p1, p2) -> Line | None:
    return structure.line_through(p1, p2)


def lines_meeting(structure: _Incidence, A: Iterable) -> int:
    """Number of lines of ``structure`` that intersect the point set A."""
    hit: set[int] = set()
    for p in A:
        hit.update(structure.point_lines[structure.index(p)])
    return len(hit)


def general_position(structure: _Incidence, pts: Iterable) -> bool:
    """True iff no three of ``pts`` lie on a common line of ``structure``."""
    idx = sorted({structure.index(p) for p in pts})
    if len(idx) < 3:
        raise TooFew(f"general position needs at least 3 points, got {len(idx)}")
    seen: set[int] = set()
    for a, b in combinations(idx, 2):
        ln = structure.line_through(a, b)
        if ln is None:
            continue
        if ln.id in seen:
            return False
        seen.add(ln.id)
    return True


def uncovered_pairs(structure: _Incidence) -> int:
    """Point pairs that lie on no line of ``structure``."""
    # float so the product goes through BLAS; counts stay exact
    inc = np.zeros((len(structure.lines), structure.n_points))
    for r, ln in enumerate(structure.lines):
        inc[r, list(ln.points)] = 1.0
    cover = inc.T @ inc
    np.fill_diagonal(cover, 1)
    return int((cover == 0).sum()) // 2


__all__ = [
    "VERTICAL",
    "AffinePlane",
    "Line",
    "NotPrime",
    "Point",
    "SamePoint",
    "TooFew",
    "TruncatedPlane",
    "UnknownClass",
    "build_affine_plane",
    "general_position",
    "line_through",
    "lines_meeting",
    "truncate",
    "uncovered_pairs",
]
