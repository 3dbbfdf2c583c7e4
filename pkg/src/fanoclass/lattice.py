"""Exact two-dimensional lattice geometry.

Points are plain ``(x, y)`` tuples of Python ints, so coordinates never
overflow.  A :class:`Polygon` always stores its vertices clockwise, starting
from the lexicographically smallest vertex, which makes ``==`` and ``hash``
meaningful on polygons.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor, ceil, gcd
from typing import Iterable, Sequence

Point = tuple[int, int]


class PolygonError(ValueError):
    """Base class for polygon validation failures."""

    code = "PolygonError"


class NotFullDimensional(PolygonError):
    code = "NotFullDimensional"


class OriginNotInterior(PolygonError):
    code = "OriginNotInterior"


class NonPrimitiveVertex(PolygonError):
    code = "NonPrimitiveVertex"


def cross(u: Point, v: Point) -> int:
    return u[0] * v[1] - u[1] * v[0]


def pair(p: Point, u: Point) -> int:
    """The pairing of a point of N with a dual vector of M."""
    return p[0] * u[0] + p[1] * u[1]


def is_primitive(p: Point) -> bool:
    return gcd(p[0], p[1]) == 1


def primitive(p: Point) -> Point:
    g = gcd(p[0], p[1])
    if g == 0:
        raise ValueError("the zero vector has no primitive direction")
    return (p[0] // g, p[1] // g)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


@dataclass(frozen=True)
class UnimodularMap:
    """The integer matrix ``[[a, b], [c, d]]`` with determinant +-1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __call__(self, p: Point) -> Point:
        return (self.a * p[0] + self.b * p[1], self.c * p[0] + self.d * p[1])

    def __matmul__(self, other: "UnimodularMap") -> "UnimodularMap":
        return UnimodularMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UnimodularMap":
        s = self.det
        return UnimodularMap(s * self.d, -s * self.b, -s * self.c, s * self.a)


def hull_vertices(points: Iterable[Point]) -> list[Point]:
    """Vertices of the convex hull in clockwise order.

    Degenerate inputs are allowed: a single point gives one vertex and a
    collinear set gives its two extreme points.  Collinear boundary points
    are dropped.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and cross(
                (out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]),
                (p[0] - out[-2][0], p[1] - out[-2][1]),
            ) >= 0:
                out.pop()
            out.append(p)
        return out

    # With the ">= 0" pop rule each chain turns right, i.e. clockwise.
    upper = half(pts)
    lower = half(reversed(pts))
    hull = upper[:-1] + lower[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def _rotate_to_min(vertices: Sequence[Point]) -> tuple[Point, ...]:
    i = min(range(len(vertices)), key=vertices.__getitem__)
    return tuple(vertices[i:]) + tuple(vertices[:i])


@dataclass(frozen=True)
class EdgeData:
    """An edge ``start -> end`` of a polygon traversed clockwise."""

    start: Point
    end: Point
    inner_normal: Point
    height: int
    length: int

    @property
    def endpoints(self) -> tuple[Point, Point]:
        return (self.start, self.end)

    @property
    def direction(self) -> Point:
        """Primitive direction of the edge, from ``start`` to ``end``."""
        return ((self.end[0] - self.start[0]) // self.length,
                (self.end[1] - self.start[1]) // self.length)


def edge_data(u: Point, v: Point) -> EdgeData:
    """Edge data for the segment ``u -> v`` of a clockwise Fano polygon."""
    dx, dy = v[0] - u[0], v[1] - u[1]
    g = gcd(dx, dy)
    dx, dy = dx // g, dy // g
    normal = (dy, -dx)
    h = -pair(u, normal)
    if h <= 0:
        raise OriginNotInterior(f"origin is not strictly inside edge {u}->{v}")
    return EdgeData(u, v, normal, h, g)


@dataclass(frozen=True)
class Polygon:
    """A Fano polygon: primitive vertices, origin strictly interior.

    The constructor accepts any point set whose convex hull is a Fano
    polygon; interior and collinear boundary points are discarded.
    """

    vertices: tuple[Point, ...]

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = [(int(p[0]), int(p[1])) for p in points]
        hull = hull_vertices(pts)
        if len(hull) < 3:
            raise NotFullDimensional(f"hull of {sorted(set(pts))} is not two-dimensional")
        for u, v in zip(hull, hull[1:] + hull[:1]):
            if cross(u, v) >= 0:
                raise OriginNotInterior("origin does not lie in the strict interior")
        for v in hull:
            if not is_primitive(v):
                raise NonPrimitiveVertex(f"vertex {v} is not primitive")
        object.__setattr__(self, "vertices", _rotate_to_min(hull))

    @classmethod
    def _trusted(cls, vertices: Sequence[Point]) -> "Polygon":
        # Caller guarantees a clockwise Fano vertex list.
        self = object.__new__(cls)
        object.__setattr__(self, "vertices", _rotate_to_min(vertices))
        return self

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __repr__(self) -> str:
        return f"Polygon({list(self.vertices)})"

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data) -> "Polygon":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["vertices"])

    def transform(self, m: UnimodularMap) -> "Polygon":
        verts = [m(v) for v in self.vertices]
        if m.det < 0:
            verts.reverse()
        return Polygon._trusted(verts)

    def edges(self) -> list[EdgeData]:
        vs = self.vertices
        return [edge_data(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def vertex_sum(self) -> Point:
        return (sum(v[0] for v in self.vertices), sum(v[1] for v in self.vertices))


def convex_hull(points: Iterable[Sequence[int]]) -> Polygon:
    return Polygon(points)


def edges(p: Polygon) -> list[EdgeData]:
    return p.edges()


def area2(p: Polygon) -> int:
    """Twice the Euclidean area."""
    vs = p.vertices
    return -sum(cross(vs[i - 1], vs[i]) for i in range(len(vs)))


def boundary_count(p: Polygon) -> int:
    vs = p.vertices
    return sum(gcd(vs[i][0] - vs[i - 1][0], vs[i][1] - vs[i - 1][1])
               for i in range(len(vs)))


def interior_count(p: Polygon) -> int:
    return (area2(p) - boundary_count(p) + 2) // 2


def _inequalities(p: Polygon) -> list[tuple[Point, int]]:
    return [(e.inner_normal, e.height) for e in p.edges()]


def lattice_points(p: Polygon) -> list[Point]:
    """All lattice points of ``p`` (boundary included), row by row."""
    ineqs = _inequalities(p)
    ys = [v[1] for v in p.vertices]
    out = []
    for y in range(min(ys), max(ys) + 1):
        lo, hi = _row_interval(ineqs, y)
        if lo is None:
            continue
        out.extend((x, y) for x in range(ceil(lo), floor(hi) + 1))
    return out


def _row_interval(ineqs, y):
    # Real interval of x with <(x, y), n> >= -h for every (n, h).
    lo = hi = None
    for (nx, ny), h in ineqs:
        rhs = -h - ny * y
        if nx == 0:
            if rhs > 0:
                return None, None
            continue
        bound = Fraction(rhs, nx)
        if nx > 0:
            lo = bound if lo is None or bound > lo else lo
        else:
            hi = bound if hi is None or bound < hi else hi
    if lo is None or hi is None or lo > hi:
        return None, None
    return lo, hi


def contains(p: Polygon, q: Sequence) -> bool:
    """Whether the (possibly rational) point ``q`` lies in ``p``."""
    return all(n[0] * q[0] + n[1] * q[1] >= -h for n, h in _inequalities(p))


def _edge_frame(e: EdgeData, det_sign: int) -> UnimodularMap:
    # Second row sends the edge to height y = e.height; first row completes
    # it to a basis with the requested determinant sign.
    n0, n1 = -e.inner_normal[0], -e.inner_normal[1]
    _, s, t = xgcd(n1, -n0)  # s*n1 - t*n0 == 1
    m = UnimodularMap(s, t, n0, n1)
    if det_sign < 0:
        m = UnimodularMap(-s, -t, n0, n1)
    return m


def normal_form(p: Polygon) -> Polygon:
    """Canonical representative of the GL(2,Z)-orbit of ``p``.

    Every edge is in turn placed horizontally on top of the polygon, at
    y = height, with both orientations; the remaining shear freedom is fixed
    by putting the left endpoint of that edge at 0 <= x < height.  The
    lexicographically smallest resulting vertex tuple wins.
    """
    best = None
    for e in p.edges():
        h = e.height
        for sign in (1, -1):
            m = _edge_frame(e, sign)
            a0, a1 = m(e.start), m(e.end)
            left = min(a0[0], a1[0])
            k = -(left // h)
            if k:
                m = UnimodularMap(m.a + k * m.c, m.b + k * m.d, m.c, m.d)
            cand = p.transform(m).vertices
            if best is None or cand < best:
                best = cand
    return Polygon._trusted(best)


def is_equivalent(p: Polygon, q: Polygon) -> bool:
    return normal_form(p) == normal_form(q)


def minkowski_sum(p: Sequence[Point], q: Sequence[Point]) -> list[Point]:
    """Vertices of the Minkowski sum of two finite point sets' hulls.

    Sums involving an empty set are empty.
    """
    if not p or not q:
        return []
    return hull_vertices((a[0] + b[0], a[1] + b[1]) for a in p for b in q)


def dual_vertices(p: Polygon) -> list[tuple[Fraction, Fraction]]:
    """Vertices of the dual polygon ``{u : <v, u> >= -1 for v in P}``.

    Dual vertex i is the scaled inner normal of edge i, so the list is
    ordered to match :meth:`Polygon.edges`.
    """
    return [(Fraction(e.inner_normal[0], e.height), Fraction(e.inner_normal[1], e.height))
            for e in p.edges()]


def dual_area2(p: Polygon) -> Fraction:
    """Twice the area of the dual polygon, computed exactly."""
    ds = dual_vertices(p)
    total = Fraction(0)
    for i in range(len(ds)):
        u, v = ds[i - 1], ds[i]
        total += u[0] * v[1] - u[1] * v[0]
    return abs(total)


def dual_dilate_count(p: Polygon, k: int) -> int:
    """Number of lattice points of ``k`` times the dual polygon."""
    vs = p.vertices
    if k == 0:
        return 1
    ds = dual_vertices(p)
    xs = [d[0] * k for d in ds]
    ys = [d[1] * k for d in ds]
    count = 0
    for y in range(ceil(min(ys)), floor(max(ys)) + 1):
        for x in range(ceil(min(xs)), floor(max(xs)) + 1):
            if all(v[0] * x + v[1] * y >= -k for v in vs):
                count += 1
    return count
