"""Combinatorial mutation of Fano polygons and minimality."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, floor
from fractions import Fraction
from typing import Optional

from .lattice import (
    EdgeData,
    Point,
    Polygon,
    area2,
    boundary_count,
    interior_count,
    normal_form,
    pair,
    xgcd,
)


class NotAdmissible(ValueError):
    code = "NotAdmissible"


@dataclass(frozen=True)
class MutationSpec:
    """Grading ``omega`` (an inner edge normal) and factor ``conv{0, factor}``."""

    omega: Point
    factor: Point
    edge: Optional[EdgeData] = None

    @classmethod
    def for_edge(cls, e: EdgeData) -> "MutationSpec":
        w = e.inner_normal
        return cls(w, (-w[1], w[0]), e)

    def inverse(self) -> "MutationSpec":
        return MutationSpec((-self.omega[0], -self.omega[1]), self.factor)


@dataclass(frozen=True)
class MutationTrace:
    source: Polygon
    target: Polygon
    spec: MutationSpec
    # level h -> endpoints of the segment contributed at that level
    slices: dict = field(default_factory=dict, compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json()["vertices"],
            "target": self.target.to_json()["vertices"],
            "omega": list(self.spec.omega),
            "factor": list(self.spec.factor),
        }


def slice_range(p: Polygon, omega: Point, factor: Point, h: int):
    """Lattice points of ``p`` at level ``h`` as ``(base, tmin, tmax)``.

    The points are ``base + t * factor`` for ``tmin <= t <= tmax``; ``None``
    when the level holds no lattice point.
    """
    _, s, t = xgcd(omega[0], omega[1])
    base = (h * s, h * t)
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for e in p.edges():
        n = e.inner_normal
        coef = pair(factor, n)
        rhs = -e.height - pair(base, n)
        if coef == 0:
            if rhs > 0:
                return None
            continue
        bound = Fraction(rhs, coef)
        if coef > 0:
            lo = bound if lo is None or bound > lo else lo
        else:
            hi = bound if hi is None or bound < hi else hi
    tmin, tmax = ceil(lo), floor(hi)
    if tmin > tmax:
        return None
    return base, tmin, tmax


def _at(base, t, v):
    return (base[0] + t * v[0], base[1] + t * v[1])


def mutate_by(p: Polygon, spec: MutationSpec) -> MutationTrace:
    """Mutate ``p`` with grading ``spec.omega`` and factor ``spec.factor``.

    Negative levels use the largest possible G_h, the slice shrunk by
    ``|h|`` copies of the factor; non-negative levels are stretched by ``h``
    copies.
    """
    w, v = spec.omega, spec.factor
    if pair(v, w) != 0:
        raise ValueError("factor is not orthogonal to the grading")
    levels = [pair(x, w) for x in p.vertices]
    vertex_levels = set(levels)
    points: list[Point] = []
    slices = {}
    for h in range(min(levels), max(levels) + 1):
        sl = slice_range(p, w, v, h)
        if sl is None:
            continue
        base, tmin, tmax = sl
        # Below zero the slice shrinks by |h|; a level without vertices may
        # take G_h empty when it is too short.
        if h < 0 and tmax - tmin < -h:
            if h in vertex_levels:
                raise NotAdmissible(f"slice at level {h} is shorter than {-h}")
            continue
        seg = (_at(base, tmin, v), _at(base, tmax + h, v))
        slices[h] = seg
        points.extend(seg)
    return MutationTrace(p, Polygon(points), spec, slices)


def admissible(p: Polygon, e: EdgeData) -> bool:
    """Whether ``e`` supports a mutation: lattice length >= height."""
    return e.length >= e.height


def admissible_literal(p: Polygon, e: EdgeData) -> bool:
    """The bound written as ``|E cap N| >= r_E`` (one looser than :func:`admissible`)."""
    return e.length + 1 >= e.height


def mutate(p: Polygon, spec: MutationSpec) -> MutationTrace:
    if spec.edge is not None and not admissible(p, spec.edge):
        raise NotAdmissible(
            f"edge {spec.edge.start}->{spec.edge.end} has length "
            f"{spec.edge.length} < height {spec.edge.height}")
    return mutate_by(p, spec)


def mutate_edge(p: Polygon, index: int) -> MutationTrace:
    return mutate(p, MutationSpec.for_edge(p.edges()[index]))


def all_mutations(p: Polygon) -> list[MutationTrace]:
    """One trace per admissible edge, in clockwise edge order."""
    return [mutate_by(p, MutationSpec.for_edge(e)) for e in p.edges() if admissible(p, e)]


def mutation_neighbours(p: Polygon) -> set[Polygon]:
    """Normal forms of all single mutations of ``p``."""
    return {normal_form(t.target) for t in all_mutations(p)}


def is_minimal(p: Polygon) -> bool:
    b = boundary_count(p)
    return all(boundary_count(t.target) >= b for t in all_mutations(p))


def edge_condition_minimal(p: Polygon) -> bool:
    """Minimality via edge levels: every admissible edge has h_max >= height."""
    for e in p.edges():
        if e.length >= e.height:
            hmax = max(pair(v, e.inner_normal) for v in p.vertices)
            if hmax < e.height:
                return False
    return True


def minimize(p: Polygon) -> tuple[Polygon, list[MutationTrace]]:
    """Greedy descent on the boundary point count; first improvement wins."""
    path: list[MutationTrace] = []
    current, b = p, boundary_count(p)
    improved = True
    while improved:
        improved = False
        for e in current.edges():
            if not admissible(current, e):
                continue
            trace = mutate_by(current, MutationSpec.for_edge(e))
            nb = boundary_count(trace.target)
            if nb < b:
                path.append(trace)
                current, b = trace.target, nb
                improved = True
                break
    return current, path


@dataclass(frozen=True)
class MinimalityReport:
    boundary: bool
    interior: bool
    volume: bool
    edge_levels: bool
    # the same edge test with the |E cap N| >= r_E reading of admissibility
    edge_levels_literal: bool

    @property
    def concordant(self) -> bool:
        return len({self.boundary, self.interior, self.volume, self.edge_levels}) == 1

    @property
    def minimal(self) -> bool:
        return self.boundary


def minimality_witnesses(p: Polygon) -> MinimalityReport:
    targets = [t.target for t in all_mutations(p)]
    literal = True
    for e in p.edges():
        if admissible_literal(p, e):
            hmax = max(pair(v, e.inner_normal) for v in p.vertices)
            if hmax < e.height:
                literal = False
    return MinimalityReport(
        boundary=all(boundary_count(q) >= boundary_count(p) for q in targets),
        interior=all(interior_count(q) >= interior_count(p) for q in targets),
        volume=all(area2(q) >= area2(p) for q in targets),
        edge_levels=edge_condition_minimal(p),
        edge_levels_literal=literal,
    )
