"""Growth search for minimal Fano polygons with a prescribed basket.

A search starts from a candidate special facet ``F = conv{(a, l), (b, l)}``
placed on top of the polygon at height ``l``, and extends a clockwise chain
of vertices from ``(b, l)`` until it closes at ``(a, l)``.  Each new edge
must keep the chain strictly convex, keep the origin strictly inside, have
lattice height at most the configured cap and contribute only residues that
are still available in the basket.  Closed chains are then filtered: the
basket must match exactly, the polygon must be minimal, and ``F`` must be
a special facet.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import ceil, floor, gcd
from typing import Callable, Optional, Sequence

from .invariants import degree_from_content
from .lattice import EdgeData, Point, Polygon, boundary_count, cross, normal_form, xgcd
from .mutation import all_mutations, is_minimal
from .singularity import (
    QuotientSingularity,
    _cone_weight,
    basket_max_index,
    format_basket,
    max_local_index,
    parse_basket,
    singularity_content,
)

log = logging.getLogger(__name__)


class BoundsExceeded(RuntimeError):
    """A search hit a configured safety limit and is therefore incomplete."""


class ConfigError(ValueError):
    code = "ConfigError"


@dataclass(frozen=True)
class SpecialFacetInput:
    height: int
    a: int
    b: int

    @property
    def left(self) -> Point:
        return (self.a, self.height)

    @property
    def right(self) -> Point:
        return (self.b, self.height)


@dataclass(frozen=True)
class SearchRegion:
    """Candidate vertex window for one facet input.

    Rows run from ``ymin = -l(l+1)`` up to ``l - 1``; on row ``y`` the x range
    is cut out by the flattest lines of height <= ``cap`` through the two
    facet endpoints.
    """

    facet: SpecialFacetInput
    cap: int
    margin: int = 0

    @property
    def ymin(self) -> int:
        l = self.facet.height
        return -l * (l + 1) - self.margin

    def x_range(self, y: int) -> tuple[int, int]:
        l, a, b, H = self.facet.height, self.facet.a, self.facet.b, self.cap
        # x <= H(1 - y/l) + b*y/l  and  x >= -H(1 - y/l) + a*y/l
        hi = (H * (l - y) + b * y) // l
        lo = -((H * (l - y) - a * y) // l)
        return lo - self.margin, hi + self.margin

    def contains(self, p: Point) -> bool:
        if not self.ymin <= p[1] <= self.facet.height - 1:
            return False
        lo, hi = self.x_range(p[1])
        return lo <= p[0] <= hi

    def points(self) -> list[Point]:
        out = []
        for y in range(self.ymin, self.facet.height):
            lo, hi = self.x_range(y)
            out.extend((x, y) for x in range(lo, hi + 1) if gcd(x, y) == 1)
        return out


@dataclass(frozen=True)
class Bounds:
    n_max: int
    height_cap: int
    max_nodes: int = 20_000_000
    region_margin: int = 0

    def to_json(self) -> dict:
        return {"n_max": self.n_max, "height_cap": self.height_cap,
                "max_nodes": self.max_nodes, "region_margin": self.region_margin}


# Clockwise angle order on directions, measured from (1, 0).
def _half(d: Point) -> int:
    return 0 if d[1] < 0 or (d[1] == 0 and d[0] > 0) else 1


def _cw_less(d1: Point, d2: Point) -> bool:
    """Whether d1 comes strictly before d2 clockwise from (1, 0)."""
    h1, h2 = _half(d1), _half(d2)
    if h1 != h2:
        return h1 < h2
    return cross(d1, d2) < 0


def _edge_residue(u: Point, v: Point, height: int, length: int):
    n, k0 = divmod(length, height)
    if k0 == 0:
        return n, None
    R, a = _cone_weight(u, v)
    k = gcd(a + 1, R)
    c = (a + 1) // k
    return n, QuotientSingularity(k0 * height, k0 * c - 1)


def enumerate_facet_inputs(basket: Sequence[QuotientSingularity],
                           height_cap: Optional[int] = None) -> list[SpecialFacetInput]:
    """All candidate special facets, up to the shear x -> x + l*y/l.

    ``b - a`` is at most ``4 * cap``: beyond that an admissible facet leaves
    no room below height ``-l``, which minimality requires.
    """
    mb = basket_max_index(basket)
    cap = height_cap or mb
    allowed = set(basket)
    out = []
    for l in range(1, cap + 1):
        for a in range(-l + 1, 1):
            if gcd(a, l) != 1:
                continue
            for b in range(a + 1, a + 4 * cap + 1):
                if gcd(b, l) != 1:
                    continue
                length = b - a
                if l > mb and length % l:
                    continue
                _, res = _edge_residue((a, l), (b, l), l, length)
                if res is not None and res not in allowed:
                    continue
                out.append(SpecialFacetInput(l, a, b))
    return out


def is_special(p: Polygon, e: EdgeData) -> bool:
    s = p.vertex_sum()
    return cross(e.start, s) <= 0 and cross(s, e.end) <= 0


def special_facets(p: Polygon) -> list[EdgeData]:
    return [e for e in p.edges() if is_special(p, e)]


def _prim_offset(u: Point) -> Point:
    # A point q with cross(u, q) == -1.
    _, s, t = xgcd(u[0], u[1])  # s*u0 + t*u1 == 1
    return (t, -s)


def grow(facet: SpecialFacetInput, basket: Sequence[QuotientSingularity],
         bounds: Bounds, stats: Optional[dict] = None) -> list[Polygon]:
    """Closed polygons grown from ``facet`` that pass all filters."""
    raw = grow_raw(facet, basket, bounds, stats)
    want = tuple(sorted(basket))
    mb = basket_max_index(basket)
    out = []
    for verts in raw:
        p = Polygon._trusted(verts)
        sc = singularity_content(p)
        if sc.multiset() != want or sc.n > bounds.n_max:
            continue
        if max_local_index(p) < mb:
            continue
        top = [e for e in p.edges() if e.start == facet.left and e.end == facet.right]
        if not top or not is_special(p, top[0]):
            continue
        if not is_minimal(p):
            continue
        out.append(p)
    if stats is not None:
        stats["outputs"] = len(out)
    return out


def grow_raw(facet: SpecialFacetInput, basket: Sequence[QuotientSingularity],
             bounds: Bounds, stats: Optional[dict] = None) -> list[list[Point]]:
    """Every closed convex chain from the facet, before the final filters."""
    if stats is not None:
        stats.update(nodes=0, raw=0)
    l = facet.height
    A, B = facet.left, facet.right
    H = bounds.height_cap
    mb = basket_max_index(basket)
    region = SearchRegion(facet, H, bounds.region_margin)
    ymin = region.ymin
    budget = Counter(basket)
    n0, res0 = _edge_residue(A, B, l, B[0] - A[0])
    if res0 is not None:
        if not budget[res0]:
            return []
        budget[res0] -= 1
    if n0 > bounds.n_max:
        return []
    residue_heights = {s.r for s in basket}
    residue_orders = {s.R for s in basket}
    results: list[list[Point]] = []
    nodes = 0
    chain = [A, B]

    def close_ok(u: Point, d_prev: Point, n_used: int, budget: Counter) -> bool:
        d = (A[0] - u[0], A[1] - u[1])
        if not _cw_less(d_prev, d):
            return False
        # turn at A back into the facet direction (1, 0)
        if cross(d, (1, 0)) >= 0:
            return False
        c = cross(u, A)
        if c >= 0:
            return False
        g = gcd(d[0], d[1])
        h = -c // g
        if h > H:
            return False
        n, res = _edge_residue(u, A, h, g)
        if res is not None and (h > mb or not budget[res]):
            return False
        if res is not None:
            budget[res] -= 1
            ok = not +budget
            budget[res] += 1
        else:
            ok = not +budget
        return ok and n_used + n <= bounds.n_max

    def extend(u: Point, d_prev: Point, n_used: int):
        nonlocal nodes
        nodes += 1
        if nodes > bounds.max_nodes:
            raise BoundsExceeded(f"more than {bounds.max_nodes} search nodes for {facet}")
        to_a = (A[0] - u[0], A[1] - u[1])
        if not _cw_less(d_prev, to_a):
            return
        if close_ok(u, d_prev, n_used, budget):
            results.append(list(chain))
        q = _prim_offset(u)
        ux, uy = u
        for h in range(1, H + 1):
            # directions d with cross(u, d) == -h are h*q + t*u
            base = (h * q[0], h * q[1])
            # keep u + d inside the bounding box of the region
            tlo, thi = _t_range(u, base, region)
            for t in range(tlo, thi + 1):
                d = (base[0] + t * ux, base[1] + t * uy)
                if gcd(d[0], d[1]) != 1:
                    continue
                if not _cw_less(d_prev, d) or not _cw_less(d, to_a):
                    continue
                k = 1
                while True:
                    v = (ux + k * d[0], uy + k * d[1])
                    if not region.contains(v):
                        if v[1] < ymin or v[1] >= l:
                            break
                        # x window widens downwards; stop once we leave it
                        # moving away from the centre
                        lo, hi = region.x_range(v[1])
                        if (v[0] > hi and d[0] >= 0) or (v[0] < lo and d[0] <= 0):
                            break
                        k += 1
                        continue
                    n, k0 = divmod(k, h)
                    if n_used + n > bounds.n_max:
                        break
                    if gcd(v[0], v[1]) != 1:
                        k += 1
                        continue
                    if k0:
                        if h not in residue_heights or k0 * h not in residue_orders:
                            k += 1
                            continue
                        _, res = _edge_residue(u, v, h, k)
                        if not budget[res]:
                            k += 1
                            continue
                        budget[res] -= 1
                    if _cw_less(d, (A[0] - v[0], A[1] - v[1])):
                        chain.append(v)
                        extend(v, d, n_used + n)
                        chain.pop()
                    if k0:
                        budget[res] += 1
                    k += 1

    extend(B, (B[0] - A[0], 0), n0)
    if stats is not None:
        stats["nodes"] = nodes
        stats["raw"] = len(results)
    return results


def _t_range(u: Point, base: Point, region: SearchRegion) -> tuple[int, int]:
    # u + base + t*u lies in the bounding box of the region.
    ymin, ymax = region.ymin, region.facet.height - 1
    xlo, _ = region.x_range(ymin)
    _, xhi = region.x_range(ymin)
    xlo0, xhi0 = region.x_range(ymax)
    xlo, xhi = min(xlo, xlo0), max(xhi, xhi0)
    lo, hi = -10 ** 9, 10 ** 9
    for coord, cmin, cmax in ((0, xlo, xhi), (1, ymin, ymax)):
        uc, bc = u[coord], u[coord] + base[coord]
        if uc == 0:
            if not cmin <= bc <= cmax:
                return 0, -1
            continue
        t1 = (cmin - bc) / uc
        t2 = (cmax - bc) / uc
        if t1 > t2:
            t1, t2 = t2, t1
        lo = max(lo, ceil(t1))
        hi = min(hi, floor(t2))
    return lo, hi


# Mutation-equivalence ------------------------------------------------------

def explore(start: Polygon, cap: int, depth: int) -> dict[Polygon, Optional[Polygon]]:
    """Breadth-first search of the mutation graph on normal forms.

    Only polygons with at most ``cap`` boundary points are visited.  The
    result maps each reached normal form to its BFS parent.
    """
    root = normal_form(start)
    parent: dict[Polygon, Optional[Polygon]] = {root: None}
    frontier = [root]
    for _ in range(depth):
        nxt = []
        for p in frontier:
            for t in all_mutations(p):
                if boundary_count(t.target) > cap:
                    continue
                q = normal_form(t.target)
                if q not in parent:
                    parent[q] = p
                    nxt.append(q)
        if not nxt:
            break
        frontier = nxt
    return parent


def _trace_path(parent, q) -> tuple[Polygon, ...]:
    out = [q]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return tuple(reversed(out))


def mutation_path(p: Polygon, q: Polygon, cap: Optional[int] = None,
                  depth: int = 8) -> Optional[tuple[Polygon, ...]]:
    """Normal forms along a shortest mutation path from ``p`` to ``q``, if found."""
    if cap is None:
        cap = 3 * min(boundary_count(p), boundary_count(q))
    parent = explore(p, cap, depth)
    target = normal_form(q)
    return _trace_path(parent, target) if target in parent else None


@dataclass(frozen=True)
class MutationLink:
    source: Polygon
    target: Polygon
    path: tuple[Polygon, ...]

    def to_json(self) -> dict:
        return {"source": _verts(self.source), "target": _verts(self.target),
                "path": [_verts(p) for p in self.path]}


@dataclass
class EquivalenceClass:
    members: list[Polygon]          # normal forms, sorted by _rank
    links: list[MutationLink]
    reach: set = None               # normal forms seen by the searches

    @property
    def representative(self) -> Polygon:
        return self.members[0]


@dataclass(frozen=True)
class Separation:
    first: int
    second: int
    kind: str                       # "period" or "UNRESOLVED"
    detail: dict

    def to_json(self) -> dict:
        return {"classes": [self.first, self.second], "kind": self.kind, "detail": self.detail}


def _rank(p: Polygon):
    return (boundary_count(p), max_local_index(p), p.vertices)


def _verts(p: Polygon) -> list:
    return [list(v) for v in p.vertices]


def equivalence_classes(polys: Sequence[Polygon], cap_factor: int = 3,
                        depth: int = 8) -> list[EquivalenceClass]:
    """Group polygons of equal singularity content into mutation classes.

    Two polygons are merged only when an explicit path is found by the
    bounded search from one of them; the boundary cap is ``cap_factor``
    times the smallest boundary count among the inputs.
    """
    nfs = sorted({normal_form(p) for p in polys}, key=_rank)
    if not nfs:
        return []
    cap = cap_factor * min(boundary_count(p) for p in nfs)
    root = list(range(len(nfs)))

    def find(i):
        while root[i] != i:
            root[i] = root[root[i]]
            i = root[i]
        return i

    index = {p: i for i, p in enumerate(nfs)}
    reach: list[set] = []
    links: list[tuple[int, MutationLink]] = []
    for i, p in enumerate(nfs):
        parent = explore(p, cap, depth)
        reach.append(set(parent))
        for q in nfs:
            j = index[q]
            if q in parent and find(i) != find(j):
                root[find(j)] = find(i)
                links.append((i, MutationLink(p, q, _trace_path(parent, q))))
    groups: dict[int, list[int]] = {}
    for i in range(len(nfs)):
        groups.setdefault(find(i), []).append(i)
    out = []
    for members in groups.values():
        rs = set(members)
        out.append(EquivalenceClass(
            members=[nfs[i] for i in members],
            links=[l for i, l in links if i in rs],
            reach=set().union(*(reach[i] for i in members)),
        ))
    out.sort(key=lambda c: _rank(c.representative))
    return out


# Baskets, families and configuration --------------------------------------

@dataclass(frozen=True)
class Family:
    name: str
    types: tuple[QuotientSingularity, ...]
    required: tuple[QuotientSingularity, ...]
    mult_max: int
    n_max: int

    def baskets(self, mult_max: Optional[int] = None) -> list[tuple[QuotientSingularity, ...]]:
        top = self.mult_max if mult_max is None else mult_max
        out = []

        def rec(i, left, acc):
            if i == len(self.types):
                if sum(acc) and all(acc[self.types.index(r)] for r in self.required):
                    out.append(tuple(acc))
                return
            for m in range(left + 1):
                rec(i + 1, left - m, acc + [m])

        rec(0, top, [])
        out.sort(key=lambda ms: (sum(ms), ms))
        return [tuple(sorted(s for s, m in zip(self.types, ms) for _ in range(m))) for ms in out]

    def multiplicities(self, basket) -> tuple[int, ...]:
        c = Counter(basket)
        return tuple(c[s] for s in self.types)


FAMILIES = {
    "1/3+1/6": Family("1/3+1/6", (QuotientSingularity(3, 1), QuotientSingularity(6, 1)),
                      (QuotientSingularity(6, 1),), 2, 13),
    "1/5": Family("1/5", (QuotientSingularity(5, 1),), (QuotientSingularity(5, 1),), 2, 11),
}


def degree_n_bound(basket) -> int:
    """Largest ``n`` with positive degree ``12 - n - sum A``."""
    bound = degree_from_content(0, basket)
    return ceil(bound) - 1


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines the content of a classification run."""

    spec: str
    n_max: Optional[int] = None
    mult_max: Optional[int] = None
    height_extra: int = 1
    bfs_cap_factor: int = 3
    bfs_depth: int = 8
    max_nodes: int = 20_000_000
    region_margin: int = 0

    def to_json(self) -> dict:
        return {"spec": self.spec, "n_max": self.n_max, "mult_max": self.mult_max,
                "height_extra": self.height_extra, "bfs_cap_factor": self.bfs_cap_factor,
                "bfs_depth": self.bfs_depth, "max_nodes": self.max_nodes,
                "region_margin": self.region_margin}

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()

    def family(self) -> Optional[Family]:
        if not self.spec.startswith("family:"):
            return None
        name = self.spec[len("family:"):].strip()
        if name in FAMILIES:
            return FAMILIES[name]
        types = []
        for term in name.split("+"):
            term = term.strip()
            if "(" not in term:
                term += "(1,1)"
            types.extend(parse_basket(term))
        if self.n_max is None or self.mult_max is None:
            raise ConfigError(f"family {name!r} has no default bounds; give n_max and mult_max")
        return Family(name, tuple(types), (), self.mult_max, self.n_max)

    def baskets(self) -> list[tuple[QuotientSingularity, ...]]:
        self.validate()
        fam = self.family()
        if fam is None:
            return [parse_basket(self.spec)]
        return fam.baskets(self.mult_max)

    def n_bound(self, basket) -> int:
        fam = self.family()
        n = self.n_max if self.n_max is not None else (fam.n_max if fam else 13)
        return min(n, degree_n_bound(basket))

    def bounds(self, basket) -> Bounds:
        return Bounds(self.n_bound(basket), basket_max_index(basket) + self.height_extra,
                      self.max_nodes, self.region_margin)

    def validate(self):
        if self.n_max is not None and self.n_max < 0:
            raise ConfigError("n_max must be non-negative")
        if self.mult_max is not None and self.mult_max < 1:
            raise ConfigError("mult_max must be at least 1")
        if self.height_extra < 0:
            raise ConfigError("height_extra must be non-negative")
        if self.bfs_cap_factor < 1 or self.bfs_depth < 0:
            raise ConfigError("bad equivalence search budget")
        if self.max_nodes < 1 or self.region_margin < 0:
            raise ConfigError("bad search limits")
        if not self.spec.startswith("family:") and not parse_basket(self.spec):
            raise ConfigError("the empty basket is not classified")


DISCLAIMER = (
    "Polygons are searched with every edge of height at most the height cap "
    "(basket maximum plus height_extra). Minimal polygons whose maximal local "
    "index exceeds the cap are not enumerated. Classes are separated only with "
    "period evidence; other separations are marked UNRESOLVED.")


# Runs ---------------------------------------------------------------------

@dataclass
class InputResult:
    basket: str
    facet: SpecialFacetInput
    nodes: int
    raw: int
    outputs: list                   # vertex lists, clockwise from the facet's left end

    def key(self) -> tuple:
        return (self.basket, self.facet.height, self.facet.a, self.facet.b)

    def to_json(self) -> dict:
        return {"basket": self.basket, "l": self.facet.height, "a": self.facet.a,
                "b": self.facet.b, "nodes": self.nodes, "raw": self.raw,
                "outputs": [[list(v) for v in o] for o in self.outputs]}

    @classmethod
    def from_json(cls, d) -> "InputResult":
        return cls(d["basket"], SpecialFacetInput(d["l"], d["a"], d["b"]), d["nodes"], d["raw"],
                   [[tuple(v) for v in o] for o in d["outputs"]])


def _grow_task(args) -> InputResult:
    basket_text, facet, bounds = args
    basket = parse_basket(basket_text)
    stats: dict = {}
    polys = grow(facet, basket, bounds, stats)
    # keep the facet-on-top coordinates: rotate to start at the facet's left end
    outs = []
    for p in polys:
        vs = list(p.vertices)
        i = vs.index(facet.left)
        outs.append(vs[i:] + vs[:i])
    return InputResult(basket_text, facet, stats["nodes"], stats["raw"], outs)


def _basket_text(basket) -> str:
    c = Counter(basket)
    return " + ".join(f"{m}x{s}" for s, m in sorted(c.items()))


@dataclass
class ClassRecord:
    number: int
    n: int
    basket: tuple
    multiplicities: tuple
    degree: Fraction
    display: list                   # representative in facet-on-top coordinates
    equivalence: EquivalenceClass

    def to_json(self) -> dict:
        eq = self.equivalence
        return {
            "number": self.number,
            "n": self.n,
            "basket": format_basket(self.basket),
            "multiplicities": list(self.multiplicities),
            "degree": str(self.degree),
            "representative": [list(v) for v in self.display],
            "representative_normal_form": _verts(eq.representative),
            "members": [_verts(p) for p in eq.members],
            "links": [l.to_json() for l in eq.links],
            "explored": len(eq.reach),
        }


@dataclass
class ClassificationRun:
    config: RunConfig
    inputs: list                    # InputResult, in task order
    classes: list                   # ClassRecord
    separations: list               # Separation
    timing: dict

    def to_json(self, include_timing: bool = True) -> dict:
        out = {
            "format": 1,
            "config": self.config.to_json(),
            "config_hash": self.config.digest(),
            "disclaimer": DISCLAIMER,
            "inputs": [r.to_json() for r in self.inputs],
            "classes": [c.to_json() for c in self.classes],
            "separations": [s.to_json() for s in self.separations],
        }
        if include_timing:
            out["timing"] = self.timing
        return out

    def dumps(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_json(include_timing), indent=1, sort_keys=True)

    def table_rows(self) -> list[dict]:
        fam = self.config.family()
        rows = []
        for c in self.classes:
            row = {"#": c.number, "vertices": _fmt_vertices(c.display), "n": c.n}
            if fam is not None:
                names = _mult_names(fam)
                row.update(zip(names, c.multiplicities))
            else:
                row["basket"] = format_basket(c.basket)
            row["degree"] = str(c.degree)
            rows.append(row)
        return rows


def _mult_names(fam: Family) -> list[str]:
    return ["m"] if len(fam.types) == 1 else [f"m{i + 1}" for i in range(len(fam.types))]


def _fmt_vertices(vs) -> str:
    return ", ".join(f"({x},{y})" for x, y in vs)


def default_threads() -> int:
    env = os.environ.get("FANO_THREADS")
    if env:
        try:
            t = int(env)
        except ValueError:
            raise ConfigError(f"FANO_THREADS={env!r} is not an integer")
        if t < 1:
            raise ConfigError("FANO_THREADS must be at least 1")
        return t
    return os.cpu_count() or 1


def classify(config: RunConfig, threads: Optional[int] = None,
             resume: Optional[dict] = None,
             checkpoint: Optional[Callable[[list], None]] = None,
             stop_after: Optional[int] = None) -> ClassificationRun:
    """Run the growth search over every basket and facet input, then merge.

    ``resume`` is a previously saved run (as JSON data) with the same config
    hash; its finished inputs are reused.  ``checkpoint`` receives the list
    of finished inputs after each one completes.  ``stop_after`` ends the
    search early after that many new inputs (used to test resuming).
    """
    t0 = time.time()
    config.validate()
    if threads is None:
        threads = default_threads()
    tasks = []
    for basket in config.baskets():
        text = _basket_text(basket)
        bounds = config.bounds(basket)
        for f in enumerate_facet_inputs(basket, bounds.height_cap):
            tasks.append((text, f, bounds))
    done: dict[tuple, InputResult] = {}
    if resume is not None:
        if resume.get("config_hash") != config.digest():
            raise ConfigError("cannot resume: the saved run used a different configuration")
        for d in resume.get("inputs", []):
            r = InputResult.from_json(d)
            done[r.key()] = r
    todo = [t for t in tasks if (t[0], t[1].height, t[1].a, t[1].b) not in done]
    if stop_after is not None:
        todo = todo[:stop_after]

    def ordered():
        keys = [(t[0], t[1].height, t[1].a, t[1].b) for t in tasks]
        return [done[k] for k in keys if k in done]

    if threads > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for r in pool.map(_grow_task, todo, chunksize=1):
                done[r.key()] = r
                if checkpoint:
                    checkpoint(ordered())
    else:
        for t in todo:
            r = _grow_task(t)
            done[r.key()] = r
            if checkpoint:
                checkpoint(ordered())
    inputs = ordered()
    t1 = time.time()
    complete = len(inputs) == len(tasks)
    classes, separations = _assemble(config, inputs) if complete else ([], [])
    timing = {"search_seconds": round(t1 - t0, 3), "merge_seconds": round(time.time() - t1, 3),
              "threads": threads, "complete": complete}
    return ClassificationRun(config, inputs, classes, separations, timing)


def _assemble(config: RunConfig, inputs: list) -> tuple[list, list]:
    fam = config.family()
    # display coordinates: first occurrence in task order
    display: dict[Polygon, list] = {}
    by_sc: dict[tuple, list[Polygon]] = {}
    for r in inputs:
        for verts in r.outputs:
            p = Polygon._trusted(verts)
            nf = normal_form(p)
            if nf not in display:
                display[nf] = verts
                by_sc.setdefault(singularity_content(p).key(), []).append(nf)
    basket_order = {b: i for i, b in enumerate(config.baskets())}
    records = []
    for (n, basket) in sorted(by_sc, key=lambda k: (basket_order.get(k[1], 0), k[0])):
        classes = equivalence_classes(by_sc[(n, basket)], config.bfs_cap_factor, config.bfs_depth)
        for eq in classes:
            mult = fam.multiplicities(basket) if fam else (len(basket),)
            records.append(ClassRecord(0, n, basket, mult, degree_from_content(n, basket),
                                       display[eq.representative], eq))
    for i, c in enumerate(records, 1):
        c.number = i
    return records, _separate(records)


def _separate(records: list) -> list[Separation]:
    from .laurent import load_fixtures, periods_distinct

    fixtures = load_fixtures()
    table = {row["id"]: row["vertices"] for fam in _load_tables()["families"].values()
             for row in fam["rows"]}
    located: dict[int, list[str]] = {}
    for row in sorted(fixtures):
        nf = normal_form(Polygon(table[row]))
        for c in records:
            if nf in c.equivalence.reach:
                located.setdefault(c.number, []).append(row)
    out = []
    for i, c in enumerate(records):
        for d in records[i + 1:]:
            if (c.n, c.basket) != (d.n, d.basket):
                continue
            kind, detail = "UNRESOLVED", {}
            for r1 in located.get(c.number, []):
                for r2 in located.get(d.number, []):
                    cmp = periods_distinct(fixtures[r1].period(5), fixtures[r2].period(5), 5)
                    if cmp.verdict == "DISTINCT":
                        kind = "period"
                        detail = {"rows": [r1, r2], "first_difference": cmp.witness,
                                  "periods": [fixtures[r1].period(5).to_json(),
                                              fixtures[r2].period(5).to_json()]}
            out.append(Separation(c.number, d.number, kind, detail))
    return out


# Reference tables -----------------------------------------------------------

def _load_tables() -> dict:
    return json.loads(resources.files("fanoclass").joinpath("data/tables.json").read_text())


def reference_table(family: str) -> list[dict]:
    fams = _load_tables()["families"]
    if family not in fams:
        raise ConfigError(f"no reference table for family {family!r}")
    return fams[family]["rows"]


@dataclass
class TableComparison:
    family: str
    # table row id -> class number whose representative has the same normal form
    representative_match: dict
    # table row id -> class number that contains the row among its members
    member_match: dict
    invariants_match: bool
    class_count: int
    row_count: int

    @property
    def ok(self) -> bool:
        return (self.class_count == self.row_count and self.invariants_match
                and len(self.representative_match) == self.row_count
                and len(set(self.representative_match.values())) == self.row_count)

    def to_json(self) -> dict:
        return {"family": self.family, "classes": self.class_count, "rows": self.row_count,
                "invariants_match": self.invariants_match,
                "representative_match": self.representative_match,
                "member_match": self.member_match, "ok": self.ok}


def compare_with_table(run: ClassificationRun, family: str) -> TableComparison:
    rows = reference_table(family)
    fam = FAMILIES[family]
    names = _mult_names(fam)
    rep, mem = {}, {}
    for row in rows:
        nf = normal_form(Polygon(row["vertices"]))
        for c in run.classes:
            if c.equivalence.representative == nf:
                rep[row["id"]] = c.number
            if nf in c.equivalence.members:
                mem[row["id"]] = c.number
    want = Counter((r["n"], tuple(r[k] for k in names), r["degree"]) for r in rows)
    got = Counter((c.n, tuple(c.multiplicities), str(c.degree)) for c in run.classes)
    return TableComparison(family, rep, mem, want == got, len(run.classes), len(rows))
