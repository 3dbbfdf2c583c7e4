"""Acceptance checks, shared by the test suite and ``fanoclass verify``.

Each check returns ``(passed, detail)``.  Expected values are pinned here;
nothing is compared with a tolerance.
"""

from __future__ import annotations

import random
import time
import traceback
from dataclasses import dataclass
from fractions import Fraction as F
from typing import Callable, Optional

from .classify import (
    ClassificationRun,
    RunConfig,
    classify,
    compare_with_table,
    reference_table,
)
from .invariants import (
    RationalFunction1,
    anticanonical_degree,
    degree_contribution,
    hilbert_series,
    riemann_roch_term,
    shattering_check,
)
from .laurent import load_fixtures, periods_distinct
from .lattice import (
    Polygon,
    UnimodularMap,
    area2,
    boundary_count,
    dual_area2,
    dual_dilate_count,
    is_primitive,
    lattice_points,
    normal_form,
)
from .mutation import (
    MutationSpec,
    all_mutations,
    is_minimal,
    minimality_witnesses,
    minimize,
    mutate,
    mutate_by,
)
from .singularity import QuotientSingularity, singularity_content

P115 = Polygon([(0, 1), (1, 0), (-5, -1)])
P115_MUTANT = [(0, 1), (-5, -1), (1, -7)]
PROPERTY_CASES = 500


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.name} ({self.seconds:.1f}s) {self.detail}"


def _q(num, den) -> RationalFunction1:
    return RationalFunction1.make([F(c) for c in num], den).normalized()


def check_invariants() -> tuple[bool, str]:
    problems = []
    if anticanonical_degree(P115) != F(49, 5):
        problems.append("degree of P(1,1,5)")
    want = _q([1, 8, 0, 2, -2, 0, -8, -1], [(5, 1), (1, 3)])
    if hilbert_series(P115) != want:
        problems.append("Hilbert series of P(1,1,5)")
    s5, s3, s6 = (QuotientSingularity(5, 1), QuotientSingularity(3, 1), QuotientSingularity(6, 1))
    sc = singularity_content(P115)
    if sc.key() != (2, (s5,)):
        problems.append(f"SC of P(1,1,5) is {sc}")
    rows = {r["id"]: r["vertices"] for f in ("1/3+1/6", "1/5") for r in reference_table(f)}
    if singularity_content(Polygon(rows["1.1"])).key() != (2, (s6,)):
        problems.append("SC of row 1.1")
    if singularity_content(Polygon(rows["2.1"])).key() != (2, (s5,)):
        problems.append("SC of row 2.1")
    for s, a in ((s3, F(5, 3)), (s5, F(1, 5)), (s6, F(-2, 3))):
        if degree_contribution(s) != a:
            problems.append(f"A of {s}")
    qs = {s3: _q([0, F(-1, 3)], [(3, 1)]), s5: _q([0, F(1, 5), F(-2, 5), F(1, 5)], [(5, 1)]),
          s6: _q([0, F(1, 3)], [(3, 1)])}
    for s, q in qs.items():
        if riemann_roch_term(s) != q:
            problems.append(f"Q of {s}")
    sum_q, sum_a = shattering_check([((-2, 3), (-1, 3)), ((-1, 3), (1, 3))])
    if not sum_q.is_zero() or sum_a != 1:
        problems.append(f"shattering sums {sum_q}, {sum_a}")
    return not problems, "; ".join(problems) or "all exact values match"


def check_mutation_fixture() -> tuple[bool, str]:
    edge = next(e for e in P115.edges() if e.inner_normal == (-1, -1))
    trace = mutate(P115, MutationSpec.for_edge(edge))
    ok1 = sorted(trace.target.vertices) == sorted(P115_MUTANT)
    back = mutate_by(trace.target, trace.spec.inverse()).target
    ok2 = normal_form(back) == normal_form(P115)
    return ok1 and ok2, f"image {list(trace.target.vertices)}; inverse returns source: {ok2}"


def check_minimality_fixture() -> tuple[bool, str]:
    q = Polygon(P115_MUTANT)
    low, path = minimize(q)
    ok = is_minimal(P115) and not is_minimal(q) and normal_form(low) == normal_form(P115)
    return ok, (f"source minimal {is_minimal(P115)}, image minimal {is_minimal(q)}, "
                f"minimize boundary {boundary_count(q)} -> {boundary_count(low)} in {len(path)} step(s)")


_RUNS: dict = {}


def family_run(family: str, threads: Optional[int] = None) -> ClassificationRun:
    if family not in _RUNS:
        _RUNS[family] = classify(RunConfig("family:" + family), threads=threads)
    return _RUNS[family]


def _check_family(family: str, expected: int, threads: Optional[int]) -> tuple[bool, str]:
    run = family_run(family, threads)
    cmp = compare_with_table(run, family)
    rows = [r["id"] for r in reference_table(family)]
    bijective = (len(cmp.member_match) == len(rows)
                 and len(set(cmp.member_match.values())) == len(rows))
    ok = cmp.class_count == expected and cmp.invariants_match and bijective
    return ok, (f"{cmp.class_count} classes (want {expected}); (n, m, degree) multiset "
                f"{'matches' if cmp.invariants_match else 'differs'}; table polygons found as "
                f"minimal members of distinct classes: {len(set(cmp.member_match.values()))}/"
                f"{len(rows)}; canonical representative equals the printed one for "
                f"{len(cmp.representative_match)}/{len(rows)}")


def check_periods() -> tuple[bool, str]:
    fx = load_fixtures()
    exact = all(fx[r].period(5) == fx[r].printed for r in ("1.7", "1.8"))
    v1 = periods_distinct(fx["1.7"].period(5), fx["1.8"].period(5), 5).verdict
    v2 = periods_distinct(fx["2.6"].period(5), fx["2.7"].period(5), 5).verdict
    ok = exact and v1 == v2 == "DISTINCT"
    return ok, f"printed prefixes reproduced: {exact}; 1.7/1.8 {v1}; 2.6/2.7 {v2}"


# Random polygons for the property suites -------------------------------------

def random_fano_polygon(rng: random.Random, radius: int = 5) -> Polygon:
    while True:
        k = rng.randint(3, 7)
        pts = []
        while len(pts) < k:
            p = (rng.randint(-radius, radius), rng.randint(-radius, radius))
            if is_primitive(p):
                pts.append(p)
        try:
            return Polygon(pts)
        except ValueError:
            continue


def random_unimodular(rng: random.Random, steps: int = 6) -> UnimodularMap:
    m = UnimodularMap(1, 0, 0, 1)
    gens = [UnimodularMap(1, 1, 0, 1), UnimodularMap(1, -1, 0, 1), UnimodularMap(1, 0, 1, 1),
            UnimodularMap(1, 0, -1, 1), UnimodularMap(0, 1, 1, 0), UnimodularMap(-1, 0, 0, 1)]
    for _ in range(steps):
        m = rng.choice(gens) @ m
    return m


def table_polygons() -> list[Polygon]:
    return [Polygon(r["vertices"]) for f in ("1/3+1/6", "1/5") for r in reference_table(f)]


def check_properties(cases: int = PROPERTY_CASES, seed: int = 20240601) -> tuple[bool, str]:
    rng = random.Random(seed)
    fails = []
    mutations = polys = 0
    while polys < cases or mutations < cases:
        polys += 1
        p = random_fano_polygon(rng)
        pts = lattice_points(p)
        b = boundary_count(p)
        if area2(p) != 2 * (len(pts) - b) + b - 2:
            fails.append(f"Pick {p}")
        if normal_form(p.transform(random_unimodular(rng))) != normal_form(p):
            fails.append(f"normal form {p}")
        w = minimality_witnesses(p)
        if not w.concordant:
            fails.append(f"minimality concordance {p}")
        key = singularity_content(p).key()
        for t in all_mutations(p):
            mutations += 1
            q = t.target
            if Polygon(q.vertices) != q:
                fails.append(f"Fano preservation {p}")
            if singularity_content(q).key() != key:
                fails.append(f"SC invariance {p}")
            if mutate_by(q, t.spec.inverse()).target != p:
                fails.append(f"involution {p}")
    for p in table_polygons():
        if anticanonical_degree(p) != dual_area2(p):
            fails.append(f"dual area {p}")
        series = hilbert_series(p).series(5)
        if series != [dual_dilate_count(p, k) for k in range(6)]:
            fails.append(f"Ehrhart {p}")
    return not fails, (f"{polys} random polygons, {mutations} mutations, 26 table polygons; "
                       + (f"{len(fails)} failure(s): {fails[:3]}" if fails else "no failures"))


def check_determinism(threads: Optional[int] = None) -> tuple[bool, str]:
    cfg = RunConfig("family:1/5")
    a = classify(cfg, threads=1).dumps(include_timing=False)
    b = classify(cfg, threads=max(2, threads or 2)).dumps(include_timing=False)
    return a == b, f"single-thread and parallel run JSON identical: {a == b} ({len(a)} bytes)"


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "invariant fixtures", lambda t: check_invariants()),
    (2, "mutation fixture", lambda t: check_mutation_fixture()),
    (3, "minimality fixture", lambda t: check_minimality_fixture()),
    (4, "14 classes for baskets of 1/3(1,1) and 1/6(1,1)", lambda t: _check_family("1/3+1/6", 14, t)),
    (5, "12 classes for baskets of 1/5(1,1)", lambda t: _check_family("1/5", 12, t)),
    (6, "period separation", lambda t: check_periods()),
    (7, "property suites", lambda t: check_properties()),
    (8, "determinism", lambda t: check_determinism(t)),
]


def run_criterion(number: int, threads: Optional[int] = None) -> CriterionResult:
    _, name, fn = CRITERIA[number - 1]
    t0 = time.time()
    try:
        ok, detail = fn(threads)
    except Exception as exc:  # a crash is a failed criterion, with the reason
        ok, detail = False, f"error: {exc!r}\n{traceback.format_exc()}"
    return CriterionResult(number, name, ok, detail, time.time() - t0)


def run_acceptance(threads: Optional[int] = None, only: Optional[list[int]] = None
                   ) -> list[CriterionResult]:
    return [run_criterion(n, threads) for n, _, _ in CRITERIA if not only or n in only]
