import json

import pytest

from fanoclass.acceptance import family_run
from fanoclass.classify import (
    Bounds,
    ConfigError,
    RunConfig,
    SearchRegion,
    SpecialFacetInput,
    classify,
    compare_with_table,
    enumerate_facet_inputs,
    equivalence_classes,
    grow,
    mutation_path,
    reference_table,
    special_facets,
)
from fanoclass.lattice import Polygon, normal_form
from fanoclass.mutation import is_minimal
from fanoclass.singularity import (
    QuotientSingularity as QS,
    basket_max_index,
    max_local_index,
    parse_basket,
    singularity_content,
)

from conftest import P115_MUTANT

B6 = parse_basket("1/6(1,1)")
B5 = parse_basket("1/5(1,1)")


def _members(run):
    return {p for c in run.classes for p in c.equivalence.members}


def test_special_facets(p115, square, p2):
    s = special_facets(p115)
    assert len(s) == 1 and {s[0].start, s[0].end} == {(0, 1), (-5, -1)}
    assert len(special_facets(square)) == 4
    assert len(special_facets(p2)) == 3


def test_special_facet_exists(table_rows):
    for row in table_rows.values():
        assert special_facets(Polygon(row["vertices"]))


def test_facet_inputs():
    assert SpecialFacetInput(3, -1, 1) in enumerate_facet_inputs(B6)
    assert SpecialFacetInput(5, -3, -2) in enumerate_facet_inputs(B5)
    for basket in (B5, B6, parse_basket("1/3(1,1)+1/6(1,1)")):
        for f in enumerate_facet_inputs(basket, basket_max_index(basket) + 1):
            assert -f.height < f.a <= 0 < f.b - f.a


def test_grow_examples():
    out = grow(SpecialFacetInput(3, -1, 1), B6, Bounds(13, 4))
    assert Polygon([(-1, 3), (1, 3), (0, -1)]) in out
    out = grow(SpecialFacetInput(5, -3, -2), B5, Bounds(11, 6))
    assert Polygon([(-3, 5), (-2, 5), (1, -2)]) in out


def test_grow_outputs_pass_filters():
    f = SpecialFacetInput(3, -1, 1)
    for p in grow(f, B6, Bounds(13, 4)):
        assert singularity_content(p).multiset() == B6
        assert is_minimal(p)
        assert any(e.start == f.left and e.end == f.right for e in special_facets(p))


def test_search_region():
    r = SearchRegion(SpecialFacetInput(3, -1, 1), 3)
    assert r.ymin == -12
    assert r.contains((0, -1)) and not r.contains((0, 3)) and not r.contains((0, -13))
    assert all(r.contains(q) for q in r.points())
    wider = SearchRegion(SpecialFacetInput(3, -1, 1), 3, margin=1)
    assert set(r.points()) < set(wider.points())


@pytest.mark.parametrize("family", ["1/3+1/6", "1/5"])
def test_run_outputs(family):
    run = family_run(family)
    cfg = run.config
    for r in run.inputs:
        basket = parse_basket(r.basket.replace(" ", ""))
        mb = basket_max_index(basket)
        l = r.facet.height
        for verts in r.outputs:
            p = Polygon(verts)
            assert singularity_content(p).multiset() == basket
            assert is_minimal(p)
            assert mb <= max_local_index(p) <= mb + cfg.height_extra
            # containment below the special facet on top
            assert all(-l * (l + 1) <= y <= l for _, y in verts)
            assert verts[0] == r.facet.left and verts[1] == r.facet.right


@pytest.mark.parametrize("family,count", [("1/3+1/6", 14), ("1/5", 12)])
def test_family_class_counts(family, count):
    run = family_run(family)
    cmp = compare_with_table(run, family)
    assert cmp.class_count == count and cmp.invariants_match
    assert len(set(cmp.member_match.values())) == count


@pytest.mark.parametrize("family", ["1/3+1/6", "1/5"])
def test_no_duplicate_members(family):
    run = family_run(family)
    all_members = [p for c in run.classes for p in c.equivalence.members]
    assert len(all_members) == len(set(all_members))
    reps = [c.equivalence.representative for c in run.classes]
    assert len(set(reps)) == len(reps)


@pytest.mark.parametrize("family", ["1/3+1/6", "1/5"])
def test_merges_carry_paths(family):
    run = family_run(family)
    for c in run.classes:
        eq = c.equivalence
        assert len(eq.links) == len(eq.members) - 1
        for link in eq.links:
            assert link.path[0] == link.source and link.path[-1] == link.target


@pytest.mark.parametrize("family,pair", [("1/3+1/6", ("1.7", "1.8")), ("1/5", ("2.6", "2.7"))])
def test_period_separation_recorded(family, pair):
    run = family_run(family)
    assert not [s for s in run.separations if s.kind == "UNRESOLVED"]
    seps = [s for s in run.separations if s.kind == "period"]
    assert [set(s.detail["rows"]) for s in seps] == [set(pair)]


@pytest.mark.parametrize("family", ["1/3+1/6", "1/5"])
def test_region_margin_stability(family):
    base = family_run(family)
    wider = classify(RunConfig("family:" + family, region_margin=1))
    assert _members(wider) == _members(base)


def test_height_cap_needed_for_row_1_12():
    strict = classify(RunConfig("family:1/3+1/6", height_extra=0))
    assert len(strict.classes) == 13
    row = next(r for r in reference_table("1/3+1/6") if r["id"] == "1.12")
    p = Polygon(row["vertices"])
    assert max_local_index(p) == 4
    assert normal_form(p) not in _members(strict)
    assert normal_form(p) in _members(family_run("1/3+1/6"))


def test_row_1_1_alone():
    run = classify(RunConfig("1x1/6(1,1)", n_max=2))
    assert len(run.classes) == 1
    rep = run.classes[0].equivalence.representative
    assert rep == normal_form(Polygon([(-1, 3), (1, 3), (0, -1)]))


def test_equivalence_classes_small(p115):
    classes = equivalence_classes([p115, Polygon(P115_MUTANT)])
    assert len(classes) == 1
    assert len(classes[0].links[0].path) == 2
    assert len(equivalence_classes([p115])) == 1
    assert mutation_path(p115, Polygon(P115_MUTANT)) is not None


def test_determinism_and_resume(tmp_path):
    cfg = RunConfig("1/5(1,1)", n_max=4)
    full = classify(cfg, threads=1)
    saved = []
    part = classify(cfg, threads=1, checkpoint=lambda inputs: saved.append(list(inputs)),
                    stop_after=4)
    assert not part.timing["complete"] and len(saved[-1]) == 4
    state = {"config_hash": cfg.digest(), "inputs": [r.to_json() for r in saved[-1]]}
    state = json.loads(json.dumps(state))
    resumed = classify(cfg, threads=2, resume=state)
    assert resumed.dumps(include_timing=False) == full.dumps(include_timing=False)


def test_resume_rejects_other_config():
    with pytest.raises(ConfigError):
        classify(RunConfig("1/5(1,1)", n_max=3), resume={"config_hash": "x", "inputs": []})


@pytest.mark.parametrize("kw", [dict(n_max=-1), dict(mult_max=0), dict(height_extra=-1),
                                dict(bfs_depth=-1), dict(max_nodes=0)])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        RunConfig("family:1/5", **kw).validate()


def test_config_digest_tracks_settings():
    assert RunConfig("family:1/5").digest() != RunConfig("family:1/5", height_extra=2).digest()
    assert RunConfig("family:1/5").digest() == RunConfig("family:1/5").digest()


def test_family_baskets():
    b = RunConfig("family:1/3+1/6").baskets()
    s3, s6 = QS(3, 1), QS(6, 1)
    assert sorted(b) == sorted([(s6,), (s3, s6), (s6, s6)])
    assert RunConfig("family:1/5").baskets() == [(QS(5, 1),), (QS(5, 1), QS(5, 1))]


def test_table_rows():
    run = family_run("1/5")
    rows = run.table_rows()
    assert list(rows[0]) == ["#", "vertices", "n", "m", "degree"]
    assert [r["#"] for r in rows] == list(range(1, 13))
