import csv
import json

import pytest

from fanoclass.cli import main, read_polygon
from fanoclass.lattice import Polygon

from conftest import P115


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_read_polygon_forms(tmp_path):
    want = Polygon(P115)
    assert read_polygon("(0,1), (1,0), (-5,-1)") == want
    assert read_polygon("[[0,1],[1,0],[-5,-1]]") == want
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"vertices": P115}))
    assert read_polygon(str(f)) == want


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "(0,1),(1,0),(-5,-1)")
    d = json.loads(out)
    assert code == 0
    assert d["degree"] == "49/5"
    assert d["sc"] == {"n": 2, "basket": ["1/5(1,1)"], "text": "(2, {1 x 1/5(1,1)})"}
    assert d["hilbert"]["denominator"] == [[1, 2], [5, 1]]
    assert d["minimal"] is True
    assert len(d["special_facets"]) == 1
    code, out, _ = run(capsys, "analyze", "(0,1),(1,0),(-1,-1)")
    d = json.loads(out)
    assert (d["degree"], d["sc"]["n"], d["sc"]["basket"]) == ("9", 3, [])


def test_analyze_is_byte_stable(capsys):
    a = run(capsys, "analyze", "(-1,3),(1,3),(0,-1)")[1]
    b = run(capsys, "analyze", "(0,-1),(1,3),(-1,3)")[1]
    assert a == b


@pytest.mark.parametrize("text,code", [("(2,0),(0,1),(-1,-1)", "NonPrimitiveVertex"),
                                       ("(0,0),(1,0)", "NotFullDimensional"),
                                       ("hello", "ParseError")])
def test_analyze_bad_input(capsys, text, code):
    status, _, err = run(capsys, "analyze", text)
    assert status == 2 and json.loads(err)["error"] == code


def test_mutate(capsys):
    code, out, _ = run(capsys, "mutate", "(0,1),(1,0),(-5,-1)", "--omega=-1,-1",
                       "--factor=1,-1")
    assert code == 0
    assert sorted(map(tuple, json.loads(out)["target"])) == [(-5, -1), (0, 1), (1, -7)]
    code, _, err = run(capsys, "mutate", "(0,1),(1,0),(-5,-1)", "--edge-index", "0")
    assert code == 2 and json.loads(err)["error"] == "NotAdmissible"
    code, _, err = run(capsys, "mutate", "(0,1),(1,0),(-5,-1)", "--edge", "9")
    assert code == 2


def test_minimize(capsys):
    code, out, _ = run(capsys, "minimize", "(0,1),(-5,-1),(1,-7)")
    d = json.loads(out)
    assert code == 0 and d["boundary_points"] == [8, 3] and len(d["path"]) == 1


def test_period(capsys):
    code, out, _ = run(capsys, "period", "x + y + 1/(x*y)", "--n-max", "3")
    assert [v["value"] for v in json.loads(out)["period"]] == ["1", "0", "0", "6"]
    for row, want in (("1.7", "20*a*b + 360*a + 60*b + 760"), ("1.8", "420*a + 30*b")):
        code, out, _ = run(capsys, "period", "--fixture", row)
        assert code == 0 and json.loads(out)["period"][5]["value"] == want
    code, _, err = run(capsys, "period", "x +")
    assert code == 2 and json.loads(err)["error"] == "LaurentParseError"
    code, _, err = run(capsys, "period", "--fixture", "9.9")
    assert code == 2


def test_render(capsys, tmp_path):
    out = tmp_path / "p.svg"
    assert run(capsys, "render", "(0,1),(1,0),(-5,-1)", "-o", str(out))[0] == 0
    first = out.read_bytes()
    run(capsys, "render", "(0,1),(1,0),(-5,-1)", "-o", str(out))
    assert out.read_bytes() == first and first.startswith(b"<svg")
    assert run(capsys, "render", "(0,0),(1,1)")[0] == 2


def test_classify_single_class(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", "--basket", "1x1/6(1,1)", "--n-max", "2",
                       "--threads", "1", "--out", str(tmp_path))
    assert code == 0 and json.loads(out)["classes"] == 1
    rows = list(csv.DictReader((tmp_path / "table.csv").open()))
    assert len(rows) == 1 and rows[0]["n"] == "2" and rows[0]["degree"] == "32/3"
    assert json.loads((tmp_path / "table.json").read_text())[0]["#"] == 1
    assert (tmp_path / "class_01.svg").exists()
    saved = json.loads((tmp_path / "run.json").read_text())
    assert saved["config"]["n_max"] == 2 and "disclaimer" in saved


def test_classify_resume(capsys, tmp_path):
    args = ["classify", "--basket", "1/5(1,1)", "--n-max", "3", "--threads", "1"]
    run(capsys, *args, "--out", str(tmp_path / "full"))
    run(capsys, *args, "--out", str(tmp_path / "part"), "--stop-after", "2")
    partial = json.loads((tmp_path / "part" / "run.json").read_text())
    assert partial["partial"] and len(partial["inputs"]) == 2
    code, _, _ = run(capsys, *args, "--out", str(tmp_path / "part"),
                     "--resume", str(tmp_path / "part" / "run.json"))
    assert code == 0

    def body(d):
        d = json.loads((tmp_path / d / "run.json").read_text())
        d.pop("timing")
        return d
    assert body("full") == body("part")
    assert (tmp_path / "full" / "table.csv").read_text() == (tmp_path / "part" / "table.csv").read_text()


def test_classify_family_reference(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", "--basket", "family:1/5", "--out", str(tmp_path))
    d = json.loads(out)
    assert code == 0 and d["classes"] == 12 and d["unresolved"] == 0
    assert d["reference"]["invariants_match"]
    rows = list(csv.DictReader((tmp_path / "table.csv").open()))
    assert list(rows[0]) == ["#", "vertices", "n", "m", "degree"] and len(rows) == 12


def test_classify_config_errors(capsys, tmp_path, monkeypatch):
    code, _, err = run(capsys, "classify", "--basket", "family:1/5", "--mult-max", "0",
                       "--out", str(tmp_path))
    assert code == 3 and json.loads(err)["error"] == "ConfigError"
    monkeypatch.setenv("FANO_THREADS", "many")
    code, _, _ = run(capsys, "classify", "--basket", "1/5(1,1)", "--n-max", "2",
                     "--out", str(tmp_path))
    assert code == 3
    code, _, err = run(capsys, "classify", "--basket", "1/4(1,1)", "--out", str(tmp_path))
    assert code == 2 and json.loads(err)["error"] == "BasketNotResidual"


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--only", "1,2,3")
    assert code == 0
    assert [l[:6] for l in out.splitlines()] == ["[PASS]"] * 3
