import hashlib
import json

import pytest
from click.testing import CliRunner

from graded_tannakian import builder
from graded_tannakian.cli import canonical, main


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def machine(*args):
    r = run(*args, "--format", "machine")
    return r, json.loads(r.output)


def test_report_hash_covers_the_body():
    r, rep = machine("hom", "rep-z2", "s", "ss")
    assert r.exit_code == 0
    body = {k: v for k, v in rep.items() if k != "hash"}
    assert rep["hash"] == hashlib.sha256(canonical(body).encode()).hexdigest()
    # s is the sign character and s⊗s the trivial one: no equivariant map
    assert rep["results"]["certified"] == 0 and rep["results"]["meets"]


def test_validate_small_dataset():
    r = run("validate", "point")
    assert r.exit_code == 0, r.output
    assert "status: pass" in r.output


def test_validate_names_the_bad_complex(tmp_path):
    doc = builder.point()
    ident = {"identity": "1"}
    doc["complexes"]["loop"] = {"terms": {"0": "1", "1": "1", "2": "1"},
                                "differentials": {"1": ident, "2": ident}}
    path = tmp_path / "loop.json"
    path.write_text(json.dumps(doc))
    r = run("validate", path)
    assert r.exit_code == 1
    assert "loop" in r.output and "degree 2" in r.output


def test_validate_names_the_bad_morphism(tmp_path):
    doc = builder.graded_line()
    name = "bent"
    doc.setdefault("morphisms", {})[name] = {"src": "L", "tgt": "L", "map": {"2": [[1, 1]]}}
    path = tmp_path / "shape.json"
    path.write_text(json.dumps(doc))
    r, rep = machine("validate", path)
    assert r.exit_code == 1
    bad = [row for row in rep["results"]["rows"] if row["ok"] is False]
    assert [row["subject"] for row in bad] == [name]


@pytest.mark.parametrize("args", [
    ("hom", "curve", "X", "nope"),
    ("split", "curve", "nope"),
    ("check", "point", "--suite", "nope"),
    ("fiber", "no-such-dataset", "X"),
])
def test_input_errors_exit_2(args):
    r = run(*args)
    assert r.exit_code == 2


def test_malformed_json_exits_2(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{")
    assert run("validate", path).exit_code == 2


def test_split_failure_reports_stage():
    r, rep = machine("split", "unipotent-motive", "extension", "--method", "semisimple")
    assert r.exit_code == 1
    assert rep["results"]["error"]["stage"] == "X_0 section"
    assert rep["status"] == "fail"


def test_split_and_replay(tmp_path):
    r, rep = machine("split", "curve", "curve")
    assert r.exit_code == 0
    assert [p["index"] for p in rep["results"]["projectors"]] == [0, 1, 2]
    path = tmp_path / "split.json"
    path.write_text(r.output)
    r2, back = machine("replay", "curve", path)
    assert r2.exit_code == 0
    assert back["results"]["hash_ok"]
    assert all(ok for _, ok in back["results"]["entries"])


def test_replay_catches_tampering(tmp_path):
    r, rep = machine("hom", "curve", "X", "XX")
    assert rep["certificates"]
    path = tmp_path / "hom.json"
    path.write_text(r.output)
    assert run("replay", "curve", path).exit_code == 0

    entry = rep["certificates"][-1]["matrix"]
    key = next(iter(entry))
    entry[key][0][0] += 1
    path.write_text(json.dumps(rep))
    r2, back = machine("replay", "curve", path)
    assert r2.exit_code == 1
    assert not back["results"]["hash_ok"]
    assert [ok for _, ok in back["results"]["entries"]].count(False) == 1


def test_check_is_byte_deterministic():
    a = run("check", "graded-line", "--format", "machine")
    b = run("check", "graded-line", "--format", "machine")
    assert a.exit_code == 0
    assert a.output == b.output


def test_fiber_dims():
    r, rep = machine("fiber", "curve", "X", "shifted")
    assert rep["results"]["X"] == {"0,0": 1, "0,1": 2, "0,2": 1}
    assert rep["results"]["shifted"] == {"1,0": 1, "1,1": 2, "1,2": 1}


def test_twist_on_the_curve():
    r, rep = machine("twist", "curve", "curve")
    assert r.exit_code == 0
    assert len(rep["results"]["pairs"]) == 9
    assert all(rep["results"]["triples"].values())
