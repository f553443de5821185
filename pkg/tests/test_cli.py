import json

import pytest

from grapair import io
from grapair import railroad as rr
from grapair.cli import EXHAUSTED, NEGATIVE, OK, USAGE, main
from grapair.conditions import graph_satisfies


def fx(name):
    return str(rr.fixture_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", fx("tworail.json"))
    assert code == OK and out == {"valid": True}
    bad = tmp_path / "g.json"
    bad.write_text(json.dumps({"nodes": [{"id": "1", "label": "a"}, {"id": "1", "label": "b"}], "edges": []}))
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == NEGATIVE and out["valid"] is False and out["violation"]["id"] == "1"


def test_check(capsys):
    code, out, _ = run(capsys, "check", "--graph", fx("tworail.json"), "--constraint", fx("notwo.json"))
    assert code == NEGATIVE and out["satisfied"] is False
    code, out, _ = run(capsys, "check", "--graph", fx("path3.json"), "--constraint", fx("notwo.json"))
    assert code == OK and out["satisfied"] is True


def test_anf(capsys, tmp_path):
    code, out, _ = run(capsys, "anf", "--condition", fx("every_out.json"))
    assert code == OK and out["class"]["proper"] is True
    nl = tmp_path / "nl.json"
    one = {"nodes": [{"id": "1", "label": "a"}], "edges": []}
    sub = {"kind": "exists", "mor": {"dom": {"nodes": [], "edges": []}, "cod": one}}
    nl.write_text(json.dumps({"kind": "and", "subs": [sub, sub]}))
    code, out, _ = run(capsys, "anf", "--condition", str(nl))
    assert code == NEGATIVE and out == {"error": "non-linear"}


def test_shift(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"dom": {"nodes": [], "edges": []},
                             "cod": io.graph_to_json(rr.line(2))}))
    code, out, _ = run(capsys, "shift", "--morphism", str(m), "--condition", fx("notwo.json"))
    assert code == OK and out["condition"]["ctx"] == io.graph_to_json(rr.line(2))


def test_synthesize(capsys):
    code, out, _ = run(capsys, "synthesize", "--constraint", fx("every_out.json"), "--variant", "v1")
    assert code == OK and out["listing"].endswith("↓")
    assert io.program_from_json(out["program"]) is not None


def test_apply(capsys, tmp_path):
    prog = tmp_path / "p.json"
    prog.write_text(json.dumps({"kind": "iterate", "body": {
        "kind": "rule", "rule": io.plain_rule_to_json(rr.delete_rule())}}))
    code, out, _ = run(capsys, "apply", "--program", str(prog), "--graph", fx("tworail.json"))
    assert code == OK and len(out["outcomes"]) == 1
    g = io.graph_from_json(out["outcomes"][0]["graph"])
    assert not [e for e in g.edges if g.elabel(e) == rr.TRAIN]
    assert out["outcomes"][0]["trace"] == ["Delete", "Delete"]


def test_compat(capsys):
    code, out, err = run(capsys, "compat", "--rules", fx("delete-only.json"), "--constraint", fx("notwo.json"))
    assert code == OK and out["compatible"] is True and "certified" in err
    code, out, err = run(capsys, "compat", "--rules", fx("moveDelete.json"), "--constraint", fx("station.json"))
    assert code == NEGATIVE and out["rules"][0]["label_gap"] == [["create", "node", "station"]]
    assert "label-gap" in err


def test_repair_rule_based(capsys, tmp_path):
    code, out, _ = run(capsys, "repair", "--constraint", fx("notwo.json"), "--rules", fx("moveDelete.json"),
                       "--graph", fx("tworail.json"), "--one", "--seed", "7")
    assert code == OK
    (row,) = out["outcomes"]
    assert row["satisfies"] and row["preservation"]["bound_holds"] in (True, False)
    # the output re-passes check
    g = tmp_path / "out.json"
    g.write_text(json.dumps(row["graph"]))
    code, res, _ = run(capsys, "check", "--graph", str(g), "--constraint", fx("notwo.json"))
    assert code == OK and res["satisfied"]


def test_repair_incompatible(capsys):
    code, out, _ = run(capsys, "repair", "--constraint", fx("station.json"), "--rules", fx("moveDelete.json"),
                       "--graph", fx("tworail.json"))
    assert code == NEGATIVE and out["error"] == "incompatible"


def test_repair_all_and_exports(capsys, tmp_path):
    code, out, _ = run(capsys, "repair", "--constraint", fx("every_out.json"), "--graph", fx("path3.json"),
                       "--dot", str(tmp_path / "dot"), "--figures", str(tmp_path / "fig"))
    assert code == OK and out["outcomes"]
    c = io.condition_from_json(io.load_json(fx("every_out.json")))
    for row in out["outcomes"]:
        assert graph_satisfies(io.graph_from_json(row["graph"]), c)
        assert row["preservation"]["bound_holds"]
    from pathlib import Path

    assert out["dot"] and all(Path(p).is_file() for p in out["dot"])
    assert out["figures"] and all(Path(p).read_bytes()[:4] == b"\x89PNG" for p in out["figures"])


def test_repair_exhausted(capsys):
    code, out, err = run(capsys, "repair", "--constraint", fx("every_out.json"), "--graph", fx("path3.json"),
                         "--variant", "v1", "--budget", "50")
    assert code == EXHAUSTED and out["exhausted"] and "budget" in err


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("GRAPAIR_BUDGET", "steps=5")
    code, _, _ = run(capsys, "repair", "--constraint", fx("every_out.json"), "--graph", fx("path3.json"),
                     "--variant", "v1")
    assert code == EXHAUSTED


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["check", "--graph", "nope.json", "--constraint", "nope.json"],
    ["apply", "--program", "x", "--graph", "y", "--one", "--all"],
    ["repair", "--constraint", "c", "--graph", "g", "--budget", "speed=1"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == USAGE


def test_constraint_must_be_closed(capsys, tmp_path):
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"ctx": io.graph_to_json(rr.line(1)), "kind": "true"}))
    assert main(["check", "--graph", fx("path3.json"), "--constraint", str(c)]) == USAGE


def test_help(capsys):
    assert main(["--help"]) == OK
    assert "repair" in capsys.readouterr().out
