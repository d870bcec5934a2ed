import json
import subprocess
import sys

from cyclic_slope.cli import json_path, main, report_format
from cyclic_slope.core import format_rational, parse_rational

TRIPLE = {
    "n": 2,
    "g": 2,
    "M": "2",
    "germs": [
        {
            "label": "p",
            "nodes": [
                {"id": 1, "parent": None, "mult": 3, "satellite_with": None},
                {"id": 2, "parent": 1, "mult": 2, "satellite_with": None},
                {"id": 3, "parent": 1, "mult": 2, "satellite_with": None},
                {"id": 4, "parent": 1, "mult": 2, "satellite_with": None},
            ],
        }
    ],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--g", "9", "--h", "0", "--n", "4")
    rep = json.loads(out)
    assert code == 0
    assert rep["lambda_lower"] == "48/11" and rep["lambda_upper"] == "32/5"


def test_bounds_table(capsys):
    code, out, _ = run(capsys, "--table", "bounds", "--g", "9", "--n", "4")
    rows = dict(line.split(None, 1) for line in out.strip().splitlines())
    assert code == 0 and rows["lambda_lower"] == "48/11" and rows["lambda_upper"] == "32/5"


def test_bounds_without_upper(capsys):
    code, out, _ = run(capsys, "bounds", "--g", "7", "--n", "3")
    rep = json.loads(out)
    assert code == 0 and rep["lambda_upper"] is None and "n >= 4" in rep["upper_note"]


def test_bounds_bad_genus(capsys):
    code, _, err = run(capsys, "bounds", "--g", "4", "--n", "5")
    assert code == 1 and "error" in err


def test_sharp_example(capsys):
    code, out, _ = run(capsys, "sharp-example", "--n", "2", "--h", "1", "--N", "3", "--M", "4")
    rep = json.loads(out)
    assert code == 0
    assert (rep["Kf2"], rep["chif"], rep["slope"], rep["lambda"]) == ("48", "12", "4", "4")
    assert rep["certificate"]["verdict"] is True


def test_validate_empty_model(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", write(tmp_path, {"n": 2, "g": 2, "M": "1", "germs": [{"nodes": []}]}))
    assert code == 0 and json.loads(out) == {"valid": True, "violations": []}


def test_validate_reports_rule(capsys, tmp_path):
    doc = {"n": 3, "r": 6, "nodes": [{"id": 1, "parent": None, "mult": 2}]}
    code, out, _ = run(capsys, "validate", write(tmp_path, doc))
    rep = json.loads(out)
    assert code == 1 and rep["violations"][0]["rule"] == "ModN" and rep["violations"][0]["node"] == 1


def test_schema_error_has_json_path(capsys, tmp_path):
    doc = json.loads(json.dumps(TRIPLE))
    doc["germs"][0]["nodes"][0]["mult"] = "three"
    code, _, err = run(capsys, "invariants", write(tmp_path, doc))
    assert code == 1 and "$.germs[0].nodes[0].mult" in err


def test_malformed_json(capsys, tmp_path):
    code, _, err = run(capsys, "invariants", write(tmp_path, "{not json"))
    assert code == 1 and "line 1" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "invariants", str(tmp_path / "nope.json"))
    assert code == 1 and "cannot read" in err


def test_invariants_triple_point(capsys, tmp_path):
    code, out, _ = run(capsys, "invariants", write(tmp_path, TRIPLE))
    rep = json.loads(out)
    assert code == 0
    assert (rep["Kf2"], rep["chif"], rep["ef"], rep["sign_total"]) == ("4", "2", "20", "-12")
    assert rep["generic_alpha0"] == 14
    # round trip: every rational string re-parses to the same string
    for key in ("Kf2", "chif", "ef", "slope", "lambda", "M", "sign_total"):
        assert format_rational(parse_rational(rep[key])) == rep[key]
    assert all(format_rational(parse_rational(v)) == v for v in rep["sigma_per_fiber"].values())


def test_invariants_table(capsys, tmp_path):
    code, out, _ = run(capsys, "--table", "invariants", write(tmp_path, TRIPLE))
    rows = dict(line.split(None, 1) for line in out.strip().splitlines())
    assert code == 0
    assert (rows["Kf2"], rows["chif"], rows["ef"], rows["sign_total"]) == ("4", "2", "20", "-12")
    assert rows["sigma_per_fiber.p"] == "-18/5"


def test_inconsistent_model(capsys, tmp_path):
    doc = dict(TRIPLE, generic_alpha0=3)
    code, _, err = run(capsys, "invariants", write(tmp_path, doc))
    assert code == 1 and "generic_alpha0" in err


def test_resolve_and_ndjson(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--n", "2", "--r", "6", "--max-nodes", "1", "--max-mult", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    code, out, _ = run(capsys, "resolve", write(tmp_path, out, "g.ndjson"))
    reps = json.loads(out)
    assert code == 0 and [r["euler_local"] for r in reps] == [0, 2]


def test_resolve_triple_point(capsys, tmp_path):
    doc = dict(TRIPLE["germs"][0], n=2, r=6)
    del doc["label"]
    code, out, _ = run(capsys, "resolve", write(tmp_path, doc))
    rep = json.loads(out)
    assert code == 0
    assert rep["alpha"] == {"1": 4} and rep["j"] == {"2": 1} and rep["euler_local"] == 6
    assert rep["families"][0]["curves"][0]["self_intersection"] == -4


def test_resolve_needs_n_and_r(capsys, tmp_path):
    code, _, err = run(capsys, "resolve", write(tmp_path, {"nodes": []}))
    assert code == 1 and "'n' and 'r'" in err


def test_identity_violation_exit_code(capsys, tmp_path, monkeypatch):
    import cyclic_slope.invariants as inv
    from fractions import Fraction

    monkeypatch.setattr(inv, "horikawa_index", lambda n, r, idx: Fraction(1))
    code, _, err = run(capsys, "invariants", write(tmp_path, TRIPLE))
    assert code == 2 and "IDENTITY VIOLATION" in err


def test_verify_suite_small(capsys):
    code, out, _ = run(capsys, "verify-suite", "--n", "3", "--r", "6", "--budget", "2")
    assert code == 0
    assert [line.split()[0] for line in out.strip().splitlines()] == ["PASS", "PASS", "PASS"]


def test_report_format():
    assert report_format({"a": "0", "b": {"c": "0"}}) == "a    0\nb.c  0"
    assert report_format({}) == ""
    from fractions import Fraction

    assert report_format({"x": Fraction(-18, 5), "big": 2**60}) == f"x    -18/5\nbig  {2**60}"


def test_big_integers_become_strings(capsys):
    from cyclic_slope.cli import _jsonable

    assert _jsonable({"v": 2**60, "w": 5}) == {"v": str(2**60), "w": 5}


def test_json_path():
    assert json_path(["germs", 0, "nodes", 2, "mult"]) == "$.germs[0].nodes[2].mult"
    assert json_path([]) == "$"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cyclic_slope.cli", "bounds", "--g", "2", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["lambda_lower"] == "2"
