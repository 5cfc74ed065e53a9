from __future__ import annotations

import json

import pytest

from prehom.cli import main

D_N8 = "1,1,0,1,0,1,1,0,1,1,1"
D_T15 = "1,0,1,1,0,1,1,1,1,0,1,1,1,0,1"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    return payload


def test_classify(capsys):
    p = run_json(capsys, "classify", "--a", "2,3,2,5,1")
    assert p["dense"] is True and p["e"] == 1 and p["t"] == 17
    p = run_json(capsys, "classify", "--a", "1,2,2,1")
    assert p["dense"] is False and p["codim"] == 1
    p = run_json(capsys, "classify", "--d", "1")
    assert p["dense"] is True and p["codim"] == 0


def test_bad_input_exit_code(capsys):
    code, _, err = run(capsys, "classify", "--d", "1,0,0,1")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "ext", "--J", "1,2", "--K", "3", "--t", "4")
    assert code == 2
    code, _, _ = run(capsys, "classify")
    assert code == 2


def test_represent_plain(capsys):
    code, out, _ = run(capsys, "represent", "--d", D_N8, "--format", "text")
    assert code == 0
    assert "f[2,4] + f[4,6] + f[1,7] + f[7,9] + f[6,9] + f[7,10] + f[9,11]" in out
    assert "orbit codim = 0" in out


def test_represent_plain_unsupported(capsys):
    code, _, err = run(capsys, "represent", "--a", "1,2,2,1")
    assert code == 3 and "family" in err


def test_represent_family(capsys):
    p = run_json(capsys, "represent", "--d", D_T15, "--variant", "family")
    text = json.dumps(p)
    assert "x_2*f[8,11]" in text


def test_represent_minimal(capsys):
    p = run_json(capsys, "represent", "--a", "1,2,1", "--variant", "minimal")
    assert p["is_minimal"] is True


def test_ext(capsys):
    p = run_json(capsys, "ext", "--J", "1,3,7", "--K", "2,4,6", "--t", "7")
    assert p["hom_formula"] == 2 and p["hom_solver"] == 2
    p = run_json(capsys, "ext", "--J", "3", "--K", "3", "--t", "5")
    assert p["hom_formula"] == 1 and p["ext1_JK"] == 0
    p = run_json(capsys, "ext", "--d", D_T15)
    assert p["ext1_JK"] == 2 and p["ext1_KJ"] == 0


def test_enumerate(capsys):
    p = run_json(capsys, "enumerate", "--d", "1,1,0,1", "--q", "2")
    assert p["orbits"] == 3 and p["max_class"]["match"] is True
    p = run_json(capsys, "enumerate", "--d", "1,1", "--q", "3")
    assert p["orbits"] == 1
    p = run_json(capsys, "enumerate", "--d", "1,0,1", "--q", "2")
    assert p["max_class"]["anomaly"] is True and p["max_class"]["match"] is False


def test_enumerate_tsv(capsys):
    code, out, _ = run(capsys, "enumerate", "--d", "1,1,0,1", "--q", "2", "--format", "tsv")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0].split("\t")[:2] == ["canonical_key", "size"]
    assert len(lines) == 4


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "enumerate", "--d", "1,1,1,1,1,1", "--q", "3", "--budget", "1000")
    assert code == 4 and "budget" in err


def test_finite(capsys):
    code, out, _ = run(capsys, "finite", "--n-max", "3", "--format", "text")
    assert code == 0 and out.startswith("PASS")
    assert "anomaly d=1,0,1 q=2" in out


def test_verify_and_figures(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--suite", "ext-codim", "--t-max", "6", "--samples",
                       "20", "--seed", "7", "--figures", str(tmp_path), "--format", "text")
    assert code == 0 and out.startswith("PASS A2")
    assert (tmp_path / "A2.png").stat().st_size > 0


def test_unknown_suite(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "nope")
    assert code == 2


def test_output_is_deterministic(capsys):
    argv = ["verify", "--suite", "A2", "--t-max", "6", "--samples", "15", "--seed", "3"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    other = run(capsys, *argv[:-1], "4")
    assert json.loads(other[1])["suites"][0]["suite"] == "A2"


def test_global_flags_after_subcommand(capsys):
    a = run(capsys, "--format", "text", "classify", "--a", "1,2,2,1")
    b = run(capsys, "classify", "--a", "1,2,2,1", "--format", "text")
    assert a == b and a[0] == 0
