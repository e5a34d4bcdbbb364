import json
import subprocess
import sys

import numpy as np
import pytest

from willmore_tori import cli, verification
from willmore_tori.formats import write_curve
from willmore_tori.sphere_curves import great_circle, small_circle
from willmore_tori.verification import CriterionResult

EJIRI_W = 2 * np.pi**2 * np.sqrt(3)


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "willmore_tori.cli", *args], capture_output=True, text=True, cwd=cwd)


def test_energy_ejiri_subprocess():
    r = run("energy", "--surface", "ejiri", "--grid", "64")
    assert r.returncode == 0, r.stderr
    d = json.loads(r.stdout)
    assert d["value"] == pytest.approx(EJIRI_W, rel=1e-12)
    assert d["method"] == "tensor_density" and d["grid"] == [64, 64]


def test_energy_methods_agree(capsys):
    vals = {}
    for m in ("tensor", "parametric", "conformal"):
        assert cli.main(["energy", "--surface", "ejiri", "--grid", "64", "--method", m]) == 0
        vals[m] = json.loads(capsys.readouterr().out)["value"]
    assert max(vals.values()) - min(vals.values()) < 1e-9


def test_energy_csv(capsys):
    assert cli.main(["energy", "--surface", "inf", "--param", "0.5", "--grid", "64", "--emit", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "surface,value,grid,method,estimated_error"
    assert float(lines[1].split(",")[1]) == pytest.approx(2 * np.pi**2 * 1.25, rel=1e-12)


def test_classify_from_curve_files(tmp_path, capsys):
    write_curve(small_circle(1.2, 3, 128), tmp_path / "c.crv")
    write_curve(great_circle(2, 128), tmp_path / "g.crv")
    write_curve(small_circle(np.sqrt(2), 3, 128), tmp_path / "e.crv")
    assert cli.main(["classify", "--left", str(tmp_path / "c.crv"), "--right", str(tmp_path / "g.crv")]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["verdict"] == "constrained_willmore"
    assert d["fitted_a0"] == pytest.approx(0.72, abs=1e-9)
    assert cli.main(["classify", "--left", str(tmp_path / "g.crv"), "--right", str(tmp_path / "e.crv")]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "willmore"


def test_input_errors_exit_one(tmp_path, capsys):
    cases = [
        ["energy", "--surface", "ejiri", "--grid", "8"],
        ["energy", "--surface", "inf", "--param", "2"],
        ["energy", "--surface", "nope"],
        ["energy"],
        ["energy", "--left", "ejiri"],
        ["energy", "--torus", str(tmp_path / "missing.json")],
        ["classify", "--left", "small_circle:x", "--right", "great_circle"],
        ["sweep", "--family", "inf", "--param-range", "0:1"],
        ["verify", "--only", "9"],
        ["bogus"],
        [],
    ]
    for argv in cases:
        assert cli.main(argv) == 1, argv
        err = capsys.readouterr().err
        assert err.startswith("code: "), (argv, err)


def test_error_code_names(capsys):
    assert cli.main(["energy", "--surface", "tilde", "--param", "1.5"]) == 1
    assert capsys.readouterr().err.startswith("code: out_of_range:")


def test_verify_failure_exits_two(monkeypatch, capsys):
    bad = lambda: CriterionResult(1, "forced", False, "always fails", {})
    monkeypatch.setattr(verification, "CRITERIA", (bad,))
    assert cli.main(["verify"]) == 2
    assert "[FAIL]" in capsys.readouterr().out


def test_verify_only_subprocess():
    r = run("verify", "--only", "1,2", "--emit", "json")
    assert r.returncode == 0, r.stderr
    d = json.loads(r.stdout)
    assert [x["number"] for x in d] == [1, 2] and all(x["passed"] for x in d)
    assert r.stderr.count("[PASS]") == 2


def test_outputs_are_deterministic(tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"o{k}.json"
        assert cli.main(["probe", "--family", "tilde", "--param", "0.5", "--grid", "64", "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_save_torus_round_trip(tmp_path, capsys):
    desc = tmp_path / "t.json"
    assert cli.main(["energy", "--left", "homogeneous:0.6,0.8,2", "--right", "ejiri", "--save-torus", str(desc)]) == 0
    first = json.loads(capsys.readouterr().out)["value"]
    assert cli.main(["energy", "--torus", str(desc)]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(first, rel=1e-12)


def test_sweep(capsys):
    assert cli.main(["sweep", "--family", "inf", "--param-range", "0.25:1:4", "--grid", "64"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "param,value,reference,abs_err" and len(lines) == 5
    assert all(float(ln.split(",")[3]) < 1e-7 for ln in lines[1:])


def test_probe(capsys):
    assert cli.main(["probe", "--family", "scaled", "--param", "1"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["stencil"] == "backward"
    assert d["first_derivative"] == pytest.approx(4 * np.pi**2 / np.sqrt(3), rel=1e-6)


def test_elastica_profile_and_shoot(tmp_path, capsys):
    assert cli.main(["elastica", "--a0", "1.5", "--k1", "0.4", "--length", "1", "--nodes", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "s,k1,k1p,k2" and len(lines) == 6
    crv = tmp_path / "e.crv"
    argv = ["elastica", "--a0", "1", "--k1", "1.424", "--length", "3.68", "--shoot", "--emit", "json",
            "--save-curve", str(crv)]
    assert cli.main(argv) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["k1_0"] == pytest.approx(np.sqrt(2), abs=1e-7)
    assert d["length"] == pytest.approx(2 * np.pi / np.sqrt(3), abs=1e-7)
    assert crv.exists()
