import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from tanakakit.cli import main

DEMOS = Path(__file__).resolve().parent.parent / "demos"
E13 = str(DEMOS / "e13.tk")
HEIS = str(DEMOS / "heisenberg.tk")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_e13_json(capsys):
    code, out, _ = run(capsys, "analyze", E13, "--json", "-")
    assert code == 0
    data = json.loads(out)
    assert data["tanaka"]["dims"] == [3, 2, 0]
    assert data["theorem1_bound"] == 11
    assert data["finiteness_verdict"] == "finite_char_variety"


def test_analyze_text_summary(capsys):
    code, out, _ = run(capsys, "analyze", E13)
    assert code == 0
    assert "(2, 1, 2, 1)" in out and "finite_char_variety" in out


def test_analyze_heisenberg(capsys):
    code, out, _ = run(capsys, "analyze", HEIS, "--max-degree", "4", "--json", "-")
    data = json.loads(out)
    assert code == 0
    assert data["tanaka"]["terminated"] is False
    assert data["finiteness_verdict"] == "inconclusive"
    assert data["char_variety"]["verdict"] == "nonempty"


def test_json_to_file_and_quiet(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "analyze", E13, "--json", str(target), "--quiet")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["h0_dim"] == 0


def test_rank_one_frame_exit_3(capsys, tmp_path):
    f = tmp_path / "r1.tk"
    f.write_text("coords x y\nfield U = d/dx\ndistribution D = [U]\n")
    code, _, err = run(capsys, "analyze", str(f))
    assert code == 3
    assert "bracket-generating" in err


def test_parse_error_exit_2(capsys, tmp_path):
    f = tmp_path / "bad.tk"
    f.write_text("coords x y\nfield U = d/dq\ndistribution D = [U]\n")
    code, _, err = run(capsys, "analyze", str(f))
    assert code == 2
    assert "line 2" in err


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "analyze", str(tmp_path / "none.tk"))[0] == 2


def test_bad_point_exit_2(capsys):
    assert run(capsys, "analyze", E13, "--point", "1,2")[0] == 2


def test_point_option(capsys):
    code, out, _ = run(capsys, "prolong", E13, "--point", "1 2 3 1/2 -1 4", "--json", "-")
    assert code == 0
    data = json.loads(out)
    assert data["point"]["z1"] == "1/2"
    assert data["tanaka"]["total"] == 11


@pytest.mark.parametrize("n,k,bound", [("2", "3", 14), ("3", "2", 21)])
def test_freedim(capsys, n, k, bound):
    code, out, _ = run(capsys, "freedim", n, k, "--json", "-")
    assert code == 0
    assert json.loads(out)["symmetry_bound"] == bound


def test_freedim_contact(capsys):
    code, out, _ = run(capsys, "freedim", "2", "2")
    assert "infinite (contact)" in out


@pytest.mark.parametrize("field,sym,degree", [("S2", True, 1), ("R", True, 0), ("d/dz3", False, None),
                                              ("Z0", True, -4)])
def test_check_sym(capsys, field, sym, degree):
    code, out, _ = run(capsys, "check-sym", E13, field, "--json", "-")
    assert code == 0
    data = json.loads(out)
    assert data["symmetry"] is sym
    assert data.get("degree") == degree


def test_fintype_model_and_growth(capsys):
    code, out, _ = run(capsys, "fintype", HEIS, "--json", "-")
    data = json.loads(out)
    assert data["h0_dim"] == 3 and data["char_variety"]["verdict"] == "nonempty"
    code, out, _ = run(capsys, "fintype", "--growth", "2", "1", "2")
    assert "finite" in out
    code, out, _ = run(capsys, "fintype", "--growth", "3,2")
    assert "inconclusive" in out


def test_budget_is_recorded_in_config(capsys):
    code, out, _ = run(capsys, "fintype", E13, "--groebner-budget", "7", "--json", "-")
    assert code == 0
    assert json.loads(out)["config"]["groebner_budget"] == 7


@pytest.mark.parametrize("argv,ncoords,rank", [(["cartan-jet", "3"], 5, 2), (["monge", "1", "3"], 6, 2),
                                               (["mixed-jet", "1", "2"], 6, 3)])
def test_model_command(capsys, argv, ncoords, rank):
    from tanakakit.modelio import parse_model
    code, out, _ = run(capsys, "model", *argv)
    assert code == 0
    m = parse_model(out)
    assert m.dim == ncoords and len(m.frame) == rank


def test_model_unknown_kind(capsys):
    assert run(capsys, "model", "sphere")[0] == 2
    assert run(capsys, "model", "monge", "1")[0] == 2


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TANAKA_SEED", "17")
    code, out, _ = run(capsys, "analyze", E13, "--json", "-")
    assert json.loads(out)["seed"] == 17
    code, out, _ = run(capsys, "analyze", E13, "--json", "-", "--seed", "3")
    assert json.loads(out)["seed"] == 3


def test_console_script_runs_and_is_deterministic(tmp_path):
    env = dict(os.environ, TANAKA_SEED="5")
    cmd = [sys.executable, "-m", "tanakakit.cli", "analyze", E13, "--json", "-"]
    a = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    assert a == b and json.loads(a)["seed"] == 5
