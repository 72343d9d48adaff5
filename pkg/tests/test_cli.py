"""Command-line interface: round trips, exit codes, determinism."""

import json
import math

import numpy as np
import pytest

from oscillab.cli import main, parse_schedule
from oscillab.fixtures import step
from oscillab.grid import read_grid, write_grid
from oscillab.measure import distribution, lebesgue_norm, lorentz_norm


@pytest.fixture()
def step_file(tmp_path):
    path = tmp_path / "step.csv"
    write_grid(step(256, a=1.5, x0=0.0), str(path))
    return str(path)


def test_parse_schedule():
    sched = parse_schedule("0.2:0.01:geometric:7")
    assert len(sched) == 7
    assert sched[0] == pytest.approx(0.2)
    assert sched[-1] == pytest.approx(0.01)
    ratios = sched[1:] / sched[:-1]
    assert np.allclose(ratios, ratios[0])
    with pytest.raises(ValueError):
        parse_schedule("0.01:0.2:geometric")
    with pytest.raises(ValueError):
        parse_schedule("0.2:0.01:linear")


def test_fixture_and_norm_round_trip(tmp_path, capsys):
    grid_path = str(tmp_path / "u.csv")
    assert main(["fixture", "--kind", "step", "--n", "128",
                 "--params", "a=2.0,x0=0.25", "--out", grid_path]) == 0
    u = read_grid(grid_path)
    assert main(["norm", "--input", grid_path, "--p", "2", "--json", "-"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["lhs"] == pytest.approx(lebesgue_norm(u, 2.0), rel=1e-12)


def test_norm_lorentz_qq_matches_lebesgue_via_cli(step_file, capsys):
    assert main(["norm", "--input", step_file, "--p", "2", "--json", "-"]) == 0
    plain = json.loads(capsys.readouterr().out)[0]["lhs"]
    assert main(["norm", "--input", step_file, "--p", "2", "--gamma", "2", "--json", "-"]) == 0
    lorentz = json.loads(capsys.readouterr().out)[0]["lhs"]
    assert lorentz == pytest.approx(plain, rel=1e-10)


def test_bmo_subcommand(step_file, capsys):
    assert main(["bmo", "--input", step_file, "--json", "-"]) == 0
    payload = json.loads(capsys.readouterr().out)[0]
    assert payload["lhs"] == pytest.approx(0.75, rel=1e-12)


def test_missing_file_exits_two(capsys):
    assert main(["norm", "--input", "/no/such/file.csv", "--p", "2"]) == 2
    assert "error" in capsys.readouterr().err


def test_malformed_grid_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("dim,1\ncells,4\norigin,0.0\nspacing,0.5\n1.0,zap,3.0,4.0\n")
    assert main(["norm", "--input", str(path), "--p", "2"]) == 2
    assert "line 5" in capsys.readouterr().err


def test_bad_schedule_exits_two(step_file, capsys):
    code = main(["jump-detect", "--input", step_file, "--eps", "nope", "--n", "1"])
    assert code == 2
    assert "schedule" in capsys.readouterr().err


def test_jump_detect_against_shape(step_file, tmp_path, capsys):
    csv_out = str(tmp_path / "curve.csv")
    code = main([
        "jump-detect", "--input", step_file, "--mode", "directional", "--n", "1",
        "--q", "2", "--eps", "0.3:0.05:geometric:8",
        "--shape", "step1d:a=1.5,x0=0.0", "--out", csv_out, "--json", "-",
    ])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)[0]
    assert payload["rhs"] == pytest.approx(2.25)
    rows = open(csv_out).read().strip().splitlines()
    assert rows[0] == "eps,energy"
    assert len(rows) == 9


def test_jump_detect_failed_tolerance_exits_one(step_file, capsys):
    code = main([
        "jump-detect", "--input", step_file, "--mode", "directional", "--n", "1",
        "--q", "2", "--eps", "0.3:0.05:geometric:8",
        "--shape", "step1d:a=1.5,x0=0.0", "--tolerance", "1e-9",
    ])
    assert code == 1
    assert "check failed" in capsys.readouterr().err


def test_reports_byte_identical_across_thread_counts(step_file, tmp_path):
    args = ["jump-detect", "--input", step_file, "--mode", "directional", "--n", "1",
            "--q", "2", "--eps", "0.3:0.05:geometric:6"]
    out1, out2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(args + ["--threads", "1", "--json", out1]) == 0
    assert main(args + ["--threads", "auto", "--json", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_threads_env_override(step_file, tmp_path, monkeypatch):
    args = ["jump-detect", "--input", step_file, "--mode", "directional", "--n", "1",
            "--q", "2", "--eps", "0.3:0.05:geometric:6"]
    out1, out2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(args + ["--json", out1]) == 0
    monkeypatch.setenv("OSCILLAB_THREADS", "auto")
    assert main(args + ["--json", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_interp_check_exact_suite(capsys):
    assert main(["interp-check", "--suite", "exact", "--family", "step",
                 "--resolution", "64", "--json", "-"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert all(r["pass"] for r in payload)


def test_kernel_check(capsys):
    assert main(["kernel-check", "--kernel", "gaussian_radial", "--dim", "2",
                 "--json", "-"]) == 0
    payload = json.loads(capsys.readouterr().out)[0]
    assert payload["lhs"] <= 1e-6


def test_besov_and_bv_subcommands(step_file, capsys):
    assert main(["besov", "--input", step_file, "--s", "0.5", "--q", "2",
                 "--json", "-"]) == 0
    sup_val = json.loads(capsys.readouterr().out)[0]["lhs"]
    assert sup_val > 0
    assert main(["bv", "--input", step_file, "--json", "-"]) == 0
    bv_val = json.loads(capsys.readouterr().out)[0]["lhs"]
    assert bv_val == pytest.approx(3.0, rel=1e-12)  # both jumps of the 1.5-step


def test_seed_recorded_in_reports(step_file, capsys):
    assert main(["norm", "--input", step_file, "--p", "1", "--seed", "99",
                 "--json", "-"]) == 0
    payload = json.loads(capsys.readouterr().out)[0]
    assert payload["params"]["seed"] == 99


def test_reports_carry_version_and_hash(step_file, capsys):
    assert main(["norm", "--input", step_file, "--p", "1", "--json", "-"]) == 0
    payload = json.loads(capsys.readouterr().out)[0]
    assert payload["version"]
    assert len(payload["config_hash"]) == 16
    assert "tolerance" in payload
