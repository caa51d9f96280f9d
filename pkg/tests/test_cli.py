import json

import numpy as np
import pytest

from berryheat.cli import main

CONFIG = """
n_bodies = 2
bath_temperature = 300.0
initial_temperatures = 400.0, 300.0
t_end = 2.0
dt = 0.001

pair 1 2 { mean = 1.0, amplitude = 0.5, period = 2.0 }
pair 2 1 { mean = 0.8, amplitude = 0.4, period = 2.0, phase = 1.5707963267948966 }
bath 1 { mean = 0.5, amplitude = 0.1, period = 1.0 }
bath 2 { mean = 0.3, amplitude = 0.1, period = 1.0, phase = 1.5707963267948966 }
"""


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh]
    return header, rows


@pytest.fixture()
def config_file(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text(CONFIG)
    return path


def test_simulate_writes_trajectories_and_report(tmp_path, config_file):
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(config_file), "--out", str(out)]) == 0
    tag = [p.name for p in out.glob("*_exact.csv")]
    assert len(tag) == 1
    stem = tag[0].removesuffix("_exact.csv")
    header, rows = read_csv(out / f"{stem}_exact.csv")
    assert header == ["t", "T_1", "T_2", "method"]
    assert rows[0][3] == "exact-rk4"
    assert float(rows[0][1]) == 400.0
    header, _ = read_csv(out / f"{stem}_adiabatic.csv")
    assert header == ["t", "T_1", "T_2", "method"]
    header, _ = read_csv(out / f"{stem}_comparison.csv")
    assert header == ["t", "abs_dev_T_1", "abs_dev_T_2"]
    report = json.loads((out / f"{stem}_report.json").read_text())
    assert len(report["max_abs_deviation_K"]) == 2


def test_simulate_preset_outputs_are_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["simulate", "--preset", "fig2b", "--out", str(out),
                     "--dt", "0.005"]) == 0
    f1 = (out1 / "fig2b_exact.csv").read_bytes()
    f2 = (out2 / "fig2b_exact.csv").read_bytes()
    assert f1 == f2


def test_phases_csv_schema(tmp_path, config_file):
    out = tmp_path / "out"
    assert main(["phases", "--config", str(config_file), "--out", str(out)]) == 0
    files = list(out.glob("*_phases.csv"))
    assert len(files) == 1
    header, rows = read_csv(files[0])
    assert header == ["t", "branch", "gamma_d", "gamma_g"]
    branches = {row[1] for row in rows}
    assert branches == {"1", "2"}
    eigen_files = list(out.glob("*_eigen.csv"))
    header, _ = read_csv(eigen_files[0])
    assert header == ["t", "i", "lambda_i", "phi_i_1", "phi_i_2", "psi_i_1", "psi_i_2"]


def test_phases_branch_filter(tmp_path):
    out = tmp_path / "out"
    assert main(["phases", "--preset", "fig2b", "--out", str(out),
                 "--dt", "0.005", "--branch", "1"]) == 0
    _, rows = read_csv(out / "fig2b_phases.csv")
    assert {row[1] for row in rows} == {"1"}


def test_fig1_preset_emits_both_scenarios(tmp_path):
    out = tmp_path / "out"
    assert main(["phases", "--preset", "fig1", "--out", str(out),
                 "--dt", "0.01"]) == 0
    names = sorted(p.name for p in out.glob("*_phases.csv"))
    assert names == ["fig1-pair10tau_phases.csv", "fig1-pair1tau_phases.csv"]


def test_fieldmap_explicit_grid(tmp_path):
    out = tmp_path / "out"
    assert main(["fieldmap", "--out", str(out),
                 "--xmin", "0", "--xmax", "2", "--nx", "3",
                 "--ymin", "1", "--ymax", "2", "--ny", "2"]) == 0
    header, rows = read_csv(out / "fieldmap.csv")
    assert header == ["x", "y", "B_z"]
    values = {(float(r[0]), float(r[1])): float(r[2]) for r in rows}
    assert values[(1.0, 1.0)] == pytest.approx(-0.25)
    assert values[(0.0, 1.0)] == 0.0


def test_fieldmap_from_scenario(tmp_path):
    out = tmp_path / "out"
    assert main(["fieldmap", "--preset", "fig2b", "--out", str(out),
                 "--nx", "21", "--ny", "21", "--branch", "1"]) == 0
    files = list(out.glob("fig2b_fieldmap_branch1.csv"))
    assert len(files) == 1


def test_loop_report_cross_checks(tmp_path):
    out = tmp_path / "out"
    assert main(["loop", "--preset", "fig2b", "--out", str(out)]) == 0
    report = json.loads((out / "fig2b_loop_report.json").read_text())
    assert report["period_s"] == pytest.approx(1.0)
    for branch in ("1", "2"):
        entry = report["branches"][branch]
        loop = entry["loop_A"]
        assert abs(loop - entry["time_domain"]) / abs(loop) < 1e-4
        assert abs(loop - entry["loop_A_alt"]) / abs(loop) < 1e-4
        assert abs(loop - entry["surface"]) / abs(loop) < 1e-2
    paths = sorted(p.name for p in out.glob("fig2b_path_branch*.csv"))
    assert paths == ["fig2b_path_branch1.csv", "fig2b_path_branch2.csv"]
    header, rows = read_csv(out / "fig2b_path_branch1.csv")
    assert header == ["t", "x", "y"]
    first, last = rows[0], rows[-1]
    assert float(first[1]) == pytest.approx(float(last[1]), abs=1e-9)


def test_check_passes_on_fig2b(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["check", "--preset", "fig2b", "--out", str(out)]) == 0
    report = json.loads((out / "fig2b_checks.json").read_text())
    names = {c["name"] for c in report["checks"]}
    assert {"stokes-branch1", "gauge-invariance-branch1",
            "reparametrization-geometric", "reparametrization-dynamical",
            "reciprocity-null", "adiabatic-convergence",
            "rk-step-doubling"} <= names
    assert all(c["passed"] for c in report["checks"])
    printed = capsys.readouterr().out
    assert "[PASS]" in printed and "[FAIL]" not in printed


def test_check_reciprocal_preset_trivial_stokes(tmp_path):
    out = tmp_path / "out"
    assert main(["check", "--preset", "reciprocal", "--out", str(out),
                 "--dt", "0.002"]) == 0
    report = json.loads((out / "reciprocal_checks.json").read_text())
    checks = {c["name"]: c for c in report["checks"]}
    assert checks["reciprocity-null"]["passed"]
    assert checks["stokes-branch1"]["passed"]


def test_config_error_exit_code(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text(CONFIG.replace("period = 2.0", "period = -2.0"))
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 2


def test_missing_source_selection_exit_code(tmp_path):
    assert main(["simulate", "--out", str(tmp_path)]) == 2
    assert main(["simulate", "--preset", "fig2b", "--config", "x.cfg",
                 "--out", str(tmp_path)]) == 2


def test_numerical_abort_exit_code(tmp_path):
    # equal constant bath couplings and no pair coupling: degenerate spectrum
    degenerate = """
n_bodies = 2
bath_temperature = 300.0
initial_temperatures = 400.0, 300.0
t_end = 1.0
dt = 0.01
bath 1 { mean = 0.5 }
bath 2 { mean = 0.5 }
"""
    cfg = tmp_path / "degenerate.cfg"
    cfg.write_text(degenerate)
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path)]) == 3
