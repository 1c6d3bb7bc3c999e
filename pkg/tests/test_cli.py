import csv
import json
from fractions import Fraction

import pytest

from qjd.bigqjacobi import mu_N, mu_infinity
from qjd.cli import build_parser, main
from qjd.qalgebra import make_params

DEFAULTS = make_params(
    Fraction(1, 4), Fraction(1, 5), Fraction(1, 2), Fraction(-1, 3),
    Fraction(1, 2), Fraction(5, 16),
)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_poly_finite_level(capsys):
    code, out = run(capsys, ["poly", "--lambda", "2", "--N", "2"])
    assert code == 0
    report = json.loads(out)
    assert report["lambda"] == [2] and report["N"] == 2
    assert Fraction(report["eigenvalue"]["exact"]) == mu_N((2,), DEFAULTS, 2)
    mac = {tuple(t["partition"]): t["coefficient"]["exact"] for t in report["macdonald_terms"]}
    assert mac[(2,)] == "1"
    assert report["monomial_terms"]


def test_poly_level_free(capsys):
    code, out = run(capsys, ["poly", "--lambda", "1,1"])
    assert code == 0
    report = json.loads(out)
    assert report["N"] is None
    assert Fraction(report["eigenvalue"]["exact"]) == mu_infinity((1, 1), DEFAULTS)
    assert "monomial_terms" not in report


def test_poly_stability_flag(capsys):
    code, out = run(capsys, ["poly", "--lambda", "2,1", "--N", "2", "--check-stability"])
    assert code == 0
    assert json.loads(out)["stability"] == "pass"


def test_poly_output_files(tmp_path, capsys):
    out_dir = tmp_path / "poly_out"
    code, out = run(capsys, ["poly", "--lambda", "2", "--N", "2", "--out", str(out_dir)])
    assert code == 0
    assert (out_dir / "poly.json").read_text() == out
    with (out_dir / "coefficients.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["partition", "num", "den", "float"]
    assert len(rows) > 1
    assert (out_dir / "coefficients.png").stat().st_size > 0


def test_rerun_is_byte_identical(capsys):
    _, first = run(capsys, ["verify", "bounds"])
    _, second = run(capsys, ["verify", "bounds"])
    assert first == second


def test_verify_spectral_pass(capsys):
    code, out = run(capsys, ["verify", "spectral", "--N", "1"])
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "pass"
    assert all(r["status"] == "pass" for r in report["reports"])


def test_verify_bounds_values(capsys):
    code, out = run(capsys, ["verify", "bounds"])
    assert code == 0
    report = json.loads(out)["reports"][0]
    # q = 1/4 has the rational root 1/2: (1 + 1/4)/(1/2) = 5/2; t = 1/5 gives 26/5
    assert report["lower"]["exact"] == "5/2"
    assert report["upper"]["exact"] == "26/5"


def test_verify_output_files(tmp_path, capsys):
    out_dir = tmp_path / "verify_out"
    code, out = run(capsys, ["verify", "uniqueness", "--out", str(out_dir)])
    assert code == 0
    assert json.loads((out_dir / "report.json").read_text())["status"] == "pass"
    with (out_dir / "residuals.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["check", "N", "K", "status", "max_residual", "tolerance"]
    assert (out_dir / "residuals.png").stat().st_size > 0


def test_verify_failure_exits_2(capsys):
    # an impossible composition tolerance forces a clean failure path
    code, out = run(capsys, ["verify", "semigroup", "--N", "1", "--tol", "1e-30"])
    assert code == 2
    assert json.loads(out)["status"] == "fail"


def test_config_error_bad_q(capsys):
    code, out = run(capsys, ["poly", "--q", "2", "--lambda", "1", "--N", "1"])
    assert code == 1
    report = json.loads(out)
    assert report["status"] == "config_error"
    assert "0 < q < 1" in report["error"]


def test_config_error_nonconjugate_delta(capsys):
    code, out = run(capsys, ["poly", "--gamma", "1/4+1/2i", "--delta", "1/4+1/2i", "--lambda", "1", "--N", "1"])
    assert code == 1
    assert "conjugate" in json.loads(out)["error"]


def test_config_error_real_gamma(capsys):
    code, out = run(capsys, ["poly", "--gamma", "1/4+0i", "--delta", "1/4-0i", "--lambda", "1", "--N", "1"])
    assert code == 1
    assert "imaginary" in json.loads(out)["error"]


def test_config_error_bad_window(capsys):
    code, out = run(capsys, ["verify", "reversibility", "--K", "1"])
    assert code == 1
    assert "K >= 2" in json.loads(out)["error"]


def test_config_error_unknown_suite(capsys):
    code, out = run(capsys, ["verify", "fourier"])
    assert code == 1
    assert json.loads(out)["status"] == "config_error"


def test_config_error_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("QJD_THREADS", "zero")
    code, out = run(capsys, ["verify", "bounds"])
    assert code == 1
    assert "QJD_THREADS" in json.loads(out)["error"]


def test_threaded_run_matches_serial(capsys, monkeypatch):
    _, serial = run(capsys, ["verify", "macdonald"])
    monkeypatch.setenv("QJD_THREADS", "3")
    _, threaded = run(capsys, ["verify", "macdonald"])
    assert serial == threaded


def test_eigenvalue_collision_reported(capsys):
    # s2 = -ab/(q^3 t) makes the degree-2 eigenvalues collide at N = 2
    code, out = run(
        capsys,
        [
            "poly", "--q", "1/2", "--t", "1/5", "--a", "1/2", "--b=-1/5",
            "--gamma", "0+2i", "--delta", "0-2i", "--lambda", "2", "--N", "2",
        ],
    )
    assert code == 1
    report = json.loads(out)
    assert report["kind"] == "EigenvalueCollisionError"


def test_simulate_basic(capsys):
    code, out = run(capsys, ["simulate", "--N", "1", "--K", "6", "--horizon", "5", "--seed", "7"])
    assert code == 0
    report = json.loads(out)
    assert report["check"] == "simulate"
    assert report["start"] == "N=1;+[1];-[];z=0"
    assert 0.0 <= report["tv_to_component_stationary"]["float"] <= 1.0


def test_simulate_zero_horizon(capsys):
    code, out = run(capsys, ["simulate", "--N", "1", "--K", "6", "--horizon", "0"])
    assert code == 0
    report = json.loads(out)
    assert report["events"] == 0 and report["end_time"] == 0.0


def test_simulate_output_files(tmp_path, capsys):
    out_dir = tmp_path / "sim_out"
    code, _ = run(
        capsys,
        ["simulate", "--N", "1", "--K", "6", "--horizon", "20", "--seed", "3", "--out", str(out_dir)],
    )
    assert code == 0
    with (out_dir / "trajectory.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["time", "state"]
    assert rows[1][1] == "N=1;+[1];-[];z=0"
    with (out_dir / "measure.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["state", "weight_num", "weight_den", "weight_float"]
    total = sum(Fraction(int(r[1]), int(r[2])) for r in rows[1:])
    assert total == 1
    assert (out_dir / "occupation.png").stat().st_size > 0


def test_simulate_start_capacity_mismatch(capsys):
    code, out = run(
        capsys,
        ["simulate", "--N", "2", "--start", "N=1;+[1];-[];z=0"],
    )
    assert code == 1
    assert "capacity" in json.loads(out)["error"]


def test_simulate_minus_bounds(capsys):
    code, out = run(capsys, ["simulate", "--N", "2", "--minus", "3"])
    assert code == 1
    assert "--minus" in json.loads(out)["error"]


def test_simulate_frontier_start_rejected(capsys):
    code, out = run(
        capsys,
        ["simulate", "--N", "1", "--K", "4", "--start", "N=1;+[4];-[];z=0"],
    )
    assert code == 1
    assert "window edge" in json.loads(out)["error"]


def test_parser_requires_command():
    with pytest.raises(Exception):
        build_parser().parse_args([])
