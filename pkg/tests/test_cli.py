import csv
import io

import pytest
from click.testing import CliRunner

from qfed import __version__, quadrature
from qfed.cli import main
from qfed.scenario import bundled_scenario_path

from test_scenario import BASE


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def scenario_file(tmp_path):
    p = tmp_path / "demo.scenario"
    p.write_text(BASE)
    return p


def test_units_report(runner):
    res = runner.invoke(main, ["units"])
    assert res.exit_code == 0
    assert __version__ in res.output
    assert "0.1973269804 eV um" in res.output
    assert "8.617333262e-05 eV/K" in res.output
    assert "299792458.0 m/s" in res.output
    assert "2/(pi c S)" in res.output


def test_run_to_stdout_and_file(runner, scenario_file, tmp_path):
    res = runner.invoke(main, ["run", str(scenario_file), "--threads", "2"])
    assert res.exit_code == 0, res.output
    rows = list(csv.reader(io.StringIO(res.output)))
    assert rows[0] == ["x_um", "E_eV", "quantity", "value", "error_estimate"]
    assert len(rows) == 1 + 3 * 5 * 2
    out = tmp_path / "out.csv"
    res = runner.invoke(main, ["run", str(scenario_file), "--out", str(out), "--tol", "1e-9"])
    assert res.exit_code == 0
    assert out.read_text().splitlines()[0] == "x_um,E_eV,quantity,value,error_estimate"


def test_validation_exit_code(runner, tmp_path):
    p = tmp_path / "bad.scenario"
    p.write_text(BASE.replace("thickness_um: 10.0", "thickness_um: -1"))
    res = runner.invoke(main, ["run", str(p)])
    assert res.exit_code == 2
    assert "bad.scenario:7: layers[1].thickness_um" in res.output


def test_io_exit_codes(runner, scenario_file, tmp_path):
    res = runner.invoke(main, ["run", str(tmp_path / "missing.scenario")])
    assert res.exit_code == 4
    res = runner.invoke(main, ["run", str(scenario_file), "--out", str(tmp_path / "no" / "dir.csv")])
    assert res.exit_code == 4


def test_convergence_exit_code(runner, scenario_file, monkeypatch):
    monkeypatch.setattr(quadrature, "interval_budget", lambda k, length: 1)
    res = runner.invoke(main, ["run", str(scenario_file), "--tol", "1e-13"])
    assert res.exit_code == 3
    assert "E = " in res.output


def test_bad_option_is_a_usage_error(runner, scenario_file):
    assert runner.invoke(main, ["run", str(scenario_file), "--threads", "0"]).exit_code == 2


def test_calibrate(runner):
    res = runner.invoke(main, ["calibrate", str(bundled_scenario_path("fig3")), "--target-ev", "0.046"])
    assert res.exit_code == 0, res.output
    lines = dict(line.split(": ", 1) for line in res.output.splitlines())
    assert float(lines["thickness_um"]) == pytest.approx(10.0055, abs=1e-3)
    assert float(lines["maximum_1_eV"].split()[0]) == pytest.approx(0.046, abs=1e-6)


def test_calibrate_target_outside_scan(runner):
    res = runner.invoke(main, ["calibrate", str(bundled_scenario_path("fig3")), "--target-ev", "0.5"])
    assert res.exit_code == 2


def test_echo_round_trips(runner, scenario_file, tmp_path):
    res = runner.invoke(main, ["echo", str(scenario_file)])
    assert res.exit_code == 0
    again = tmp_path / "again.scenario"
    again.write_text(res.output)
    assert runner.invoke(main, ["echo", str(again)]).output == res.output


def test_version_flag(runner):
    res = runner.invoke(main, ["--version"])
    assert __version__ in res.output
