"""Command-line runner: subcommands, report files and exit codes."""

import csv
import json

import numpy as np
import pytest

from cli.main import EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, exit_code_for, main
from langevin import TRAJECTORY_COLUMNS
from memory import StageError
from qcore import ChannelError, ConfigError


def read_report(path):
    return json.loads(path.read_text())


def test_run_writes_report(ideal_scenario_path, tmp_path):
    out = tmp_path / "report.json"
    assert main(["run", "--config", str(ideal_scenario_path), "--out", str(out)]) == EXIT_OK
    report = read_report(out)
    assert report["status"] == "success"
    assert report["fidelities"]["round_trip"] == pytest.approx(1.0, abs=1e-10)
    assert report["success_probabilities"]["combined"] == pytest.approx(0.25)
    assert report["kraus_readin"]["significant"] == 1
    assert report["resources"]["T1_s"] > 0
    assert len(report["provenance"]["config_hash"]) == 64


def test_run_is_deterministic_apart_from_timestamp(ideal_scenario_path, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for out in (first, second):
        assert main(["run", "--config", str(ideal_scenario_path), "--out", str(out), "--seed", "11"]) == EXIT_OK
    a, b = read_report(first), read_report(second)
    a.pop("timestamp")
    b.pop("timestamp")
    assert a == b
    assert a["provenance"]["seed"] == 11


def test_run_prints_summary_without_out(ideal_scenario_path, capsys):
    assert main(["run", "--config", str(ideal_scenario_path)]) == EXIT_OK
    captured = capsys.readouterr().out
    assert '"report_version"' in captured
    assert "round-trip F" in captured


def test_invalid_scenario_exits_with_config_code(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text("photon:\n  gamma_GHz: -1.0\n")
    assert main(["run", "--config", str(path)]) == EXIT_CONFIG
    assert "photon.gamma_GHz" in capsys.readouterr().err


def test_missing_scenario_exits_with_io_code(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "absent.yaml")]) == EXIT_IO
    assert capsys.readouterr().err.startswith("error:")


def test_kraus_subcommand(ideal_scenario_path, tmp_path):
    out = tmp_path / "kraus.json"
    assert main(["kraus", "--config", str(ideal_scenario_path), "--out", str(out)]) == EXIT_OK
    payload = read_report(out)
    assert set(payload) == {"provenance", "rotation", "kraus_readin", "kraus_readout"}
    readout = payload["kraus_readout"]
    assert readout["significant"] == 1
    k = np.array(readout["operators"][0])
    k = k[..., 0] + 1j * k[..., 1]
    assert np.allclose(k.conj().T @ k, np.eye(2), atol=1e-9)


def test_synthetic_optimizer_finds_optimum(tmp_path):
    out = tmp_path / "opt.json"
    assert main(["optimize-cavity", "--synthetic", "--seed", "3", "--out", str(out)]) == EXIT_OK
    payload = read_report(out)
    assert payload["synthetic"] is True
    optimum, found = np.array(payload["optimum"]), np.array(payload["found"])
    assert np.max(np.abs(found - optimum)) < 0.5
    assert payload["evaluations"] <= 2000
    assert payload["improvement"] > 0


def test_optimize_with_fixed_triple(ideal_scenario_path, tmp_path):
    out = tmp_path / "cavity.json"
    assert main(["optimize-cavity", "--config", str(ideal_scenario_path), "--out", str(out)]) == EXIT_OK
    payload = read_report(out)
    assert payload["cavity"]["kappa_GHz"] == pytest.approx(1.0)
    assert payload["cavity"]["optimized"] is False
    assert payload["F_sp"] is None


@pytest.mark.slow
def test_trajectory_csv(ideal_scenario_path, tmp_path):
    out = tmp_path / "trajectory.csv"
    assert main(["trajectory", "--config", str(ideal_scenario_path), "--spin", "2", "--out", str(out)]) == EXIT_OK
    with out.open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert tuple(rows[0]) == TRAJECTORY_COLUMNS
    assert len(rows) > 100
    assert all(len(row) == len(TRAJECTORY_COLUMNS) for row in rows[1:])


def test_emitters_table(capsys):
    assert main(["emitters"]) == EXIT_OK
    assert "snv" in capsys.readouterr().out


def test_exit_code_mapping():
    assert exit_code_for(ConfigError("x")) == EXIT_CONFIG
    assert exit_code_for(ChannelError("x")) == EXIT_NUMERICAL
    assert exit_code_for(FileNotFoundError("x")) == EXIT_IO
    assert exit_code_for(StageError("read_out", ChannelError("x"))) == EXIT_NUMERICAL
    assert exit_code_for(StageError("scenario", ConfigError("x"))) == EXIT_CONFIG
