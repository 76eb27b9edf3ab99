"""Tests for CSV/JSON serialization round-trips."""

import csv
import json

import numpy as np
import pytest

from slcq import ControlField, UncertaintySample
from slcq.reports import (
    format_float,
    read_control_csv,
    write_control_csv,
    write_evaluation_csv,
    write_summary,
    write_training_log,
)


def test_format_float_round_trips_exactly():
    rng = np.random.default_rng(0)
    values = list(rng.uniform(-10, 10, 50)) + [0.2, 1e-17, 123456.789, 1.0, 0.0]
    for v in values:
        assert float(format_float(v)) == v


def test_control_csv_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    ctrl = ControlField(5.0, 37, rng.normal(size=(3, 37)))
    path = tmp_path / "pulse.csv"
    write_control_csv(path, ctrl)
    back = read_control_csv(path, 5.0)
    assert back.n_slices == 37
    assert back.n_channels == 3
    assert back.duration == 5.0
    assert np.array_equal(back.amplitudes, ctrl.amplitudes)


def test_control_csv_layout(tmp_path):
    ctrl = ControlField(1.0, 4, np.zeros((2, 4)))
    path = tmp_path / "pulse.csv"
    write_control_csv(path, ctrl)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["t", "u_1", "u_2"]
    assert len(rows) == 5
    assert float(rows[1][0]) == 0.125


def test_read_control_rejects_malformed(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n1,2\n")
    with pytest.raises(ValueError, match="control file"):
        read_control_csv(path, 1.0)
    path.write_text("t,u_1\n")
    with pytest.raises(ValueError, match="data rows"):
        read_control_csv(path, 1.0)
    path.write_text("t,u_1\n0.5,1.0,9.0\n")
    with pytest.raises(ValueError, match="fields"):
        read_control_csv(path, 1.0)


def test_training_log_format(tmp_path):
    path = tmp_path / "log.csv"
    write_training_log(path, [0.1, 0.5, 0.93])
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["iteration", "J_N"]
    assert [r[0] for r in rows[1:]] == ["0", "1", "2"]
    assert float(rows[2][1]) == 0.5


def test_evaluation_csv_format(tmp_path):
    samples = (UncertaintySample.modulated(0.1, -0.2), UncertaintySample.modulated(0.0, 0.0))
    path = tmp_path / "eval.csv"
    write_evaluation_csv(path, samples, [0.99, 0.5])
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["index", "omega", "theta", "fidelity"]
    assert rows[1][0] == "0"
    assert float(rows[1][1]) == 0.1
    assert float(rows[2][3]) == 0.5


def test_evaluation_csv_rejects_static_samples(tmp_path):
    with pytest.raises(ValueError, match="modulated"):
        write_evaluation_csv(tmp_path / "e.csv", (UncertaintySample.static(1.0),), [0.5])


def test_evaluation_csv_rejects_length_mismatch(tmp_path):
    with pytest.raises(ValueError, match="fidelities"):
        write_evaluation_csv(tmp_path / "e.csv", (UncertaintySample.modulated(0.0),), [0.5, 0.6])


def test_summary_json_readable(tmp_path):
    path = tmp_path / "summary.json"
    write_summary(path, {"a": 0.30000000000000004, "b": [1, 2]})
    loaded = json.loads(path.read_text())
    assert loaded["a"] == 0.30000000000000004
    assert loaded["b"] == [1, 2]
