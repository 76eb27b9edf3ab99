"""Tests for config loading, validation, presets, and echoes."""

import json

import numpy as np
import pytest

from slcq import (
    ConfigError,
    config_echo,
    load_config,
    preset_path,
    test_samples as draw_test_samples,
    training_samples,
    with_overrides,
)

MINIMAL = {
    "system": {
        "dimension": 2,
        "H0": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]],
        "control_hamiltonians": [
            [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
        ],
        "psi0": [[1.0, 0.0], [0.0, 0.0]],
        "psi_target": [[0.0, 0.0], [1.0, 0.0]],
    },
    "uncertainty": {"Omega": 0.1, "Theta": 0.0, "g_form": "cosine", "f_form": "constant_one"},
    "grid": {"N_omega": 3},
    "control": {"T": 2.0, "Q": 10, "init": "sin"},
    "training": {"eta": 0.1},
    "evaluation": {"count": 12, "seed": 7},
    "output_dir": "out",
}


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def variant(**changes):
    doc = json.loads(json.dumps(MINIMAL))
    for dotted, value in changes.items():
        parts = dotted.split(".")
        target = doc
        for p in parts[:-1]:
            target = target[p]
        if value is None:
            del target[parts[-1]]
        else:
            target[parts[-1]] = value
    return doc


class TestPresets:
    @pytest.mark.parametrize("name", ["vtype_exp1", "vtype_exp2"])
    def test_presets_load(self, name):
        cfg = load_config(name)
        assert cfg.system.dimension == 3
        assert cfg.system.n_controls == 4
        assert cfg.control_duration == 5.0
        assert cfg.control_slices == 200
        assert cfg.training.learning_rate == 0.2
        assert cfg.training.max_iterations == 500
        assert cfg.evaluation.count == 200
        assert cfg.evaluation.seed == 42
        assert cfg.histogram_bins == 50
        assert cfg.uncertainty.omega_bound == 0.28
        assert cfg.train_sample_kind == "static_factor"

    def test_exp1_system_matrices(self):
        cfg = load_config("vtype_exp1")
        assert np.array_equal(cfg.system.h0, np.diag([1.5, 1.0, 0.0]))
        assert cfg.system.controls[1][0, 1] == -1j
        assert cfg.system.controls[3][2, 0] == 1j
        assert np.allclose(cfg.system.psi0, np.ones(3) / np.sqrt(3))
        assert np.array_equal(cfg.system.psi_target, [0, 0, 1])
        assert cfg.uncertainty.f_form == "constant_one"
        assert cfg.uncertainty.theta_bound == 0.0

    def test_exp2_has_two_uncertain_axes(self):
        cfg = load_config("vtype_exp2")
        assert cfg.uncertainty.theta_bound == 0.28
        assert cfg.uncertainty.f_form == "cosine"
        assert cfg.grid.n_theta == 7
        assert len(training_samples(cfg)) == 49

    def test_exp1_sample_counts(self):
        cfg = load_config("vtype_exp1")
        assert len(training_samples(cfg)) == 7
        assert len(draw_test_samples(cfg)) == 200

    def test_preset_path_rejects_unknown(self):
        with pytest.raises(ConfigError, match="preset"):
            preset_path("vtype_exp3")

    def test_missing_file_and_unknown_preset(self):
        with pytest.raises(ConfigError, match="no such config"):
            load_config("definitely_not_here.json")


class TestValidation:
    def test_minimal_config_loads(self, tmp_path):
        cfg = load_config(write_config(tmp_path, MINIMAL))
        assert cfg.system.dimension == 2
        assert cfg.grid.n_theta == 1
        assert cfg.training.plateau_tol == 1e-7
        assert cfg.histogram_bins == 50
        assert str(cfg.output_dir) == "out"

    @pytest.mark.parametrize(
        "changes,needle",
        [
            ({"training": None}, "training"),
            ({"training.eta": None}, "training.eta"),
            ({"evaluation.seed": None}, "evaluation.seed"),
            ({"output_dir": None}, "output_dir"),
            ({"system.H0": None}, "system.H0"),
        ],
    )
    def test_missing_fields_are_named(self, tmp_path, changes, needle):
        with pytest.raises(ConfigError, match=needle.replace(".", r"\.")):
            load_config(write_config(tmp_path, variant(**changes)))

    def test_non_hermitian_matrix_rejected(self, tmp_path):
        doc = variant()
        doc["system"]["H0"][0][1] = [1.0, 0.0]
        with pytest.raises(ConfigError, match="system.H0.*Hermitian"):
            load_config(write_config(tmp_path, doc))

    def test_unnormalized_state_rejected(self, tmp_path):
        doc = variant(**{"system.psi0": [[1.0, 0.0], [1.0, 0.0]]})
        with pytest.raises(ConfigError, match="psi0"):
            load_config(write_config(tmp_path, doc))

    def test_malformed_complex_pair_rejected(self, tmp_path):
        doc = variant()
        doc["system"]["H0"][0][0] = [1.0]
        with pytest.raises(ConfigError, match="complex pair at system.H0\\[0\\]\\[0\\]"):
            load_config(write_config(tmp_path, doc))

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="JSON"):
            load_config(path)

    @pytest.mark.parametrize(
        "changes,needle",
        [
            ({"control.Q": 10**6 + 1}, "control.Q"),
            ({"system.dimension": 65}, "dimension"),
            ({"uncertainty.Omega": 1.4}, "Omega"),
            ({"training.eta": -0.5}, "eta"),
            ({"evaluation.count": 0}, "count"),
            ({"evaluation.seed": -3}, "seed"),
            ({"grid.train_sample_kind": "typo"}, "train_sample_kind"),
            ({"uncertainty.g_form": "typo"}, "g_form"),
            ({"control.init": "no_such_file.csv"}, "init"),
        ],
    )
    def test_invalid_values_are_named(self, tmp_path, changes, needle):
        with pytest.raises(ConfigError, match=needle):
            load_config(write_config(tmp_path, variant(**changes)))

    def test_dimension_mismatch_with_matrix(self, tmp_path):
        doc = variant(**{"system.dimension": 3})
        with pytest.raises(ConfigError, match="system.H0"):
            load_config(write_config(tmp_path, doc))


class TestOverridesAndEcho:
    def test_overrides_replace_only_named_fields(self):
        cfg = load_config("vtype_exp1")
        new = with_overrides(cfg, seed=99, eta=0.05, iterations=40, output_dir="/tmp/elsewhere")
        assert new.evaluation.seed == 99
        assert new.evaluation.count == 200
        assert new.training.learning_rate == 0.05
        assert new.training.max_iterations == 40
        assert new.training.plateau_tol == cfg.training.plateau_tol
        assert str(new.output_dir) == "/tmp/elsewhere"
        # original untouched
        assert cfg.evaluation.seed == 42

    def test_zero_eta_override_allowed(self):
        cfg = with_overrides(load_config("vtype_exp1"), eta=0.0)
        assert cfg.training.learning_rate == 0.0

    def test_echo_reflects_overrides_and_omits_output_dir(self):
        cfg = with_overrides(load_config("vtype_exp1"), seed=7, eta=0.3)
        echo = config_echo(cfg)
        assert echo["evaluation"]["seed"] == 7
        assert echo["training"]["eta"] == 0.3
        assert "output_dir" not in echo

    def test_echo_round_trips_through_loader(self, tmp_path):
        cfg = load_config("vtype_exp2")
        doc = config_echo(cfg)
        doc["output_dir"] = "elsewhere"
        cfg2 = load_config(write_config(tmp_path, doc, "echo.json"))
        assert np.array_equal(cfg2.system.h0, cfg.system.h0)
        assert np.array_equal(cfg2.system.controls, cfg.system.controls)
        assert np.array_equal(cfg2.system.psi0, cfg.system.psi0)
        assert cfg2.uncertainty == cfg.uncertainty
        assert cfg2.grid == cfg.grid
        assert cfg2.training == cfg.training
        assert cfg2.evaluation == cfg.evaluation
        assert draw_test_samples(cfg2) == draw_test_samples(cfg)

    def test_control_init_file_resolved_relative_to_config(self, tmp_path):
        from slcq.reports import write_control_csv
        from slcq import zero_control

        write_control_csv(tmp_path / "seed_pulse.csv", zero_control(1, 10, 2.0))
        doc = variant(**{"control.init": "seed_pulse.csv"})
        cfg = load_config(write_config(tmp_path, doc))
        assert cfg.control_init == str(tmp_path / "seed_pulse.csv")
