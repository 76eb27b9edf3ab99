"""Experiment configuration: JSON loading, validation, presets, echoes.

Configs are plain JSON documents with complex numbers written as [re, im]
pairs. Two presets ship with the package: ``vtype_exp1`` (one uncertain
factor on the drift) and ``vtype_exp2`` (uncertain factors on both drift
and controls), both on the three-level system with two upper levels coupled
to a common ground level.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .learn import TrainSettings
from .linalg import is_hermitian, is_unit_norm
from .model import (
    MODULATION_FORMS,
    SAMPLE_KINDS,
    QuantumSystem,
    UncertaintySample,
    UncertaintySpec,
)
from .sampling import GridSpec, RandomSpec, random_test_samples, training_grid

__all__ = [
    "PRESETS",
    "MAX_DIMENSION",
    "MAX_SLICES",
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "preset_path",
    "config_echo",
    "with_overrides",
    "training_samples",
    "test_samples",
]

PRESETS = ("vtype_exp1", "vtype_exp2")
MAX_DIMENSION = 64
MAX_SLICES = 10**6

INIT_CHOICES = ("sin", "zero")


class ConfigError(ValueError):
    """A config file failed to load or validate."""


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """A fully validated experiment definition."""

    system: QuantumSystem
    uncertainty: UncertaintySpec
    grid: GridSpec
    train_sample_kind: str
    control_duration: float
    control_slices: int
    control_init: str
    training: TrainSettings
    evaluation: RandomSpec
    histogram_bins: int
    output_dir: Path


def _section(doc: dict, key: str) -> dict:
    if key not in doc:
        raise ConfigError(f"missing field {key}")
    if not isinstance(doc[key], dict):
        raise ConfigError(f"field {key} must be an object")
    return doc[key]


def _require(section: dict, key: str, path: str):
    if key not in section:
        raise ConfigError(f"missing field {path}.{key}")
    return section[key]


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field {path} must be a number")
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field {path} must be an integer")
    return value


def _complex_entry(value, path: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise ConfigError(f"malformed complex pair at {path} (expected [re, im])")
    return complex(value[0], value[1])


def _complex_vector(value, d: int, path: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != d:
        raise ConfigError(f"field {path} must be a list of {d} complex pairs")
    return np.array([_complex_entry(v, f"{path}[{i}]") for i, v in enumerate(value)])


def _complex_matrix(value, d: int, path: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != d:
        raise ConfigError(f"field {path} must be a {d}x{d} matrix of complex pairs")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != d:
            raise ConfigError(f"field {path}[{i}] must be a list of {d} complex pairs")
        rows.append([_complex_entry(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(rows)


def _parse_system(section: dict) -> QuantumSystem:
    d = _integer(_require(section, "dimension", "system"), "system.dimension")
    if not 2 <= d <= MAX_DIMENSION:
        raise ConfigError(f"field system.dimension must lie in 2..{MAX_DIMENSION}, got {d}")
    h0 = _complex_matrix(_require(section, "H0", "system"), d, "system.H0")
    if not is_hermitian(h0):
        raise ConfigError("field system.H0 is not Hermitian")
    raw_controls = _require(section, "control_hamiltonians", "system")
    if not isinstance(raw_controls, list) or len(raw_controls) < 1:
        raise ConfigError("field system.control_hamiltonians must be a nonempty list")
    controls = []
    for m, mat in enumerate(raw_controls):
        parsed = _complex_matrix(mat, d, f"system.control_hamiltonians[{m}]")
        if not is_hermitian(parsed):
            raise ConfigError(f"field system.control_hamiltonians[{m}] is not Hermitian")
        controls.append(parsed)
    psi0 = _complex_vector(_require(section, "psi0", "system"), d, "system.psi0")
    if not is_unit_norm(psi0):
        raise ConfigError("field system.psi0 is not unit-norm")
    psi_target = _complex_vector(_require(section, "psi_target", "system"), d, "system.psi_target")
    if not is_unit_norm(psi_target):
        raise ConfigError("field system.psi_target is not unit-norm")
    return QuantumSystem(h0=h0, controls=np.array(controls), psi0=psi0, psi_target=psi_target)


def _parse_uncertainty(section: dict) -> UncertaintySpec:
    omega = _real(_require(section, "Omega", "uncertainty"), "uncertainty.Omega")
    theta = _real(_require(section, "Theta", "uncertainty"), "uncertainty.Theta")
    g_form = section.get("g_form", "cosine")
    f_form = section.get("f_form", "cosine")
    for name, form in (("g_form", g_form), ("f_form", f_form)):
        if form not in MODULATION_FORMS:
            raise ConfigError(
                f"field uncertainty.{name} must be one of {list(MODULATION_FORMS)}, got {form!r}"
            )
    if not 0.0 <= omega <= 1.0:
        raise ConfigError(f"field uncertainty.Omega must lie in [0, 1], got {omega}")
    if not 0.0 <= theta <= 1.0:
        raise ConfigError(f"field uncertainty.Theta must lie in [0, 1], got {theta}")
    return UncertaintySpec(omega_bound=omega, theta_bound=theta, g_form=g_form, f_form=f_form)


def preset_path(name: str) -> Path:
    """Filesystem path of a bundled preset config."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    return Path(str(resources.files("slcq") / "presets" / f"{name}.json"))


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    """Load and validate a config from a JSON file or a bundled preset name.

    Parameters
    ----------
    path : str or path-like
        Either an existing JSON file or one of the preset names in
        ``PRESETS``.

    Returns
    -------
    ExperimentConfig

    Raises
    ------
    ConfigError
        On unreadable files, malformed JSON, missing fields, or invalid
        values; the message names the offending field.
    """
    candidate = Path(path)
    if not candidate.is_file():
        if str(path) in PRESETS:
            candidate = preset_path(str(path))
        else:
            raise ConfigError(f"no such config file or preset: {path}")
    try:
        doc = json.loads(candidate.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {candidate} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")

    system = _parse_system(_section(doc, "system"))
    uncertainty = _parse_uncertainty(_section(doc, "uncertainty"))

    grid_section = _section(doc, "grid")
    n_omega = _integer(_require(grid_section, "N_omega", "grid"), "grid.N_omega")
    n_theta = _integer(grid_section.get("N_theta", 1), "grid.N_theta")
    if n_omega < 1 or n_theta < 1:
        raise ConfigError("fields grid.N_omega and grid.N_theta must be at least 1")
    kind = grid_section.get("train_sample_kind", "static_factor")
    if kind not in SAMPLE_KINDS:
        raise ConfigError(
            f"field grid.train_sample_kind must be one of {list(SAMPLE_KINDS)}, got {kind!r}"
        )

    control_section = _section(doc, "control")
    duration = _real(_require(control_section, "T", "control"), "control.T")
    if not (duration > 0 and np.isfinite(duration)):
        raise ConfigError(f"field control.T must be positive and finite, got {duration}")
    slices = _integer(_require(control_section, "Q", "control"), "control.Q")
    if not 1 <= slices <= MAX_SLICES:
        raise ConfigError(f"field control.Q must lie in 1..{MAX_SLICES}, got {slices}")
    init = control_section.get("init", "sin")
    if not isinstance(init, str):
        raise ConfigError("field control.init must be a string")
    if init not in INIT_CHOICES:
        init_file = Path(init)
        if not init_file.is_absolute():
            init_file = candidate.parent / init_file
        if not init_file.is_file():
            raise ConfigError(
                f"field control.init must be one of {list(INIT_CHOICES)} or an existing "
                f"control CSV path, got {init!r}"
            )
        init = str(init_file)

    training_section = _section(doc, "training")
    eta = _real(_require(training_section, "eta", "training"), "training.eta")
    if not (eta >= 0 and np.isfinite(eta)):
        raise ConfigError(f"field training.eta must be finite and >= 0, got {eta}")
    max_iterations = _integer(training_section.get("max_iterations", 500), "training.max_iterations")
    plateau_tol = _real(training_section.get("plateau_tol", 1e-7), "training.plateau_tol")
    plateau_window = _integer(training_section.get("plateau_window", 10), "training.plateau_window")
    decay = _real(training_section.get("learning_rate_decay", 1.0), "training.learning_rate_decay")
    try:
        training = TrainSettings(
            learning_rate=eta,
            max_iterations=max_iterations,
            plateau_tol=plateau_tol,
            plateau_window=plateau_window,
            learning_rate_decay=decay,
        )
    except ValueError as exc:
        raise ConfigError(f"invalid training settings: {exc}") from exc

    eval_section = _section(doc, "evaluation")
    count = _integer(_require(eval_section, "count", "evaluation"), "evaluation.count")
    seed = _integer(_require(eval_section, "seed", "evaluation"), "evaluation.seed")
    bins = _integer(eval_section.get("histogram_bins", 50), "evaluation.histogram_bins")
    if count < 1:
        raise ConfigError(f"field evaluation.count must be at least 1, got {count}")
    if not 0 <= seed < 2**64:
        raise ConfigError(f"field evaluation.seed must fit in 64 unsigned bits, got {seed}")
    if bins < 1:
        raise ConfigError(f"field evaluation.histogram_bins must be at least 1, got {bins}")

    if "output_dir" not in doc:
        raise ConfigError("missing field output_dir")
    if not isinstance(doc["output_dir"], str) or not doc["output_dir"]:
        raise ConfigError("field output_dir must be a nonempty string")

    return ExperimentConfig(
        system=system,
        uncertainty=uncertainty,
        grid=GridSpec(n_omega=n_omega, n_theta=n_theta),
        train_sample_kind=kind,
        control_duration=duration,
        control_slices=slices,
        control_init=init,
        training=training,
        evaluation=RandomSpec(count=count, seed=seed),
        histogram_bins=bins,
        output_dir=Path(doc["output_dir"]),
    )


def _pairs_matrix(a: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def _pairs_vector(a: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in a]


def config_echo(cfg: ExperimentConfig) -> dict:
    """Normalized config dictionary for embedding in result summaries.

    All defaults are materialized and complex entries are back in [re, im]
    form, so the echo alone suffices to recreate the run. The output
    directory is deliberately left out: it places artifacts but does not
    influence any computed number, and leaving it out keeps summaries
    byte-identical across output locations.
    """
    sys_ = cfg.system
    return {
        "system": {
            "dimension": sys_.dimension,
            "H0": _pairs_matrix(sys_.h0),
            "control_hamiltonians": [_pairs_matrix(h) for h in sys_.controls],
            "psi0": _pairs_vector(sys_.psi0),
            "psi_target": _pairs_vector(sys_.psi_target),
        },
        "uncertainty": {
            "Omega": cfg.uncertainty.omega_bound,
            "Theta": cfg.uncertainty.theta_bound,
            "g_form": cfg.uncertainty.g_form,
            "f_form": cfg.uncertainty.f_form,
        },
        "grid": {
            "N_omega": cfg.grid.n_omega,
            "N_theta": cfg.grid.n_theta,
            "train_sample_kind": cfg.train_sample_kind,
        },
        "control": {
            "T": cfg.control_duration,
            "Q": cfg.control_slices,
            "init": cfg.control_init,
        },
        "training": {
            "eta": cfg.training.learning_rate,
            "max_iterations": cfg.training.max_iterations,
            "plateau_tol": cfg.training.plateau_tol,
            "plateau_window": cfg.training.plateau_window,
            "learning_rate_decay": cfg.training.learning_rate_decay,
        },
        "evaluation": {
            "count": cfg.evaluation.count,
            "seed": cfg.evaluation.seed,
            "histogram_bins": cfg.histogram_bins,
        },
    }


def with_overrides(
    cfg: ExperimentConfig,
    output_dir: str | None = None,
    seed: int | None = None,
    eta: float | None = None,
    iterations: int | None = None,
) -> ExperimentConfig:
    """Config with command-line overrides applied."""
    if output_dir is not None:
        cfg = dataclasses.replace(cfg, output_dir=Path(output_dir))
    if seed is not None:
        if not 0 <= seed < 2**64:
            raise ConfigError(f"seed must fit in 64 unsigned bits, got {seed}")
        cfg = dataclasses.replace(cfg, evaluation=RandomSpec(cfg.evaluation.count, seed))
    if eta is not None:
        if not (eta >= 0 and np.isfinite(eta)):
            raise ConfigError(f"eta must be finite and >= 0, got {eta}")
        cfg = dataclasses.replace(
            cfg, training=dataclasses.replace(cfg.training, learning_rate=eta)
        )
    if iterations is not None:
        if iterations < 1:
            raise ConfigError(f"iterations must be at least 1, got {iterations}")
        cfg = dataclasses.replace(
            cfg, training=dataclasses.replace(cfg.training, max_iterations=iterations)
        )
    return cfg


def training_samples(cfg: ExperimentConfig) -> tuple[UncertaintySample, ...]:
    """Training grid of a config."""
    return training_grid(cfg.uncertainty, cfg.grid, kind=cfg.train_sample_kind)


def test_samples(cfg: ExperimentConfig) -> tuple[UncertaintySample, ...]:
    """Seeded random test set of a config."""
    return random_test_samples(cfg.uncertainty, cfg.evaluation)
