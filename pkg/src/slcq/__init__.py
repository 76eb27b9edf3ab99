"""Robust control of finite-dimensional closed quantum systems.

Train a piecewise-constant control pulse against a sampled ensemble of
multiplicative Hamiltonian uncertainties by gradient-flow ascent, then
evaluate the result on fresh random uncertainty samples.
"""

from .config import (
    PRESETS,
    ConfigError,
    ExperimentConfig,
    config_echo,
    load_config,
    preset_path,
    test_samples,
    training_samples,
    with_overrides,
)
from .gradient import (
    augmented_gradient,
    fd_relative_error,
    finite_difference_gradient,
    sample_gradient,
)
from .learn import EvaluationReport, TrainingRecord, TrainSettings, evaluate, train
from .model import (
    ControlField,
    QuantumSystem,
    UncertaintySample,
    UncertaintySpec,
    factors_at,
    hamiltonian_at,
    modulation_value,
    sine_control,
    slice_midpoints,
    zero_control,
)
from .propagation import Trajectory, fidelity, performance, propagate
from .sampling import GridSpec, RandomSpec, random_test_samples, training_grid

__version__ = "0.1.0"

__all__ = [
    "PRESETS",
    "ConfigError",
    "ControlField",
    "EvaluationReport",
    "ExperimentConfig",
    "GridSpec",
    "QuantumSystem",
    "RandomSpec",
    "TrainSettings",
    "TrainingRecord",
    "Trajectory",
    "UncertaintySample",
    "UncertaintySpec",
    "augmented_gradient",
    "config_echo",
    "evaluate",
    "factors_at",
    "fd_relative_error",
    "fidelity",
    "finite_difference_gradient",
    "hamiltonian_at",
    "load_config",
    "modulation_value",
    "performance",
    "preset_path",
    "propagate",
    "random_test_samples",
    "sample_gradient",
    "sine_control",
    "slice_midpoints",
    "test_samples",
    "train",
    "training_grid",
    "training_samples",
    "with_overrides",
    "zero_control",
    "__version__",
]
