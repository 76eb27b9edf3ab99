"""Training loop (gradient-flow ascent on the sampled ensemble) and evaluation.

Training ascends the mean performance over a fixed set of uncertainty
samples with the plain update u <- u + eta * grad; evaluation propagates a
separate set of test samples under the resulting control and reports the
fidelity statistics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
import numpy.typing as npt

from .gradient import augmented_gradient
from .model import ControlField, QuantumSystem, UncertaintySample, UncertaintySpec
from .parallel import run_chunked
from .propagation import _evolve, _factor_stack

__all__ = [
    "TrainSettings",
    "TrainingRecord",
    "EvaluationReport",
    "train",
    "evaluate",
]

STOP_MAX_ITERATIONS = "max_iterations"
STOP_PLATEAU = "plateau"


@dataclass(frozen=True)
class TrainSettings:
    """Hyperparameters of the ascent loop.

    ``learning_rate`` may be 0, which makes training a recorded no-op.
    ``plateau_tol`` = 0 disables the plateau stop entirely, so the loop runs
    exactly ``max_iterations`` updates. ``learning_rate_decay`` multiplies
    the rate after every update; the default 1.0 keeps it constant.
    """

    learning_rate: float = 0.2
    max_iterations: int = 500
    plateau_tol: float = 1e-7
    plateau_window: int = 10
    learning_rate_decay: float = 1.0

    def __post_init__(self) -> None:
        if not (self.learning_rate >= 0 and np.isfinite(self.learning_rate)):
            raise ValueError(f"learning_rate must be finite and >= 0, got {self.learning_rate}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be at least 1, got {self.max_iterations}")
        if not (self.plateau_tol >= 0 and np.isfinite(self.plateau_tol)):
            raise ValueError(f"plateau_tol must be finite and >= 0, got {self.plateau_tol}")
        if self.plateau_window < 1:
            raise ValueError(f"plateau_window must be at least 1, got {self.plateau_window}")
        if not 0 < self.learning_rate_decay <= 1:
            raise ValueError(
                f"learning_rate_decay must lie in (0, 1], got {self.learning_rate_decay}"
            )


@dataclass(frozen=True, eq=False)
class TrainingRecord:
    """Outcome of one training run.

    ``j_history[k]`` is the ensemble performance of the control after k
    updates, so the history starts at the initial control and has
    ``iterations_run + 1`` entries.
    """

    j_history: npt.NDArray[np.float64]
    final_control: ControlField
    iterations_run: int
    stop_reason: str


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """Fidelity statistics of one control over a set of test samples."""

    samples: tuple[UncertaintySample, ...]
    fidelities: npt.NDArray[np.float64]
    mean_fidelity: float
    min_fidelity: float
    max_fidelity: float
    histogram_edges: npt.NDArray[np.float64]
    histogram_counts: npt.NDArray[np.int64]

    @property
    def per_sample(self) -> Iterator[tuple[UncertaintySample, float]]:
        return zip(self.samples, self.fidelities)


def train(
    system: QuantumSystem,
    spec: UncertaintySpec,
    samples: tuple[UncertaintySample, ...] | list[UncertaintySample],
    init: ControlField,
    settings: TrainSettings,
) -> TrainingRecord:
    """Gradient-flow ascent of the mean performance over ``samples``.

    Each iteration computes the ensemble gradient at the current control,
    records the ensemble performance, and steps all amplitudes at once. The
    loop stops after ``max_iterations`` updates, or earlier when every
    performance change over the trailing ``plateau_window`` iterations is
    below ``plateau_tol``.

    Parameters
    ----------
    system : QuantumSystem
    spec : UncertaintySpec
    samples : sequence of UncertaintySample
        Training ensemble; must be nonempty.
    init : ControlField
        Starting control.
    settings : TrainSettings

    Returns
    -------
    TrainingRecord

    Raises
    ------
    RuntimeError
        When the performance or gradient turns non-finite, reporting the
        iteration where it happened.
    """
    if len(samples) == 0:
        raise ValueError("at least one training sample is required")
    control = init
    eta = settings.learning_rate
    history: list[float] = []
    stop_reason = STOP_MAX_ITERATIONS
    iterations = 0
    while True:
        grad, j = augmented_gradient(system, samples, spec, control)
        if not (np.isfinite(j) and np.all(np.isfinite(grad))):
            raise RuntimeError(f"non-finite performance or gradient at iteration {iterations}")
        history.append(j)
        if iterations >= settings.max_iterations:
            stop_reason = STOP_MAX_ITERATIONS
            break
        if settings.plateau_tol > 0 and iterations >= settings.plateau_window:
            recent = history[-(settings.plateau_window + 1):]
            if max(abs(b - a) for a, b in zip(recent, recent[1:])) < settings.plateau_tol:
                stop_reason = STOP_PLATEAU
                break
        control = control.with_amplitudes(control.amplitudes + eta * grad)
        eta *= settings.learning_rate_decay
        iterations += 1
    j_history = np.array(history)
    j_history.setflags(write=False)
    return TrainingRecord(
        j_history=j_history,
        final_control=control,
        iterations_run=iterations,
        stop_reason=stop_reason,
    )


def evaluate(
    system: QuantumSystem,
    spec: UncertaintySpec,
    control: ControlField,
    samples: tuple[UncertaintySample, ...] | list[UncertaintySample],
    histogram_bins: int = 50,
) -> EvaluationReport:
    """Fidelity of one control against every test sample.

    Samples are propagated in batches (split across worker threads when
    SLCQ_THREADS allows) and aggregated in sample order. The histogram
    spans [0, 1] with ``histogram_bins`` uniform bins.
    """
    if len(samples) == 0:
        raise ValueError("at least one test sample is required")
    if control.n_channels != system.n_controls:
        raise ValueError(
            f"control has {control.n_channels} channels, system has {system.n_controls}"
        )
    if histogram_bins < 1:
        raise ValueError(f"histogram_bins must be at least 1, got {histogram_bins}")
    n = len(samples)
    g, f = _factor_stack(list(samples), spec, control.midpoints)
    fidelities = np.empty(n)

    def work(start: int, stop: int) -> None:
        *_, overlaps = _evolve(system, g[start:stop], f[start:stop], control.amplitudes, control.dt)
        fidelities[start:stop] = np.abs(overlaps)

    run_chunked(work, n)
    counts, edges = np.histogram(fidelities, bins=histogram_bins, range=(0.0, 1.0))
    fidelities.setflags(write=False)
    return EvaluationReport(
        samples=tuple(samples),
        fidelities=fidelities,
        mean_fidelity=float(fidelities.mean()),
        min_fidelity=float(fidelities.min()),
        max_fidelity=float(fidelities.max()),
        histogram_edges=edges,
        histogram_counts=counts,
    )
