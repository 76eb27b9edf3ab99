"""Uncertainty sampling: deterministic training grids and seeded random test sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .model import UncertaintySample, UncertaintySpec

__all__ = [
    "GridSpec",
    "RandomSpec",
    "axis_values",
    "training_grid",
    "random_test_samples",
]


@dataclass(frozen=True)
class GridSpec:
    """Per-axis point counts for the training grid."""

    n_omega: int
    n_theta: int = 1

    def __post_init__(self) -> None:
        if self.n_omega < 1:
            raise ValueError(f"n_omega must be at least 1, got {self.n_omega}")
        if self.n_theta < 1:
            raise ValueError(f"n_theta must be at least 1, got {self.n_theta}")


@dataclass(frozen=True)
class RandomSpec:
    """Size and seed of a random test set."""

    count: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be at least 1, got {self.count}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")


def axis_values(bound: float, n: int, center: float) -> npt.NDArray[np.float64]:
    """Midpoints of ``n`` equal subintervals of [center - bound, center + bound].

    The k-th value is center - bound + (2k - 1) * bound / n for k = 1..n,
    so the points are symmetric about the center with spacing 2*bound/n.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    k = np.arange(1, n + 1)
    return center - bound + (2 * k - 1) * bound / n


def training_grid(
    spec: UncertaintySpec,
    grid: GridSpec,
    kind: str = "static_factor",
) -> tuple[UncertaintySample, ...]:
    """Deterministic training samples on a uniform grid over the uncertainty set.

    For ``static_factor`` (the default) the grid runs over the factor values
    themselves: g in {1 - Omega + (2i-1)Omega/N_omega} and analogously for f.
    For ``modulated`` it runs over the modulation parameters omega and theta
    centered at 0. Either way an axis collapses to its single central value
    when its bound is 0 or its form is ``constant_one``, and the result is
    the Cartesian product in row-major order (g axis outer, f axis inner).

    Parameters
    ----------
    spec : UncertaintySpec
        Uncertainty bounds and forms.
    grid : GridSpec
        Points per axis.
    kind : str
        Sample kind to generate, ``static_factor`` or ``modulated``.

    Returns
    -------
    tuple of UncertaintySample
    """
    if kind not in ("static_factor", "modulated"):
        raise ValueError(f"unknown training sample kind {kind!r}")
    center = 1.0 if kind == "static_factor" else 0.0

    g_collapsed = spec.omega_bound == 0.0 or spec.g_form == "constant_one"
    f_collapsed = spec.theta_bound == 0.0 or spec.f_form == "constant_one"
    g_axis = np.array([center]) if g_collapsed else axis_values(spec.omega_bound, grid.n_omega, center)
    f_axis = np.array([center]) if f_collapsed else axis_values(spec.theta_bound, grid.n_theta, center)

    samples = []
    for gv in g_axis:
        for fv in f_axis:
            if kind == "static_factor":
                samples.append(UncertaintySample.static(gv, fv))
            else:
                samples.append(UncertaintySample.modulated(gv, fv))
    return tuple(samples)


def random_test_samples(
    spec: UncertaintySpec, rnd: RandomSpec
) -> tuple[UncertaintySample, ...]:
    """Seeded uniform random samples of the modulated kind.

    Draws ``count`` omegas from Uniform[-Omega, Omega] in one batch, then
    ``count`` thetas from Uniform[-Theta, Theta] unless f_form is
    ``constant_one``, in which case theta is fixed at 0 without consuming
    generator state. Identical (spec, rnd) always reproduce the identical
    sequence.
    """
    rng = np.random.default_rng(rnd.seed)
    omegas = rng.uniform(-spec.omega_bound, spec.omega_bound, rnd.count)
    if spec.f_form == "constant_one":
        thetas = np.zeros(rnd.count)
    else:
        thetas = rng.uniform(-spec.theta_bound, spec.theta_bound, rnd.count)
    return tuple(
        UncertaintySample.modulated(o, t) for o, t in zip(omegas, thetas)
    )
