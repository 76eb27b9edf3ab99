"""Domain model: uncertain controlled Hamiltonians and piecewise-constant controls.

The physical setup is a closed d-level system with Hamiltonian

    H(t) = g(t) * H0 + sum_m f(t) * u_m(t) * H_m

where the factors g and f carry multiplicative uncertainty (either fixed
scalars or a cosine modulation 1 - p*cos(t)) and the control amplitudes
u_m are constant on each of Q equal slices of [0, T].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .linalg import HERMITIAN_ATOL, UNIT_NORM_ATOL, is_hermitian, is_unit_norm

__all__ = [
    "MODULATION_FORMS",
    "SAMPLE_KINDS",
    "QuantumSystem",
    "ControlField",
    "UncertaintySpec",
    "UncertaintySample",
    "modulation_value",
    "factors_at",
    "factor_profiles",
    "slice_midpoints",
    "hamiltonian_at",
    "sine_control",
    "zero_control",
]

MODULATION_FORMS = ("constant_one", "cosine")
SAMPLE_KINDS = ("static_factor", "modulated")


def _frozen_complex(a: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


def _frozen_real(a: npt.ArrayLike) -> npt.NDArray[np.float64]:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class QuantumSystem:
    """A closed quantum system with one drift and M control Hamiltonians.

    Parameters
    ----------
    h0 : array_like, shape (d, d)
        Drift Hamiltonian, Hermitian (hbar = 1 throughout).
    controls : array_like, shape (M, d, d)
        Control coupling operators, each Hermitian.
    psi0 : array_like, shape (d,)
        Initial state, unit norm.
    psi_target : array_like, shape (d,)
        Target state, unit norm.
    """

    h0: npt.NDArray[np.complex128]
    controls: npt.NDArray[np.complex128]
    psi0: npt.NDArray[np.complex128]
    psi_target: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        h0 = _frozen_complex(self.h0)
        controls = _frozen_complex(self.controls)
        psi0 = _frozen_complex(self.psi0)
        psi_target = _frozen_complex(self.psi_target)
        if h0.ndim != 2 or h0.shape[0] != h0.shape[1]:
            raise ValueError(f"h0 must be square, got shape {h0.shape}")
        d = h0.shape[0]
        if d < 2:
            raise ValueError(f"dimension must be at least 2, got {d}")
        if controls.ndim != 3 or controls.shape[1:] != (d, d):
            raise ValueError(f"controls must have shape (M, {d}, {d}), got {controls.shape}")
        if controls.shape[0] < 1:
            raise ValueError("at least one control Hamiltonian is required")
        if not is_hermitian(h0, atol=HERMITIAN_ATOL):
            raise ValueError("h0 is not Hermitian")
        if not is_hermitian(controls, atol=HERMITIAN_ATOL):
            raise ValueError("a control Hamiltonian is not Hermitian")
        for name, vec in (("psi0", psi0), ("psi_target", psi_target)):
            if vec.shape != (d,):
                raise ValueError(f"{name} must have shape ({d},), got {vec.shape}")
            if not is_unit_norm(vec, atol=UNIT_NORM_ATOL):
                raise ValueError(f"{name} is not unit-norm")
        object.__setattr__(self, "h0", h0)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "psi0", psi0)
        object.__setattr__(self, "psi_target", psi_target)

    @property
    def dimension(self) -> int:
        return self.h0.shape[0]

    @property
    def n_controls(self) -> int:
        return self.controls.shape[0]


@dataclass(frozen=True, eq=False)
class ControlField:
    """Piecewise-constant control amplitudes on Q equal slices of [0, T].

    Amplitude ``amplitudes[m, q]`` applies on the slice ``(q*dt, (q+1)*dt]``
    (0-based q here; user-facing slice indices elsewhere are 1-based).
    """

    duration: float
    n_slices: int
    amplitudes: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        amps = _frozen_real(self.amplitudes)
        if not (self.duration > 0 and np.isfinite(self.duration)):
            raise ValueError(f"duration must be positive and finite, got {self.duration}")
        if self.n_slices < 1:
            raise ValueError(f"n_slices must be at least 1, got {self.n_slices}")
        if amps.ndim != 2 or amps.shape[1] != self.n_slices:
            raise ValueError(
                f"amplitudes must have shape (M, {self.n_slices}), got {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes contain non-finite values")
        object.__setattr__(self, "duration", float(self.duration))
        object.__setattr__(self, "n_slices", int(self.n_slices))
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_channels(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dt(self) -> float:
        return self.duration / self.n_slices

    @property
    def midpoints(self) -> npt.NDArray[np.float64]:
        """Slice midpoint times t_q = (q - 1/2) * dt for q = 1..Q."""
        return slice_midpoints(self.duration, self.n_slices)

    def with_amplitudes(self, amplitudes: npt.ArrayLike) -> "ControlField":
        """Same grid, new amplitude values."""
        return ControlField(self.duration, self.n_slices, np.asarray(amplitudes, dtype=float))

    def refined(self, factor: int) -> "ControlField":
        """Subdivide each slice into ``factor`` equal pieces with the same amplitude.

        The refined field represents the identical physical control on a finer
        time grid, which is what a fine-timestep reference propagation needs.
        """
        if factor < 1:
            raise ValueError(f"refinement factor must be at least 1, got {factor}")
        return ControlField(
            self.duration,
            self.n_slices * factor,
            np.repeat(self.amplitudes, factor, axis=1),
        )


@dataclass(frozen=True)
class UncertaintySpec:
    """Bounds and functional forms of the multiplicative uncertainties.

    ``omega_bound`` bounds the drift factor parameter, ``theta_bound`` the
    control factor parameter; the forms select between a constant 1 and the
    modulation 1 - p*cos(t).
    """

    omega_bound: float
    theta_bound: float
    g_form: str = "cosine"
    f_form: str = "cosine"

    def __post_init__(self) -> None:
        if not 0.0 <= self.omega_bound <= 1.0:
            raise ValueError(f"omega_bound must lie in [0, 1], got {self.omega_bound}")
        if not 0.0 <= self.theta_bound <= 1.0:
            raise ValueError(f"theta_bound must lie in [0, 1], got {self.theta_bound}")
        for name, form in (("g_form", self.g_form), ("f_form", self.f_form)):
            if form not in MODULATION_FORMS:
                raise ValueError(f"{name} must be one of {MODULATION_FORMS}, got {form!r}")


@dataclass(frozen=True)
class UncertaintySample:
    """One realization of the uncertain factors.

    Two kinds exist: ``static_factor`` carries fixed multipliers (g_factor,
    f_factor) that do not depend on time, while ``modulated`` carries scalar
    parameters (omega, theta) fed through the spec's modulation forms.
    """

    kind: str
    g_factor: float = 1.0
    f_factor: float = 1.0
    omega: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in SAMPLE_KINDS:
            raise ValueError(f"kind must be one of {SAMPLE_KINDS}, got {self.kind!r}")

    @classmethod
    def static(cls, g_factor: float, f_factor: float = 1.0) -> "UncertaintySample":
        return cls(kind="static_factor", g_factor=float(g_factor), f_factor=float(f_factor))

    @classmethod
    def modulated(cls, omega: float, theta: float = 0.0) -> "UncertaintySample":
        return cls(kind="modulated", omega=float(omega), theta=float(theta))

    def check_against(self, spec: UncertaintySpec) -> None:
        """Raise ValueError when the sample lies outside the spec's bounds."""
        if self.kind == "static_factor":
            lo, hi = 1.0 - spec.omega_bound, 1.0 + spec.omega_bound
            if not lo <= self.g_factor <= hi:
                raise ValueError(f"g_factor {self.g_factor} outside [{lo}, {hi}]")
            lo, hi = 1.0 - spec.theta_bound, 1.0 + spec.theta_bound
            if not lo <= self.f_factor <= hi:
                raise ValueError(f"f_factor {self.f_factor} outside [{lo}, {hi}]")
        else:
            if abs(self.omega) > spec.omega_bound:
                raise ValueError(f"|omega| = {abs(self.omega)} exceeds {spec.omega_bound}")
            if abs(self.theta) > spec.theta_bound:
                raise ValueError(f"|theta| = {abs(self.theta)} exceeds {spec.theta_bound}")


def modulation_value(form: str, p: float, t: npt.ArrayLike) -> npt.NDArray[np.float64] | float:
    """Evaluate a modulation form at parameter ``p`` and time(s) ``t``.

    ``constant_one`` ignores both arguments and returns 1; ``cosine``
    returns 1 - p*cos(t). Scalar ``t`` gives a scalar result.
    """
    if form == "constant_one":
        return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0
    if form == "cosine":
        out = 1.0 - p * np.cos(t)
        return out if np.ndim(t) else float(out)
    raise ValueError(f"unknown modulation form {form!r}")


def factors_at(
    sample: UncertaintySample, spec: UncertaintySpec, t: float
) -> tuple[float, float]:
    """Factor pair (g, f) of one sample at time ``t``."""
    if sample.kind == "static_factor":
        return sample.g_factor, sample.f_factor
    g = modulation_value(spec.g_form, sample.omega, t)
    f = modulation_value(spec.f_form, sample.theta, t)
    return float(g), float(f)


def factor_profiles(
    sample: UncertaintySample, spec: UncertaintySpec, times: npt.ArrayLike
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Factor arrays (g, f) of one sample over an array of times."""
    ts = np.asarray(times, dtype=float)
    if sample.kind == "static_factor":
        return np.full(ts.shape, sample.g_factor), np.full(ts.shape, sample.f_factor)
    g = np.asarray(modulation_value(spec.g_form, sample.omega, ts), dtype=float)
    f = np.asarray(modulation_value(spec.f_form, sample.theta, ts), dtype=float)
    return np.broadcast_to(g, ts.shape).copy(), np.broadcast_to(f, ts.shape).copy()


def slice_midpoints(duration: float, n_slices: int) -> npt.NDArray[np.float64]:
    """Midpoint times (q - 1/2) * duration / n_slices for q = 1..n_slices."""
    dt = duration / n_slices
    return (np.arange(n_slices) + 0.5) * dt


def hamiltonian_at(
    system: QuantumSystem,
    sample: UncertaintySample,
    spec: UncertaintySpec,
    control: ControlField,
    q: int,
) -> npt.NDArray[np.complex128]:
    """Hamiltonian on slice ``q`` (1-based), frozen at the slice midpoint.

    Returns g(t_q) * H0 + sum_m f(t_q) * u_m[q] * H_m with
    t_q = (q - 1/2) * dt. The result is Hermitian whenever the system is
    well formed.
    """
    if control.n_channels != system.n_controls:
        raise ValueError(
            f"control has {control.n_channels} channels, system has {system.n_controls}"
        )
    if not 1 <= q <= control.n_slices:
        raise ValueError(f"slice index {q} outside 1..{control.n_slices}")
    t = (q - 0.5) * control.dt
    g, f = factors_at(sample, spec, t)
    coupled = np.tensordot(control.amplitudes[:, q - 1], system.controls, axes=(0, 0))
    return g * system.h0 + f * coupled


def sine_control(n_channels: int, n_slices: int, duration: float) -> ControlField:
    """Control with u_m[q] = sin(t_q) on every channel, t_q the slice midpoint."""
    if n_channels < 1:
        raise ValueError(f"n_channels must be at least 1, got {n_channels}")
    mid = slice_midpoints(duration, n_slices)
    amps = np.tile(np.sin(mid), (n_channels, 1))
    return ControlField(duration, n_slices, amps)


def zero_control(n_channels: int, n_slices: int, duration: float) -> ControlField:
    """All-zero control amplitudes."""
    if n_channels < 1:
        raise ValueError(f"n_channels must be at least 1, got {n_channels}")
    return ControlField(duration, n_slices, np.zeros((n_channels, n_slices)))
