"""Time-sliced Schrödinger propagation for sampled uncertain systems.

One unitary per slice, with the Hamiltonian frozen at the slice midpoint;
cumulative propagators and the state trajectory are kept so that gradient
computations cost O(Q) rather than O(Q^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .linalg import eig_hermitian, inner_product, is_unit_norm
from .model import ControlField, QuantumSystem, UncertaintySample, UncertaintySpec, factor_profiles

__all__ = ["Trajectory", "propagate", "fidelity", "performance"]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Everything produced by propagating one sample.

    ``slice_propagators[q]`` is exp(-i*dt*H(t_{q+1})) for the (q+1)-th slice,
    ``cumulative[q]`` the product of the first q slice propagators (so
    ``cumulative[0]`` is the identity), ``states[q]`` the state after q
    slices, and ``final_overlap`` the inner product of the final state with
    the target. The spectral data of each slice Hamiltonian (``eigenvalues``,
    ``eigenvectors``) are retained for reuse by gradient computations.
    """

    slice_propagators: npt.NDArray[np.complex128]
    cumulative: npt.NDArray[np.complex128]
    states: npt.NDArray[np.complex128]
    final_overlap: complex
    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: npt.NDArray[np.complex128]

    @property
    def n_slices(self) -> int:
        return self.slice_propagators.shape[0]

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    @property
    def final_state(self) -> npt.NDArray[np.complex128]:
        return self.states[-1]


def _evolve(
    system: QuantumSystem,
    g: npt.NDArray[np.float64],
    f: npt.NDArray[np.float64],
    amplitudes: npt.NDArray[np.float64],
    dt: float,
):
    """Batched propagation over a stack of factor profiles.

    ``g`` and ``f`` have shape (N, Q); all N samples share the same control
    amplitudes (M, Q). Returns per-slice spectral data, slice propagators,
    cumulative propagators, states, and final overlaps, each with a leading
    sample axis.
    """
    coupled = np.einsum("mq,mij->qij", amplitudes, system.controls)
    h = g[:, :, None, None] * system.h0 + f[:, :, None, None] * coupled
    lam, vecs = eig_hermitian(h)
    phases = np.exp(-1j * dt * lam)
    props = np.einsum("nqik,nqk,nqjk->nqij", vecs, phases, vecs.conj())
    n, q_count, d = lam.shape
    cumulative = np.empty((n, q_count + 1, d, d), dtype=complex)
    cumulative[:, 0] = np.eye(d)
    for q in range(q_count):
        cumulative[:, q + 1] = props[:, q] @ cumulative[:, q]
    states = np.einsum("nqij,j->nqi", cumulative, system.psi0)
    overlaps = states[:, -1].conj() @ system.psi_target
    return lam, vecs, props, cumulative, states, overlaps


def _factor_stack(
    samples: tuple[UncertaintySample, ...] | list[UncertaintySample],
    spec: UncertaintySpec,
    times: npt.NDArray[np.float64],
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Stack per-sample factor profiles into (N, Q) arrays."""
    g = np.empty((len(samples), times.size))
    f = np.empty((len(samples), times.size))
    for i, sample in enumerate(samples):
        g[i], f[i] = factor_profiles(sample, spec, times)
    return g, f


def propagate(
    system: QuantumSystem,
    sample: UncertaintySample,
    spec: UncertaintySpec,
    control: ControlField,
) -> Trajectory:
    """Propagate the initial state through all Q slices for one sample.

    Parameters
    ----------
    system : QuantumSystem
    sample : UncertaintySample
        Realization of the uncertain factors.
    spec : UncertaintySpec
        Bounds and modulation forms interpreting the sample.
    control : ControlField
        Piecewise-constant amplitudes; channel count must match the system.

    Returns
    -------
    Trajectory
    """
    if control.n_channels != system.n_controls:
        raise ValueError(
            f"control has {control.n_channels} channels, system has {system.n_controls}"
        )
    g, f = _factor_stack([sample], spec, control.midpoints)
    lam, vecs, props, cumulative, states, overlaps = _evolve(
        system, g, f, control.amplitudes, control.dt
    )
    arrays = (props[0], cumulative[0], states[0], lam[0], vecs[0])
    for arr in arrays:
        arr.setflags(write=False)
    return Trajectory(
        slice_propagators=arrays[0],
        cumulative=arrays[1],
        states=arrays[2],
        final_overlap=overlaps[0],
        eigenvalues=arrays[3],
        eigenvectors=arrays[4],
    )


def fidelity(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    """Overlap magnitude |<a|b>| between two unit-norm states.

    Raises ValueError when either vector deviates from unit norm by more
    than 1e-6.
    """
    av = np.asarray(a, dtype=complex)
    bv = np.asarray(b, dtype=complex)
    for name, vec in (("a", av), ("b", bv)):
        if not is_unit_norm(vec, atol=1e-6):
            raise ValueError(f"state {name} is not normalized")
    return abs(inner_product(av, bv))


def performance(trajectory: Trajectory) -> float:
    """Squared final-overlap magnitude, the quantity the training ascends."""
    return float(np.abs(np.complex128(trajectory.final_overlap)) ** 2)
