"""Shared fixtures: the three-level benchmark system and random instance helpers."""

import numpy as np
import pytest

from slcq import ControlField, QuantumSystem, UncertaintySample, UncertaintySpec

H0 = np.diag([1.5, 1.0, 0.0]).astype(complex)
H1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
H2 = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]])
H3 = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex)
H4 = np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]])
PSI0 = np.ones(3, dtype=complex) / np.sqrt(3)
PSI_TARGET = np.array([0, 0, 1], dtype=complex)


def make_vsystem() -> QuantumSystem:
    return QuantumSystem(
        h0=H0,
        controls=np.array([H1, H2, H3, H4]),
        psi0=PSI0,
        psi_target=PSI_TARGET,
    )


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_system(rng: np.random.Generator, d: int = 3, m: int = 2) -> QuantumSystem:
    return QuantumSystem(
        h0=random_hermitian(rng, d),
        controls=np.array([random_hermitian(rng, d) for _ in range(m)]),
        psi0=random_state(rng, d),
        psi_target=random_state(rng, d),
    )


def random_control(rng: np.random.Generator, m: int, q: int, duration: float = 2.0) -> ControlField:
    return ControlField(duration, q, rng.uniform(-1.0, 1.0, (m, q)))


@pytest.fixture(scope="session")
def vsystem() -> QuantumSystem:
    return make_vsystem()


@pytest.fixture(scope="session")
def exp1_spec() -> UncertaintySpec:
    return UncertaintySpec(0.28, 0.0, g_form="cosine", f_form="constant_one")


@pytest.fixture(scope="session")
def exp2_spec() -> UncertaintySpec:
    return UncertaintySpec(0.28, 0.28, g_form="cosine", f_form="cosine")


@pytest.fixture
def nominal() -> UncertaintySample:
    return UncertaintySample.modulated(0.0, 0.0)
