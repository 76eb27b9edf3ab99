"""Small linear-algebra helpers for unitary quantum dynamics.

Everything here works on single matrices or on stacks whose last two axes
are the matrix axes, mirroring the numpy.linalg conventions.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

__all__ = [
    "HERMITIAN_ATOL",
    "UNITARY_ATOL",
    "UNIT_NORM_ATOL",
    "is_hermitian",
    "is_unitary",
    "is_unit_norm",
    "inner_product",
    "eig_hermitian",
    "expm_unitary",
]

ComplexArray = npt.NDArray[np.complexfloating]
RealArray = npt.NDArray[np.floating]

HERMITIAN_ATOL = 1e-12
UNITARY_ATOL = 1e-10
UNIT_NORM_ATOL = 1e-10


def is_hermitian(a: npt.ArrayLike, atol: float = HERMITIAN_ATOL) -> bool:
    """Return True when ``a`` equals its conjugate transpose to within ``atol``.

    Accepts a single square matrix or a stack of them; a stack is Hermitian
    only if every member is.
    """
    arr = np.asarray(a)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise ValueError(f"expected square matrix axes, got shape {arr.shape}")
    return bool(np.max(np.abs(arr - np.conj(np.swapaxes(arr, -1, -2)))) <= atol)


def is_unitary(a: npt.ArrayLike, atol: float = UNITARY_ATOL) -> bool:
    """Return True when ``a^dagger a`` is the identity to within ``atol``."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise ValueError(f"expected square matrix axes, got shape {arr.shape}")
    prod = np.swapaxes(arr, -1, -2).conj() @ arr
    eye = np.eye(arr.shape[-1])
    return bool(np.max(np.abs(prod - eye)) <= atol)


def is_unit_norm(v: npt.ArrayLike, atol: float = UNIT_NORM_ATOL) -> bool:
    """Return True when the vector 2-norm of ``v`` is 1 to within ``atol``."""
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got shape {arr.shape}")
    return bool(abs(np.linalg.norm(arr) - 1.0) <= atol)


def inner_product(a: npt.ArrayLike, b: npt.ArrayLike) -> complex:
    """Hermitian inner product <a|b>, conjugate-linear in the first argument."""
    av = np.asarray(a)
    bv = np.asarray(b)
    if av.shape != bv.shape or av.ndim != 1:
        raise ValueError(f"incompatible vector shapes {av.shape} and {bv.shape}")
    return complex(np.vdot(av, bv))


def eig_hermitian(h: npt.ArrayLike) -> tuple[RealArray, ComplexArray]:
    """Eigendecomposition of a Hermitian matrix (or stack of them).

    Parameters
    ----------
    h : array_like
        Hermitian matrix with shape ``(..., d, d)``.

    Returns
    -------
    eigenvalues : ndarray, shape (..., d)
        Real eigenvalues in ascending order.
    eigenvectors : ndarray, shape (..., d, d)
        Orthonormal eigenvectors as columns, so ``h = V diag(w) V^dagger``.

    Raises
    ------
    ValueError
        If the input is not Hermitian to the module tolerance.
    """
    arr = np.asarray(h, dtype=complex)
    if not is_hermitian(arr):
        raise ValueError("matrix is not Hermitian")
    eigenvalues, eigenvectors = np.linalg.eigh(arr)
    return eigenvalues, eigenvectors


def expm_unitary(h: npt.ArrayLike, tau: float) -> ComplexArray:
    """Unitary propagator ``exp(-i tau h)`` for Hermitian ``h``.

    Computed through the eigendecomposition, which keeps the result unitary
    to machine precision regardless of ``tau``. Stacks are handled batchwise.
    """
    eigenvalues, eigenvectors = eig_hermitian(h)
    phases = np.exp(-1j * tau * eigenvalues)
    return np.matmul(
        eigenvectors * phases[..., None, :],
        np.swapaxes(eigenvectors, -1, -2).conj(),
    )
