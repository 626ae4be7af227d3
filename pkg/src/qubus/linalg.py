"""Dense complex linear algebra kernel.

Operators and states are plain ``numpy.ndarray`` objects with complex128
entries. Hermitian eigenproblems go through LAPACK (``numpy.linalg.eigh``,
Householder reduction + implicit-shift iteration), which is robust at the
dimensions this package needs (<= a few hundred). Everything here is a pure
function of its inputs and safe to call from concurrent tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError, NoConvergenceError, NotHermitianError

# Relative tolerance max|A - A^dag| / max|A| below which a matrix is accepted
# as Hermitian and symmetrized before eigensolving.
HERMITICITY_RTOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex128 array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got ndim={m.ndim}")
    return m


def kron(a, b) -> np.ndarray:
    """Tensor (Kronecker) product: (A otimes B)[ip+k, jq+l] = A[i,j] B[k,l]."""
    return np.kron(as_matrix(a), as_matrix(b))


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def matvec(a, v) -> np.ndarray:
    a = as_matrix(a)
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or a.shape[1] != v.shape[0]:
        raise DimensionMismatchError(f"cannot apply {a.shape} to vector of length {v.shape}")
    return a @ v


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def trace(a) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"trace of non-square matrix {a.shape}")
    return complex(np.trace(a))


def hermiticity_defect(a) -> float:
    """max|A - A^dag| relative to max|A| (0 for the zero matrix)."""
    a = as_matrix(a)
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)) / scale)


def is_hermitian(a, rtol: float = HERMITICITY_RTOL) -> bool:
    return hermiticity_defect(a) <= rtol


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition A = V diag(w) V^dag of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` holds the
    orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eig(a, rtol: float = HERMITICITY_RTOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as (A + A^dag)/2 first, which suppresses
    round-off accumulated by callers; inputs outside the Hermiticity
    tolerance are rejected instead of silently symmetrized.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"eigendecomposition of non-square matrix {a.shape}")
    defect = hermiticity_defect(a)
    if defect > rtol:
        raise NotHermitianError(f"matrix is not Hermitian: relative defect {defect:.3e} > {rtol:.1e}")
    h = (a + a.conj().T) / 2.0
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigensolver failed to converge: {exc}") from exc
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def func_hermitian(a, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix via spectral calculus.

    Returns V diag(f(w)) V^dag, re-symmetrized so the result is Hermitian to
    machine precision.
    """
    eig = hermitian_eig(a)
    out = (eig.eigenvectors * f(eig.eigenvalues)) @ eig.eigenvectors.conj().T
    return (out + out.conj().T) / 2.0
