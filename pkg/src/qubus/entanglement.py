"""Entanglement and state diagnostics: reductions, negativity, concurrence.

Density matrices are plain complex arrays; multipartite structure is passed
as a tuple of subsystem dimensions, e.g. ``(2, 2, M+1)`` for the full
system or ``(2, 2)`` for the two-qubit reduction. The two-qubit basis order
is (ee, eg, ge, gg).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError

# PPT eigenvalues with magnitude below this floor are treated as zero when
# summing negative eigenvalues, so negativity is exactly 0 at separable points
# instead of accumulating eigensolver noise.
EIGENVALUE_FLOOR = 1e-12

# Bipartition labels accepted by negativity().
QQ = "QQ"
QQ_VS_R = "QQ_vs_R"


def density_matrix(state) -> np.ndarray:
    """|psi><psi| for a state vector; density matrices pass through."""
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        return arr
    raise DimensionMismatchError(f"expected state vector or square matrix, got shape {arr.shape}")


def _check_dims(total: int, dims) -> tuple:
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != total:
        raise DimensionMismatchError(f"subsystem dims {dims} do not factor dimension {total}")
    return dims


def partial_trace(state, dims, keep) -> np.ndarray:
    """Reduced density matrix over the kept subsystems.

    Parameters
    ----------
    state : state vector or density matrix on the full space
    dims : tuple of subsystem dimensions, matching the tensor ordering
    keep : iterable of subsystem indices to keep (order preserved)
    """
    rho = density_matrix(state)
    dims = _check_dims(rho.shape[0], dims)
    keep = [int(k) for k in keep]
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatchError(f"keep indices {keep} out of range for {len(dims)} subsystems")

    n = len(dims)
    tensor = rho.reshape(dims + dims)
    # trace out the complement, highest index first so ket-axis numbers stay valid
    for idx in sorted(set(range(n)) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=idx, axis2=idx + tensor.ndim // 2)
    if keep != sorted(keep):
        pos = {k: i for i, k in enumerate(sorted(keep))}
        perm = tuple(pos[k] for k in keep)
        tensor = tensor.transpose(perm + tuple(p + len(keep) for p in perm))
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return tensor.reshape(kept_dim, kept_dim)


def partial_transpose(rho, dims, subsystem: int) -> np.ndarray:
    """Transpose the indices of one subsystem; involutive and spectrum-real."""
    rho = np.asarray(rho, dtype=complex)
    dims = _check_dims(rho.shape[0], dims)
    if subsystem < 0 or subsystem >= len(dims):
        raise DimensionMismatchError(f"subsystem {subsystem} out of range for {len(dims)} subsystems")
    n = len(dims)
    tensor = rho.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[subsystem], axes[n + subsystem] = axes[n + subsystem], axes[subsystem]
    return tensor.transpose(axes).reshape(rho.shape)


@dataclass(frozen=True)
class NegativityResult:
    """Negativity value with the PPT eigenvalues that produced it."""

    value: float
    bipartition: str
    negative_eigenvalues: np.ndarray


def negativity(rho, bipartition: str = QQ) -> NegativityResult:
    """Entanglement negativity max(0, -sum of negative PPT eigenvalues).

    ``"QQ"`` takes a 4x4 two-qubit density matrix and transposes qubit 2;
    ``"QQ_vs_R"`` takes the full 4(M+1)-dimensional density matrix and
    transposes the resonator factor. The spectrum of the partial transpose
    does not depend on which side is transposed.
    """
    rho = np.asarray(rho, dtype=complex)
    if bipartition == QQ:
        if rho.shape != (4, 4):
            raise DimensionMismatchError(f"QQ negativity expects a 4x4 matrix, got {rho.shape}")
        transposed = partial_transpose(rho, (2, 2), 1)
    elif bipartition == QQ_VS_R:
        if rho.shape[0] % 4 != 0:
            raise DimensionMismatchError(f"full-system dimension {rho.shape[0]} is not 4(M+1)")
        transposed = partial_transpose(rho, (4, rho.shape[0] // 4), 1)
    else:
        raise DimensionMismatchError(f"unknown bipartition {bipartition!r}")

    lam = np.linalg.eigvalsh((transposed + transposed.conj().T) / 2.0)
    neg = lam[lam < -EIGENVALUE_FLOOR]
    return NegativityResult(value=max(0.0, -float(neg.sum())), bipartition=bipartition, negative_eigenvalues=neg)


def qq_r_negativity_pure(rho_qq) -> float:
    """QQ-vs-R negativity of a *pure* full-system state from its two-qubit reduction.

    For a pure state with Schmidt coefficients sqrt(lam_i) across the
    bipartition, the negativity is ((sum_i sqrt(lam_i))^2 - 1)/2, and the
    lam_i are the eigenvalues of either reduced density matrix. Equivalent
    to the full partial transpose route but O(4^3) instead of O((4M)^3).
    """
    lam = np.linalg.eigvalsh(np.asarray(rho_qq, dtype=complex))
    # rank-deficient reductions produce exact zeros computed as ~1e-16, whose
    # square roots would otherwise pollute the Schmidt sum at the 1e-8 level
    lam = np.where(lam > EIGENVALUE_FLOOR, lam, 0.0)
    s = np.sqrt(lam).sum()
    return max(0.0, float((s * s - 1.0) / 2.0))


_SIGMA_YY = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
)


def concurrence(rho_qq) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = np.asarray(rho_qq, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionMismatchError(f"concurrence expects a 4x4 matrix, got {rho.shape}")
    rho_tilde = _SIGMA_YY @ rho.conj() @ _SIGMA_YY
    ev = np.linalg.eigvals(rho @ rho_tilde)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def purity(rho) -> float:
    """tr(rho^2); 1 for pure states."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.trace(rho @ rho).real)


def leakage(state, top_k: int) -> float:
    """Population in the top_k highest retained Fock levels, summed over qubits.

    A truncation diagnostic: values well below 1 certify that the Fock
    cutoff does not clip the dynamics.
    """
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        pops = np.abs(arr) ** 2
    else:
        pops = np.diag(arr).real
    nr = pops.shape[0] // 4
    if top_k < 0 or top_k > nr:
        raise DimensionMismatchError(f"top_k={top_k} out of range for {nr} Fock levels")
    per_level = pops.reshape(4, nr)
    return float(per_level[:, nr - top_k:].sum())
