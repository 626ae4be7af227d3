"""Two qubits coupled to a single resonator mode: operators, Hamiltonian, states.

Conventions (fixed here, used everywhere in this package)
---------------------------------------------------------
* Qubit basis ordering: ``|e> = index 0``, ``|g> = index 1`` and
  ``sigma_z = diag(+1, -1)``, so the excited state has energy +Omega/2.
* The ladder operators carry a factor of two: ``sigma_plus = sigma_x +
  i*sigma_y = [[0, 2], [0, 0]]`` and ``sigma_minus = sigma_plus^dag``, i.e.
  ``sigma_minus |e> = 2 |g>``. Combined with the coupling
  ``-(gamma/2) (a sigma_plus + a^dag sigma_minus)`` this makes the effective
  vacuum Rabi frequency of the symmetric one-excitation manifold
  ``sqrt(2) * gamma``, which is what puts the first two-qubit entanglement
  maximum at ``omega*t = pi / (2*sqrt(2)*gamma)`` (~111 for gamma = 0.01).
* Tensor ordering: qubit1 (x) qubit2 (x) resonator. Basis index of
  ``(q1, q2, n)`` is ``2*(M+1)*q1 + (M+1)*q2 + n`` with e = 0, g = 1.
* ``omega_r`` is the unit of energy/frequency; all times are the
  dimensionless ``omega*t`` and default parameters put both qubits on
  resonance with the resonator.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, PhotonOverflowError
from .linalg import func_hermitian, kron

E = 0
G = 1

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
# Factor-2 convention: sigma_plus = sigma_x + i sigma_y (not halved).
SIGMA_PLUS = SIGMA_X + 1.0j * SIGMA_Y
SIGMA_MINUS = SIGMA_PLUS.conj().T

NONLINEARITY_KINDS = ("none", "quadratic", "cosine")


@dataclass
class SystemSpec:
    """Physical parameters of the two-qubit / resonator system.

    Frequencies are in units of ``omega_r``; ``fock_cutoff`` is the highest
    retained Fock level M (photon numbers 0..M).
    """

    omega1: float = 1.0
    omega2: float = 1.0
    omega_r: float = 1.0
    gamma: float = 0.01
    nonlinearity: str = "none"
    alpha: float = 0.0
    fock_cutoff: int = 40

    def __post_init__(self):
        if self.gamma < 0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.fock_cutoff < 1:
            raise ConfigError(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")
        if self.nonlinearity not in NONLINEARITY_KINDS:
            raise ConfigError(
                f"unknown nonlinearity {self.nonlinearity!r}; expected one of {NONLINEARITY_KINDS}"
            )

    @property
    def dimension(self) -> int:
        return 4 * (self.fock_cutoff + 1)

    def with_alpha(self, alpha: float) -> "SystemSpec":
        """Copy of this spec with a different nonlinearity amplitude."""
        return replace(self, alpha=float(alpha))

    def with_fock_cutoff(self, m: int) -> "SystemSpec":
        return replace(self, fock_cutoff=int(m))


@dataclass
class ProductStateSpec:
    """Initial product state: one factor per qubit plus the resonator.

    Qubit factors are ``"e"``/``"g"`` or a normalized 2-component amplitude
    pair in the (e, g) basis. The resonator factor is a Fock occupation
    number or a normalized (M+1)-component amplitude vector.
    """

    q1: object = "g"
    q2: object = "g"
    photons: object = 0


def annihilation(m: int) -> np.ndarray:
    """Annihilation operator on the truncated Fock space, a[n-1, n] = sqrt(n)."""
    if m < 1:
        raise ConfigError(f"Fock cutoff must be >= 1, got {m}")
    return np.diag(np.sqrt(np.arange(1.0, m + 1)), k=1).astype(complex)


def quadrature(m: int) -> np.ndarray:
    """The operator X = a + a^dag on the truncated space."""
    a = annihilation(m)
    return a + a.conj().T


def quadratic_potential(m: int, alpha: float) -> np.ndarray:
    """Squeezing-type nonlinearity alpha (a^2 + (a^dag)^2); couples n <-> n+-2."""
    a = annihilation(m)
    return alpha * (a @ a + a.conj().T @ a.conj().T)


def cosine_potential(m: int, alpha: float) -> np.ndarray:
    """Cosine nonlinearity alpha cos(a + a^dag) via spectral calculus.

    The cosine of the truncated X is taken (not the truncation of the
    infinite-dimensional cosine); matrix elements with m, n well below the
    cutoff are insensitive to M, e.g. <0|cos X|0> = exp(-1/2) to better
    than 1e-10 already at M = 40.
    """
    return alpha * func_hermitian(quadrature(m), np.cos)


def resonator_potential(spec: SystemSpec) -> np.ndarray:
    """Nonlinear part of the resonator Hamiltonian selected by the spec."""
    m = spec.fock_cutoff
    if spec.nonlinearity == "none":
        return np.zeros((m + 1, m + 1), dtype=complex)
    if spec.nonlinearity == "quadratic":
        return quadratic_potential(m, spec.alpha)
    return cosine_potential(m, spec.alpha)


def _kron3(a, b, c) -> np.ndarray:
    return kron(kron(a, b), c)


def build_hamiltonian(spec: SystemSpec) -> np.ndarray:
    """Full Hamiltonian on the 4(M+1)-dimensional space, ordering Q1 (x) Q2 (x) R.

    H = (Omega1/2) sigma_z + (Omega2/2) sigma_z + omega_r (a^dag a + 1/2) + V_R
        - (gamma/2) (a sigma_plus + a^dag sigma_minus)   for each qubit,

    with the factor-2 sigma_plus/minus convention (module docstring).
    """
    m = spec.fock_cutoff
    a = annihilation(m)
    ad = a.conj().T
    iq = np.eye(2, dtype=complex)
    ir = np.eye(m + 1, dtype=complex)

    h_r = spec.omega_r * (ad @ a + 0.5 * ir) + resonator_potential(spec)
    h = (
        _kron3(0.5 * spec.omega1 * SIGMA_Z, iq, ir)
        + _kron3(iq, 0.5 * spec.omega2 * SIGMA_Z, ir)
        + _kron3(iq, iq, h_r)
        - 0.5 * spec.gamma * (_kron3(SIGMA_PLUS, iq, a) + _kron3(SIGMA_MINUS, iq, ad))
        - 0.5 * spec.gamma * (_kron3(iq, SIGMA_PLUS, a) + _kron3(iq, SIGMA_MINUS, ad))
    )
    return h


def total_excitation_operator(m: int) -> np.ndarray:
    """N_exc = |e><e|_1 + |e><e|_2 + a^dag a; conserved when the resonator is linear."""
    a = annihilation(m)
    iq = np.eye(2, dtype=complex)
    ir = np.eye(m + 1, dtype=complex)
    # sigma_plus sigma_minus / 4 = |e><e| under the factor-2 convention
    proj_e = SIGMA_PLUS @ SIGMA_MINUS / 4.0
    return _kron3(proj_e, iq, ir) + _kron3(iq, proj_e, ir) + _kron3(iq, iq, a.conj().T @ a)


def basis_index(q1: int, q2: int, n: int, m: int) -> int:
    """Index of the basis product state |q1 q2 n> (e = 0, g = 1)."""
    return 2 * (m + 1) * q1 + (m + 1) * q2 + n


_QUBIT_SHORTHAND = {"e": np.array([1.0, 0.0], dtype=complex), "g": np.array([0.0, 1.0], dtype=complex)}


def _qubit_factor(value, label: str) -> np.ndarray:
    if isinstance(value, str):
        if value not in _QUBIT_SHORTHAND:
            raise ConfigError(f"{label} must be 'e', 'g' or a 2-component amplitude pair, got {value!r}")
        return _QUBIT_SHORTHAND[value]
    amp = np.asarray(value, dtype=complex)
    if amp.shape != (2,):
        raise ConfigError(f"{label} amplitude pair must have 2 components, got shape {amp.shape}")
    if abs(np.linalg.norm(amp) - 1.0) > 1e-12:
        raise ConfigError(f"{label} amplitudes are not normalized (norm {np.linalg.norm(amp):.15f})")
    return amp


def _photon_factor(value, m: int) -> np.ndarray:
    if isinstance(value, (int, np.integer)):
        n = int(value)
        if n < 0:
            raise ConfigError(f"photon number must be >= 0, got {n}")
        if n > m:
            raise PhotonOverflowError(f"photon number {n} exceeds Fock cutoff M={m}")
        vec = np.zeros(m + 1, dtype=complex)
        vec[n] = 1.0
        return vec
    amp = np.asarray(value, dtype=complex)
    if amp.shape != (m + 1,):
        raise PhotonOverflowError(
            f"photon amplitude vector must have M+1={m + 1} components, got {amp.shape}"
        )
    if abs(np.linalg.norm(amp) - 1.0) > 1e-12:
        raise ConfigError(f"photon amplitudes are not normalized (norm {np.linalg.norm(amp):.15f})")
    return amp


def product_state(state: ProductStateSpec, m: int) -> np.ndarray:
    """Normalized state vector |q1> (x) |q2> (x) |psi_R> of length 4(M+1)."""
    v1 = _qubit_factor(state.q1, "q1")
    v2 = _qubit_factor(state.q2, "q2")
    vr = _photon_factor(state.photons, m)
    return np.kron(np.kron(v1, v2), vr)


def alpha_from_flux(ej0: float, flux_ratio: float) -> float:
    """Nonlinearity amplitude of a flux-tunable junction loop: 2 E_J^0 cos(pi phi_c/phi_0)."""
    return 2.0 * ej0 * np.cos(np.pi * flux_ratio)
