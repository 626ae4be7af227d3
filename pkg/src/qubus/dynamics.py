"""Time evolution: exact unitary propagation and Lindblad master-equation integration.

Unitary dynamics uses the one-time spectral decomposition of the (time
independent) Hamiltonian, so states can be evaluated at arbitrary times with
no step-size error. Open-system dynamics integrates the master equation

    d rho / dt = -i [H, rho] - 1/2 sum_k (C_k^dag C_k rho + rho C_k^dag C_k
                                          - 2 C_k rho C_k^dag)

with a classical fixed-step 4th-order Runge-Kutta scheme, re-Hermitizing the
state after every step. The step is halved automatically until the trace
drift over the whole run stays below ``TRACE_TOLERANCE``.

Collapse operators are a/sqrt(T_R) for the resonator and sigma_minus/sqrt(T_Q)
per qubit, converted to dimensionless time by the physical resonator
frequency: rate = 1/(T * omega_phys). With the factor-2 sigma_minus
convention the effective qubit population decay rate is 4/T_Q; set
``standard_lowering=True`` on the LindbladSpec for the conventional
[[0,0],[1,0]] lowering operator (rate 1/T_Q) instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from . import model
from .errors import (
    ConfigError,
    DimensionMismatchError,
    NegativeEigenvalueError,
    TraceDriftError,
)
from .linalg import hermitian_eig

DEFAULT_STEP = 0.05
TRACE_TOLERANCE = 1e-6
MIN_EIGENVALUE_TOLERANCE = -1e-6
MAX_STEP_HALVINGS = 6
# Default physical resonator frequency (rad/s) used to convert lifetimes in
# seconds to dimensionless damping rates; a configuration default for a
# typical microwave resonator, not a derived quantity.
DEFAULT_OMEGA_PHYS = 2.0 * np.pi * 5e9


@dataclass
class LindbladSpec:
    """Damping lifetimes (seconds) and the seconds-to-dimensionless conversion."""

    t_r: float = 5e-5
    t_q1: float = 1e-5
    t_q2: float = 1e-5
    omega_phys: float = DEFAULT_OMEGA_PHYS
    standard_lowering: bool = False

    def __post_init__(self):
        for name in ("t_r", "t_q1", "t_q2", "omega_phys"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")

    def dimensionless_rates(self) -> tuple[float, float, float]:
        """(resonator, qubit1, qubit2) rates per unit omega*t, before any sigma factor."""
        return (
            1.0 / (self.t_r * self.omega_phys),
            1.0 / (self.t_q1 * self.omega_phys),
            1.0 / (self.t_q2 * self.omega_phys),
        )


@dataclass
class Trajectory:
    """Sampled time series of pure states (n, d) or density matrices (n, d, d)."""

    times: np.ndarray
    states: np.ndarray
    kind: str  # "pure" | "density"
    system: object = None
    initial: object = None
    step: float = None  # integrator step actually used (density trajectories)

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"


class UnitaryPropagator:
    """Exact propagator psi(t) = V exp(-i w t) V^dag psi0 for time-independent H."""

    def __init__(self, h, psi0):
        h = np.asarray(h, dtype=complex)
        psi0 = np.asarray(psi0, dtype=complex)
        if psi0.ndim != 1 or h.shape != (psi0.shape[0], psi0.shape[0]):
            raise DimensionMismatchError(
                f"Hamiltonian {h.shape} does not match state of length {psi0.shape}"
            )
        eig = hermitian_eig(h)
        self._w = eig.eigenvalues
        self._v = eig.eigenvectors
        self._coeffs = self._v.conj().T @ psi0

    def state(self, t: float) -> np.ndarray:
        return self._v @ (np.exp(-1.0j * self._w * t) * self._coeffs)


def evolve_unitary(h, psi0, times, system=None, initial=None) -> Trajectory:
    """Evolve a pure state to each sample time; exact at arbitrary times."""
    prop = UnitaryPropagator(h, psi0)
    times = np.asarray(times, dtype=float)
    states = np.empty((times.shape[0], np.asarray(psi0).shape[0]), dtype=complex)
    for i, t in enumerate(times):
        states[i] = prop.state(t)
    return Trajectory(times=times, states=states, kind="pure", system=system, initial=initial)


def collapse_operators(spec: LindbladSpec, fock_cutoff: int) -> list:
    """Dense collapse operators on the full space, in dimensionless time.

    Order: resonator a/sqrt(T_R*omega_phys), then sigma_minus/sqrt(T_Qi*omega_phys)
    for qubit 1 and qubit 2.
    """
    m = fock_cutoff
    a = model.annihilation(m)
    iq = np.eye(2, dtype=complex)
    ir = np.eye(m + 1, dtype=complex)
    lower = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex) if spec.standard_lowering else model.SIGMA_MINUS
    rate_r, rate_q1, rate_q2 = spec.dimensionless_rates()
    return [
        np.sqrt(rate_r) * np.kron(np.kron(iq, iq), a),
        np.sqrt(rate_q1) * np.kron(np.kron(lower, iq), ir),
        np.sqrt(rate_q2) * np.kron(np.kron(iq, lower), ir),
    ]


def lindblad_rhs(rho, h, collapse_ops) -> np.ndarray:
    """Right-hand side of the master equation for one density matrix.

    Trace-free and Hermiticity-preserving by construction: the output is the
    generator -i[H, rho] - 1/2 sum_k (C^dag C rho + rho C^dag C - 2 C rho C^dag).
    """
    rho = np.asarray(rho, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if rho.shape != h.shape:
        raise DimensionMismatchError(f"rho {rho.shape} does not match H {h.shape}")
    out = -1.0j * (h @ rho - rho @ h)
    for c in collapse_ops:
        c = np.asarray(c, dtype=complex)
        if c.shape != rho.shape:
            raise DimensionMismatchError(f"collapse operator {c.shape} does not match rho {rho.shape}")
        cd = c.conj().T
        cdc = cd @ c
        out -= 0.5 * (cdc @ rho + rho @ cdc) - c @ rho @ cd
    return out


def _structured_rhs(h, spec: LindbladSpec, fock_cutoff: int):
    """Fast master-equation RHS for the standard local-damping channels.

    Algebraically identical to ``lindblad_rhs`` with ``collapse_operators``:
    all three C^dag C are diagonal, so the anticommutator folds into
    G = iH + K with K diagonal, and the jump terms are index shifts applied
    by slicing instead of O(d^3) products.
    """
    nr = fock_cutoff + 1
    d = 4 * nr
    weight = 1.0 if spec.standard_lowering else 4.0
    rate_r, rate_q1, rate_q2 = spec.dimensionless_rates()
    rate_q1 *= weight
    rate_q2 *= weight

    n_diag = np.tile(np.arange(nr, dtype=float), 4)
    e1_diag = np.kron(np.array([1.0, 0.0]), np.ones(2 * nr))
    e2_diag = np.kron(np.array([1.0, 1.0]), np.kron(np.array([1.0, 0.0]), np.ones(nr)))
    k_diag = 0.5 * (rate_r * n_diag + rate_q1 * e1_diag + rate_q2 * e2_diag)

    g = 1.0j * np.asarray(h, dtype=complex)
    g[np.diag_indices(d)] += k_diag
    gd = g.conj().T
    sq = np.sqrt(np.arange(1.0, nr))
    sq_row = sq.reshape(1, 1, nr - 1, 1, 1, 1)
    sq_col = sq.reshape(1, 1, 1, 1, 1, nr - 1)

    def rhs(rho):
        out = -(g @ rho + rho @ gd)
        r6 = rho.reshape(2, 2, nr, 2, 2, nr)
        o6 = out.reshape(2, 2, nr, 2, 2, nr)
        o6[:, :, :-1, :, :, :-1] += rate_r * r6[:, :, 1:, :, :, 1:] * sq_row * sq_col
        o6[1, :, :, 1, :, :] += rate_q1 * r6[0, :, :, 0, :, :]
        o6[:, 1, :, :, 1, :] += rate_q2 * r6[:, 0, :, :, 0, :]
        return out

    return rhs


def _rk4_step(rhs, rho, h_step):
    k1 = rhs(rho)
    k2 = rhs(rho + (0.5 * h_step) * k1)
    k3 = rhs(rho + (0.5 * h_step) * k2)
    k4 = rhs(rho + h_step * k3)
    rho = rho + (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return (rho + rho.conj().T) / 2.0  # re-Hermitize every step


def master_equation_samples(rhs, rho0, times, step, check_positivity=True, diagnostics=None):
    """Yield (t, rho) at each sample time; single fixed-step RK4 pass.

    Raises TraceDriftError as soon as |tr rho - 1| exceeds TRACE_TOLERANCE
    and NegativeEigenvalueError if a sampled state develops an eigenvalue
    below MIN_EIGENVALUE_TOLERANCE. When a ``diagnostics`` dict is passed,
    the measured worst-case drift, smallest eigenvalue and step are recorded
    in it as the run progresses.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.shape[0] < 1 or np.any(np.diff(times) < 0) or times[0] < 0:
        raise ConfigError("sample times must be ascending and non-negative")
    rho = np.array(rho0, dtype=complex)
    t_prev = 0.0
    if diagnostics is not None:
        diagnostics.update({"max_trace_drift": 0.0, "min_eigenvalue": np.inf, "step": step})
    # BLAS threading overhead dominates at these matrix sizes
    with threadpool_limits(limits=1):
        for t in times:
            span = t - t_prev
            if span > 0.0:
                n_sub = max(1, math.ceil(span / step - 1e-12))
                h_step = span / n_sub
                for _ in range(n_sub):
                    rho = _rk4_step(rhs, rho, h_step)
                t_prev = t
            drift = abs(np.trace(rho).real - 1.0)
            if diagnostics is not None:
                diagnostics["max_trace_drift"] = max(diagnostics["max_trace_drift"], drift)
            if drift > TRACE_TOLERANCE:
                raise TraceDriftError(
                    f"trace drift {drift:.3e} exceeds {TRACE_TOLERANCE:.1e} at t={t:g}"
                )
            if check_positivity:
                min_eig = float(np.linalg.eigvalsh(rho)[0])
                if diagnostics is not None:
                    diagnostics["min_eigenvalue"] = min(diagnostics["min_eigenvalue"], min_eig)
                if min_eig < MIN_EIGENVALUE_TOLERANCE:
                    raise NegativeEigenvalueError(
                        f"density matrix eigenvalue {min_eig:.3e} below tolerance at t={t:g}"
                    )
            yield t, rho


def _check_initial_density(rho0):
    rho0 = np.asarray(rho0, dtype=complex)
    if abs(np.trace(rho0).real - 1.0) > 1e-8:
        raise ConfigError(f"initial density matrix trace {np.trace(rho0).real!r} is not 1")
    if np.linalg.eigvalsh((rho0 + rho0.conj().T) / 2.0)[0] < MIN_EIGENVALUE_TOLERANCE:
        raise ConfigError("initial density matrix is not positive semidefinite")
    return rho0


def _integrate_with_halving(rhs, rho0, times, step, check_positivity=True, diagnostics=None):
    """Collect samples, halving the step until the run integrity criteria hold.

    Both gates participate: trace drift beyond tolerance, and eigenvalues
    pushed below tolerance (an unstable step can blow up traceless coherences
    without moving the trace at all).
    """
    for attempt in range(MAX_STEP_HALVINGS + 1):
        used = step / 2**attempt
        try:
            samples = [
                rho.copy()
                for _, rho in master_equation_samples(
                    rhs, rho0, times, used, check_positivity=check_positivity, diagnostics=diagnostics
                )
            ]
            return samples, used
        except (TraceDriftError, NegativeEigenvalueError):
            if attempt == MAX_STEP_HALVINGS:
                raise
    raise AssertionError("unreachable")


def integrate_master_equation(
    h, rho0, collapse_ops, times, step: float = DEFAULT_STEP, check_positivity: bool = True
) -> Trajectory:
    """Fixed-step RK4 integration with explicit collapse operators (any dimension)."""
    if step <= 0:
        raise ConfigError(f"step must be > 0, got {step}")
    rho0 = _check_initial_density(rho0)
    ops = [np.asarray(c, dtype=complex) for c in collapse_ops]
    h = np.asarray(h, dtype=complex)
    samples, used = _integrate_with_halving(
        lambda rho: lindblad_rhs(rho, h, ops), rho0, times, step, check_positivity
    )
    times = np.asarray(times, dtype=float)
    return Trajectory(times=times, states=np.array(samples), kind="density", step=used)


def iterate_lindblad(h, rho0, spec: LindbladSpec, times, step: float = DEFAULT_STEP, diagnostics=None):
    """Stream (t, rho) samples of the damped evolution without storing them all.

    Same dynamics as ``evolve_lindblad`` but constant-memory; raises
    TraceDriftError instead of retrying, so callers that want automatic step
    halving must restart iteration themselves.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape[0] % 4 != 0:
        raise DimensionMismatchError(f"Hamiltonian dimension {h.shape[0]} is not 4(M+1)")
    m = h.shape[0] // 4 - 1
    rho0 = _check_initial_density(rho0)
    rhs = _structured_rhs(h, spec, m)
    return master_equation_samples(rhs, rho0, times, step, check_positivity=True, diagnostics=diagnostics)


def evolve_lindblad(
    h,
    rho0,
    spec: LindbladSpec,
    times,
    step: float = DEFAULT_STEP,
    system=None,
    initial=None,
    diagnostics=None,
) -> Trajectory:
    """Open-system evolution with resonator + per-qubit damping on the full space.

    The Fock cutoff is inferred from the Hamiltonian dimension 4(M+1). The
    dissipator uses the structured fast path, which is cross-checked against
    ``lindblad_rhs`` with ``collapse_operators`` in the test suite.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape[0] % 4 != 0:
        raise DimensionMismatchError(f"Hamiltonian dimension {h.shape[0]} is not 4(M+1)")
    if step <= 0:
        raise ConfigError(f"step must be > 0, got {step}")
    m = h.shape[0] // 4 - 1
    rho0 = _check_initial_density(rho0)
    rhs = _structured_rhs(h, spec, m)
    samples, used = _integrate_with_halving(
        rhs, rho0, times, step, check_positivity=True, diagnostics=diagnostics
    )
    times = np.asarray(times, dtype=float)
    return Trajectory(
        times=times,
        states=np.array(samples),
        kind="density",
        system=system,
        initial=initial,
        step=used,
    )
