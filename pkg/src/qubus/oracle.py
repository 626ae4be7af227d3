"""Closed-form reference dynamics for the linear resonator (V_R = 0).

On resonance the one-excitation dynamics stays in the subspace spanned by
|eg0>, |ge0>, |gg1> and is solvable in closed form with the effective Rabi
frequency gamma_tilde = sqrt(2)*gamma. These expressions omit the global
phase exp(-i*omega*t/2) of the lab frame (the three basis states are
degenerate on resonance), so comparisons against full numerics are made on
density matrices or negativities, which are phase-blind.

Used as the independent verification route for the numerical propagator and
the negativity pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import model
from .dynamics import UnitaryPropagator
from .entanglement import QQ, negativity, partial_trace


@dataclass(frozen=True)
class LinearOracleParams:
    """Coupling gamma with the derived gamma_tilde = sqrt(2)*gamma stored for clarity."""

    gamma: float
    gamma_tilde: float = field(default=None)

    def __post_init__(self):
        if self.gamma_tilde is None:
            object.__setattr__(self, "gamma_tilde", np.sqrt(2.0) * self.gamma)


def state_eg0(t: float, p: LinearOracleParams) -> np.ndarray:
    """Amplitudes on (|eg0>, |ge0>, |gg1>) after starting from |eg0>."""
    c = np.cos(p.gamma_tilde * t)
    s = np.sin(p.gamma_tilde * t)
    return np.array(
        [0.5 * (1.0 + c), -0.5 * (1.0 - c), 1.0j * s / np.sqrt(2.0)], dtype=complex
    )


def state_gg1(t: float, p: LinearOracleParams) -> np.ndarray:
    """Amplitudes on (|eg0>, |ge0>, |gg1>) after starting from |gg1>."""
    c = np.cos(p.gamma_tilde * t)
    s = np.sin(p.gamma_tilde * t)
    amp = 1.0j * s / np.sqrt(2.0)
    return np.array([amp, amp, c], dtype=complex)


def negativity_eg0(t: float, p: LinearOracleParams) -> float:
    """Two-qubit negativity of the reduced |eg0> evolution: s^2 (sqrt(2)-1)/4.

    Obtained by tracing the closed-form state over the resonator and solving
    the 2x2 block of the partial transpose analytically.
    """
    s = np.sin(p.gamma_tilde * t)
    return float(s * s * (np.sqrt(2.0) - 1.0) / 4.0)


def negativity_gg1(t: float, p: LinearOracleParams) -> float:
    """Two-qubit negativity of the reduced |gg1> evolution.

    With p_exc = sin^2(gamma_tilde*t): N = (sqrt((1-p)^2 + p^2) - (1-p))/2,
    reaching the Bell-state maximum 1/2 at gamma_tilde*t = pi/2 + m*pi.
    """
    pe = np.sin(p.gamma_tilde * t) ** 2
    return float((np.sqrt((1.0 - pe) ** 2 + pe**2) - (1.0 - pe)) / 2.0)


def embed_one_excitation(amplitudes, m: int) -> np.ndarray:
    """Place (|eg0>, |ge0>, |gg1>) amplitudes into the full 4(M+1) space."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    psi = np.zeros(4 * (m + 1), dtype=complex)
    psi[model.basis_index(model.E, model.G, 0, m)] = amplitudes[0]
    psi[model.basis_index(model.G, model.E, 0, m)] = amplitudes[1]
    psi[model.basis_index(model.G, model.G, 1, m)] = amplitudes[2]
    return psi


def max_oracle_deviation(
    gamma: float = 0.01,
    fock_cutoff: int = 40,
    n_times: int = 200,
    t_max: float = 500.0,
    seed: int = 20260810,
) -> float:
    """Worst |N_numeric - N_closed_form| over random times, both initial states.

    Builds the linear Hamiltonian, evolves |eg0> and |gg1> exactly via the
    spectral propagator, reduces to the two qubits and compares the computed
    negativity against the closed forms above.
    """
    params = LinearOracleParams(gamma=gamma)
    spec = model.SystemSpec(gamma=gamma, fock_cutoff=fock_cutoff)
    h = model.build_hamiltonian(spec)
    m = spec.fock_cutoff
    dims = (2, 2, m + 1)

    rng = np.random.default_rng(seed)
    times = rng.uniform(0.0, t_max, size=n_times)

    worst = 0.0
    cases = (
        (model.ProductStateSpec(q1="e", q2="g", photons=0), negativity_eg0),
        (model.ProductStateSpec(q1="g", q2="g", photons=1), negativity_gg1),
    )
    for initial, closed_form in cases:
        prop = UnitaryPropagator(h, model.product_state(initial, m))
        for t in times:
            rho_qq = partial_trace(prop.state(t), dims, keep=(0, 1))
            dev = abs(negativity(rho_qq, QQ).value - closed_form(t, params))
            worst = max(worst, dev)
    return worst
