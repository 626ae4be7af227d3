"""Qubit-qubit entanglement through a linear or nonlinear resonator bus.

Simulation library and experiment CLI: Hamiltonian assembly on a truncated
Fock space, exact unitary propagation, Lindblad damping, and entanglement
quantification via negativity and concurrence.
"""

__version__ = "0.1.0"

from .dynamics import (
    LindbladSpec,
    Trajectory,
    UnitaryPropagator,
    evolve_lindblad,
    evolve_unitary,
)
from .entanglement import concurrence, leakage, negativity, partial_trace, partial_transpose, purity
from .model import ProductStateSpec, SystemSpec, alpha_from_flux, build_hamiltonian, product_state
from .oracle import LinearOracleParams
from .scenarios import ScenarioConfig, ScenarioResult, preset, preset_group, run_scenario, sweep

__all__ = [
    "__version__",
    "LindbladSpec",
    "Trajectory",
    "UnitaryPropagator",
    "evolve_lindblad",
    "evolve_unitary",
    "concurrence",
    "leakage",
    "negativity",
    "partial_trace",
    "partial_transpose",
    "purity",
    "ProductStateSpec",
    "SystemSpec",
    "alpha_from_flux",
    "build_hamiltonian",
    "product_state",
    "LinearOracleParams",
    "ScenarioConfig",
    "ScenarioResult",
    "preset",
    "preset_group",
    "run_scenario",
    "sweep",
]
