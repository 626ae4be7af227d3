"""Named, reproducible experiment definitions and generic parameter sweeps.

A scenario fixes the physical system, the initial product state, the time
window and sampling, an optional nonlinearity-amplitude grid, optional
damping, and optional two-qubit density-matrix snapshot times. Running one
produces per-sample records of (omega_t, alpha, N_QQ, N_QQ_vs_R, concurrence,
purity_QQ, leakage) plus snapshots and a peak summary. Identical
configurations produce identical results, bit for bit.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from . import model
from .dynamics import (
    DEFAULT_STEP,
    LindbladSpec,
    UnitaryPropagator,
    iterate_lindblad,
)
from .entanglement import (
    QQ,
    QQ_VS_R,
    concurrence,
    leakage,
    negativity,
    partial_trace,
    purity,
    qq_r_negativity_pure,
)
from .errors import (
    ConfigError,
    NegativeEigenvalueError,
    TraceDriftError,
    TruncationWarning,
    UnknownPresetError,
)

DEFAULT_SAMPLE_SPACING = 0.5
# Truncation gate: population allowed in the top Fock levels of a unitary run
# before the scenario re-runs at a larger cutoff.
LEAKAGE_LIMIT = 1e-6
LEAKAGE_TOP_LEVELS = 5
MAX_FOCK_RETRIES = 2
MAX_STEP_RETRIES = 6

RECORD_DTYPE = np.dtype(
    [
        ("omega_t", float),
        ("alpha", float),
        ("n_qq", float),
        ("n_qq_r", float),
        ("concurrence", float),
        ("purity_qq", float),
        ("leakage", float),
    ]
)


def sample_count_for(time_max: float, spacing: float = DEFAULT_SAMPLE_SPACING) -> int:
    return int(round(time_max / spacing)) + 1


@dataclass
class ScenarioConfig:
    """Serializable description of one experiment."""

    name: str
    system: model.SystemSpec
    initial: model.ProductStateSpec
    time_max: float
    sample_count: int
    alpha_grid: list = None
    lindblad: LindbladSpec = None
    snapshots: list = None

    def __post_init__(self):
        if not self.time_max > 0:
            raise ConfigError(f"time_max must be > 0, got {self.time_max}")
        if self.sample_count < 2:
            raise ConfigError(f"sample_count must be >= 2, got {self.sample_count}")
        if self.alpha_grid is not None and len(self.alpha_grid) == 0:
            raise ConfigError("alpha_grid must be a non-empty list when present")
        for t in self.snapshots or ():
            if not 0 <= t <= self.time_max:
                raise ConfigError(f"snapshot time {t} outside [0, time_max={self.time_max}]")

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.time_max, self.sample_count)

    def with_time_max(self, time_max: float, spacing: float = DEFAULT_SAMPLE_SPACING) -> "ScenarioConfig":
        return replace(self, time_max=time_max, sample_count=sample_count_for(time_max, spacing))


@dataclass
class Snapshot:
    """Two-qubit density matrix dumped at one time, basis order (ee, eg, ge, gg)."""

    omega_t: float
    alpha: float
    rho_qq: np.ndarray
    negativity: float


@dataclass
class PeakSummary:
    max_n_qq: float
    argmax_time: float
    n_qq_r_at_peak: float
    alpha: float
    refined: bool


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    records: np.ndarray
    snapshots: list
    summary: PeakSummary
    fock_cutoff_used: int
    # integrator diagnostics for damped runs: max_trace_drift, min_eigenvalue, step
    diagnostics: dict = None


def _rho_qq_pure(psi: np.ndarray) -> np.ndarray:
    """Two-qubit reduction of a pure full-system state (trace over the resonator)."""
    p = psi.reshape(4, psi.shape[0] // 4)
    return p @ p.conj().T


def _leakage_levels(fock_levels: int) -> int:
    # monitor the top 5 Fock levels; never more than half the retained space
    # so that tiny cutoffs used in tests keep a meaningful gate
    return max(1, min(LEAKAGE_TOP_LEVELS, fock_levels // 2))


def _pure_record(t, alpha, psi):
    rho_qq = _rho_qq_pure(psi)
    return (
        t,
        alpha,
        negativity(rho_qq, QQ).value,
        qq_r_negativity_pure(rho_qq),
        concurrence(rho_qq),
        purity(rho_qq),
        leakage(psi, _leakage_levels(psi.shape[0] // 4)),
    )


def _density_record(t, alpha, rho, dims):
    rho_qq = partial_trace(rho, dims, keep=(0, 1))
    return (
        t,
        alpha,
        negativity(rho_qq, QQ).value,
        negativity(rho, QQ_VS_R).value,
        concurrence(rho_qq),
        purity(rho_qq),
        leakage(rho, _leakage_levels(dims[2])),
    )


def _refine_peak(prop: UnitaryPropagator, times, n_values, alpha) -> PeakSummary:
    """Sharpen the sampled N_QQ argmax; exact propagation makes this cheap.

    The refined time also pins N_QQ_vs_R at the peak, which the sampling grid
    alone cannot do (the QQ-R negativity has a cusp where N_QQ peaks).
    """
    i = int(np.argmax(n_values))
    lo = times[i - 1] if i > 0 else times[i]
    hi = times[i + 1] if i + 1 < len(times) else times[i]

    def neg_at(t: float) -> float:
        return negativity(_rho_qq_pure(prop.state(t)), QQ).value

    t_star, n_star = float(times[i]), float(n_values[i])
    if hi > lo:
        res = minimize_scalar(
            lambda t: -neg_at(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10}
        )
        if -res.fun >= n_star:
            t_star, n_star = float(res.x), float(-res.fun)
    n_qq_r = qq_r_negativity_pure(_rho_qq_pure(prop.state(t_star)))
    return PeakSummary(
        max_n_qq=n_star, argmax_time=t_star, n_qq_r_at_peak=n_qq_r, alpha=alpha, refined=True
    )


def _run_unitary(cfg: ScenarioConfig, system: model.SystemSpec):
    h = model.build_hamiltonian(system)
    psi0 = model.product_state(cfg.initial, system.fock_cutoff)
    prop = UnitaryPropagator(h, psi0)
    times = cfg.times()

    rows = [_pure_record(t, system.alpha, prop.state(t)) for t in times]
    records = np.array(rows, dtype=RECORD_DTYPE)
    summary = _refine_peak(prop, times, records["n_qq"], system.alpha)
    snapshots = []
    for t_snap in cfg.snapshots or ():
        rho_qq = _rho_qq_pure(prop.state(t_snap))
        snapshots.append(
            Snapshot(
                omega_t=float(t_snap),
                alpha=system.alpha,
                rho_qq=rho_qq,
                negativity=negativity(rho_qq, QQ).value,
            )
        )
    return records, snapshots, summary


def _run_lindblad(cfg: ScenarioConfig, system: model.SystemSpec):
    h = model.build_hamiltonian(system)
    psi0 = model.product_state(cfg.initial, system.fock_cutoff)
    rho0 = np.outer(psi0, psi0.conj())
    dims = (2, 2, system.fock_cutoff + 1)
    times = cfg.times()
    snap_times = {float(times[np.argmin(np.abs(times - t))]) for t in cfg.snapshots or ()}

    step = DEFAULT_STEP
    for attempt in range(MAX_STEP_RETRIES + 1):
        rows, snapshots, diagnostics = [], [], {}
        try:
            for t, rho in iterate_lindblad(
                h, rho0, cfg.lindblad, times, step=step, diagnostics=diagnostics
            ):
                rows.append(_density_record(t, system.alpha, rho, dims))
                if float(t) in snap_times:
                    rho_qq = partial_trace(rho, dims, keep=(0, 1))
                    snapshots.append(
                        Snapshot(
                            omega_t=float(t),
                            alpha=system.alpha,
                            rho_qq=rho_qq,
                            negativity=negativity(rho_qq, QQ).value,
                        )
                    )
            break
        except (TraceDriftError, NegativeEigenvalueError):
            if attempt == MAX_STEP_RETRIES:
                raise
            step /= 2.0

    records = np.array(rows, dtype=RECORD_DTYPE)
    i = int(np.argmax(records["n_qq"]))
    summary = PeakSummary(
        max_n_qq=float(records["n_qq"][i]),
        argmax_time=float(records["omega_t"][i]),
        n_qq_r_at_peak=float(records["n_qq_r"][i]),
        alpha=system.alpha,
        refined=False,
    )
    return records, snapshots, summary, diagnostics


def _run_single(cfg: ScenarioConfig, alpha: float) -> ScenarioResult:
    """One scenario at one nonlinearity amplitude, with the truncation gate."""
    system = cfg.system.with_alpha(alpha)
    for attempt in range(MAX_FOCK_RETRIES + 1):
        if cfg.lindblad is not None:
            records, snapshots, summary, diagnostics = _run_lindblad(cfg, system)
        else:
            records, snapshots, summary = _run_unitary(cfg, system)
            diagnostics = None
        worst_leakage = float(records["leakage"].max())
        if cfg.lindblad is not None or worst_leakage <= LEAKAGE_LIMIT or attempt == MAX_FOCK_RETRIES:
            if worst_leakage > LEAKAGE_LIMIT and cfg.lindblad is None:
                warnings.warn(
                    f"scenario {cfg.name!r}: leakage {worst_leakage:.3e} still above "
                    f"{LEAKAGE_LIMIT:.1e} at M={system.fock_cutoff}",
                    TruncationWarning,
                )
            return ScenarioResult(
                config=cfg,
                records=records,
                snapshots=snapshots,
                summary=summary,
                fock_cutoff_used=system.fock_cutoff,
                diagnostics=diagnostics,
            )
        larger = 2 * system.fock_cutoff
        warnings.warn(
            f"scenario {cfg.name!r}: leakage {worst_leakage:.3e} exceeds {LEAKAGE_LIMIT:.1e} "
            f"at M={system.fock_cutoff}; re-running at M={larger}",
            TruncationWarning,
        )
        system = system.with_fock_cutoff(larger)
    raise AssertionError("unreachable")


def sweep(base: ScenarioConfig, alpha_grid, threads: int = 1) -> list:
    """One independent result per amplitude, in grid order."""
    grid = list(alpha_grid)
    if not grid:
        raise ConfigError("alpha_grid must be non-empty")
    if threads == 0:
        threads = os.cpu_count() or 1
    if threads > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda a: _run_single(base, a), grid))
    return [_run_single(base, a) for a in grid]


def run_scenario(cfg: ScenarioConfig, threads: int = 1) -> ScenarioResult:
    """Execute a scenario; amplitude grids are merged into a single result."""
    if cfg.alpha_grid is None:
        return _run_single(cfg, cfg.system.alpha)
    parts = sweep(cfg, cfg.alpha_grid, threads=threads)
    records = np.concatenate([p.records for p in parts])
    snapshots = [snap for p in parts for snap in p.snapshots]
    summary = max((p.summary for p in parts), key=lambda s: s.max_n_qq)
    diagnostics = None
    if any(p.diagnostics for p in parts):
        diagnostics = {
            "max_trace_drift": max(p.diagnostics["max_trace_drift"] for p in parts if p.diagnostics),
            "min_eigenvalue": min(p.diagnostics["min_eigenvalue"] for p in parts if p.diagnostics),
            "step": max(p.diagnostics["step"] for p in parts if p.diagnostics),
        }
    return ScenarioResult(
        config=cfg,
        records=records,
        snapshots=snapshots,
        summary=summary,
        fock_cutoff_used=max(p.fock_cutoff_used for p in parts),
        diagnostics=diagnostics,
    )


def _cfg(name, system, initial, time_max, spacing=DEFAULT_SAMPLE_SPACING, **kwargs) -> ScenarioConfig:
    return ScenarioConfig(
        name=name,
        system=system,
        initial=initial,
        time_max=time_max,
        sample_count=sample_count_for(time_max, spacing),
        **kwargs,
    )


_EG0 = model.ProductStateSpec(q1="e", q2="g", photons=0)
_GG1 = model.ProductStateSpec(q1="g", q2="g", photons=1)


def _build_catalog():
    linear = model.SystemSpec()
    cosine = model.SystemSpec(nonlinearity="cosine")
    weak_grid = [0.0, 0.001, 0.002, 0.0035, 0.005]
    strong_grid = [0.0, 0.0035, 0.01, 0.1, 0.7]

    catalog = {}

    def add(name, description, *configs):
        catalog[name] = (description, list(configs))

    add(
        "fig1",
        "linear resonator, one-excitation states |eg0> and |gg1>; gamma=0.01, omega_t <= 300",
        _cfg("fig1_eg0", linear, _EG0, 300.0),
        _cfg("fig1_gg1", linear, _GG1, 300.0),
    )
    add(
        "fig2",
        "cosine nonlinearity sweep from |eg0>, alpha in {0, 0.001, 0.002, 0.0035, 0.005}",
        _cfg("fig2", cosine, _EG0, 1000.0, alpha_grid=weak_grid),
    )
    add(
        "fig3",
        "strong cosine nonlinearity from |eg0>, alpha in {0.5, 1, 2} (use --long for the 25000 horizon)",
        _cfg("fig3", cosine, _EG0, 3000.0, alpha_grid=[0.5, 1.0, 2.0]),
    )
    add(
        "fig4",
        "cosine nonlinearity sweep from |gg1> (entanglement suppression), alpha grid as fig2",
        _cfg("fig4", cosine, _GG1, 1000.0, alpha_grid=weak_grid),
    )
    add(
        "fig5",
        "two excitations |eg1>, cosine alpha in {0, 0.0035, 0.01, 0.1, 0.7}",
        _cfg("fig5", cosine, model.ProductStateSpec(q1="e", q2="g", photons=1), 3000.0, alpha_grid=strong_grid),
    )
    add(
        "fig6",
        "three excitations |eg2>, cosine alpha in {0, 0.0035, 0.01, 0.1, 0.7}",
        _cfg("fig6", cosine, model.ProductStateSpec(q1="e", q2="g", photons=2), 3000.0, alpha_grid=strong_grid),
    )
    add(
        "fig7",
        "linear resonator, |eg0>: two-qubit density-matrix snapshot at omega_t = 111",
        _cfg("fig7", linear, _EG0, 150.0, snapshots=[111.0]),
    )
    add(
        "fig8",
        "cosine alpha=0.0035, |eg0>: density-matrix snapshot at omega_t = 435 (real part)",
        _cfg("fig8", cosine.with_alpha(0.0035), _EG0, 500.0, snapshots=[435.0]),
    )
    add(
        "fig9",
        "cosine alpha=0.0035, |eg0>: density-matrix snapshot at omega_t = 435 (imaginary part)",
        _cfg("fig9", cosine.with_alpha(0.0035), _EG0, 500.0, snapshots=[435.0]),
    )
    add(
        "fig10",
        "cosine alpha=0.0035, |eg0> with damping T_R=5e-5 s, T_Q=1e-5 s",
        _cfg("fig10", cosine.with_alpha(0.0035), _EG0, 1600.0, spacing=1.0, lindblad=LindbladSpec()),
    )
    add(
        "ee0",
        "both qubits excited |ee0>, cosine alpha in {0, 0.0035, 0.7} (null case)",
        _cfg("ee0", cosine, model.ProductStateSpec(q1="e", q2="e", photons=0), 2000.0, alpha_grid=[0.0, 0.0035, 0.7]),
    )
    add(
        "gg2",
        "two resonator photons |gg2>, cosine alpha in {0, 0.7}",
        _cfg("gg2", cosine, model.ProductStateSpec(q1="g", q2="g", photons=2), 2000.0, alpha_grid=[0.0, 0.7]),
    )
    return catalog


_CATALOG = _build_catalog()


def preset_names() -> list:
    return list(_CATALOG)


def preset_description(name: str) -> str:
    if name not in _CATALOG:
        raise UnknownPresetError(f"unknown preset {name!r}; known: {', '.join(_CATALOG)}")
    return _CATALOG[name][0]


def preset_group(name: str) -> list:
    """All scenario configs behind a preset name (fig1 expands to two runs)."""
    if name not in _CATALOG:
        raise UnknownPresetError(f"unknown preset {name!r}; known: {', '.join(_CATALOG)}")
    return list(_CATALOG[name][1])


def preset(name: str) -> ScenarioConfig:
    """The scenario config for a preset; for fig1 this is the |gg1> run
    (the Bell-point headline), with the |eg0> companion available through
    ``preset_group``."""
    group = preset_group(name)
    return group[-1]
