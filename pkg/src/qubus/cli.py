"""Command-line front end: run scenarios and emit CSV/JSON results.

Subcommands
-----------
run <config.json>     execute a scenario described by a JSON document
preset <name>         run a built-in scenario (fig1..fig10, ee0, gg2)
list                  show the preset catalog with its parameters
oracle-check          compare numerics against the linear closed forms

Exit codes: 0 success, 1 configuration error, 2 numerical failure. Errors are
printed to stderr as ``ERROR <code>: message``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import config_digest, load_config
from .errors import CONFIG_ERRORS, NUMERICAL_ERRORS, QubusError
from .oracle import max_oracle_deviation
from .scenarios import (
    ScenarioConfig,
    ScenarioResult,
    preset_description,
    preset_group,
    preset_names,
    run_scenario,
)

CSV_HEADER = "omega_t,alpha,n_qq,n_qq_r,concurrence,purity_qq,leakage"
SNAPSHOT_BASIS = ["ee", "eg", "ge", "gg"]
ORACLE_TOLERANCE = 1e-8
LONG_RUN_HORIZON = 25000.0


def _fmt(value: float) -> str:
    """Fixed 12-significant-digit representation used in all CSV fields."""
    return f"{value:.11e}"


def emit_csv(result: ScenarioResult, path) -> None:
    """Write the per-sample records, sorted by (alpha, omega_t)."""
    records = np.sort(result.records, order=("alpha", "omega_t"))
    lines = [CSV_HEADER]
    for row in records:
        lines.append(",".join(_fmt(row[name]) for name in records.dtype.names))
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise QubusError(f"cannot write CSV {path}: {exc}") from exc


def emit_snapshot(rho_qq, meta: dict, path) -> None:
    """Write one two-qubit density matrix as JSON; basis order (ee, eg, ge, gg)."""
    rho = np.asarray(rho_qq, dtype=complex)
    if rho.shape != (4, 4):
        raise QubusError(f"snapshot expects a 4x4 density matrix, got {rho.shape}")
    doc = {
        "omega_t": meta["omega_t"],
        "alpha": meta["alpha"],
        "basis": SNAPSHOT_BASIS,
        "real": rho.real.tolist(),
        "imag": rho.imag.tolist(),
        "negativity": meta["negativity"],
    }
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise QubusError(f"cannot write snapshot {path}: {exc}") from exc


@dataclass
class RunManifest:
    config_digest: str
    tool_version: str
    started: str
    finished: str
    output_paths: list

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.__dict__, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _execute(cfg: ScenarioConfig, out_dir: Path, threads: int) -> list:
    """Run one scenario config and write CSV, snapshots and a manifest."""
    out_dir.mkdir(parents=True, exist_ok=True)
    started = _utc_now()
    result = run_scenario(cfg, threads=threads)

    outputs = []
    csv_path = out_dir / f"{cfg.name}.csv"
    emit_csv(result, csv_path)
    outputs.append(str(csv_path))

    for idx, snap in enumerate(result.snapshots):
        if len(result.snapshots) == 1:
            snap_path = out_dir / f"{cfg.name}_snapshot.json"
        else:
            snap_path = out_dir / f"{cfg.name}_snapshot_{idx}.json"
        emit_snapshot(
            snap.rho_qq,
            {"omega_t": snap.omega_t, "alpha": snap.alpha, "negativity": snap.negativity},
            snap_path,
        )
        outputs.append(str(snap_path))

    manifest = RunManifest(
        config_digest=config_digest(cfg),
        tool_version=__version__,
        started=started,
        finished=_utc_now(),
        output_paths=outputs,
    )
    manifest.write(out_dir / f"{cfg.name}_manifest.json")
    return outputs


def _apply_overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    if getattr(args, "long", False) and cfg.name == "fig3":
        cfg = cfg.with_time_max(LONG_RUN_HORIZON)
    if args.fock is not None:
        cfg = replace(cfg, system=cfg.system.with_fock_cutoff(args.fock))
    if args.samples is not None:
        cfg = replace(cfg, sample_count=args.samples)
    return cfg


def _cmd_run(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    outputs = _execute(cfg, Path(args.out), args.threads)
    for path in outputs:
        print(path)
    return 0


def _cmd_preset(args) -> int:
    for cfg in preset_group(args.name):
        cfg = _apply_overrides(cfg, args)
        for path in _execute(cfg, Path(args.out), args.threads):
            print(path)
    return 0


def _cmd_list(args) -> int:
    for name in preset_names():
        runs = preset_group(name)
        suffix = "" if len(runs) == 1 else f" ({len(runs)} runs)"
        print(f"{name:<6} {preset_description(name)}{suffix}")
    return 0


def _cmd_oracle_check(args) -> int:
    deviation = max_oracle_deviation()
    print(f"oracle check: max |dN| = {deviation:.3e} over 200 random times in [0, 500]")
    if deviation > ORACLE_TOLERANCE:
        print(
            f"ERROR no-convergence: oracle deviation {deviation:.3e} exceeds {ORACLE_TOLERANCE:.1e}",
            file=sys.stderr,
        )
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubus",
        description="Simulate two qubits entangled through a linear or nonlinear resonator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default="./results", help="output directory (default ./results)")
        p.add_argument("--fock", type=int, default=None, help="override the Fock cutoff M (default 40)")
        p.add_argument("--samples", type=int, default=None, help="override the sample count")
        p.add_argument(
            "--threads",
            type=int,
            default=1,
            help="parallel workers for amplitude grids (0 = auto)",
        )

    p_run = sub.add_parser("run", help="run a scenario from a JSON configuration file")
    p_run.add_argument("config", help="path to the configuration document")
    add_common(p_run)
    p_run.set_defaults(func=_cmd_run, long=False)

    p_preset = sub.add_parser("preset", help="run a built-in preset scenario")
    p_preset.add_argument("name", help="preset name (see `qubus list`)")
    add_common(p_preset)
    p_preset.add_argument("--long", action="store_true", help="use the 25000 omega_t horizon for fig3")
    p_preset.set_defaults(func=_cmd_preset)

    p_list = sub.add_parser("list", help="print the preset catalog")
    p_list.set_defaults(func=_cmd_list)

    p_oracle = sub.add_parser("oracle-check", help="verify numerics against the linear closed forms")
    p_oracle.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are configuration problems here
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except CONFIG_ERRORS as exc:
        print(f"ERROR {exc.code}: {exc}", file=sys.stderr)
        return 1
    except NUMERICAL_ERRORS as exc:
        print(f"ERROR {exc.code}: {exc}", file=sys.stderr)
        return 2
    except QubusError as exc:
        print(f"ERROR {exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ERROR io-error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
