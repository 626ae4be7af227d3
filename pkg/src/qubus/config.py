"""Strict JSON (de)serialization of scenario configurations.

The schema mirrors the dataclasses one-to-one: a flat ``system`` object with
the physical parameters, an ``initial`` product-state object, and optional
``alpha_grid`` / ``lindblad`` / ``snapshots`` sections. Unknown keys are
rejected rather than ignored so typos cannot silently change a run.
"""

from __future__ import annotations

import hashlib
import json

from .dynamics import LindbladSpec
from .errors import ConfigError
from .model import ProductStateSpec, SystemSpec, product_state
from .scenarios import ScenarioConfig

_SYSTEM_KEYS = ("omega1", "omega2", "omega_r", "gamma", "nonlinearity", "alpha", "fock_cutoff")
_INITIAL_KEYS = ("q1", "q2", "photons")
_LINDBLAD_KEYS = ("t_r", "t_q1", "t_q2", "omega_phys", "standard_lowering")
_TOP_KEYS = ("name", "system", "initial", "time_max", "sample_count", "alpha_grid", "lindblad", "snapshots")


def _check_keys(obj: dict, allowed, where: str):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {', '.join(map(repr, unknown))} in {where}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _amplitude(entry, where: str) -> complex:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry)
    if isinstance(entry, list) and len(entry) == 2:
        return complex(_number(entry[0], where), _number(entry[1], where))
    raise ConfigError(f"{where} must be a number or an [re, im] pair, got {entry!r}")


def _qubit_value(value, where: str):
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return [_amplitude(entry, where) for entry in value]
    raise ConfigError(f"{where} must be 'e', 'g' or an amplitude list, got {value!r}")


def _photon_value(value, where: str):
    if isinstance(value, bool):
        raise ConfigError(f"{where} must be an integer or amplitude list, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, list):
        return [_amplitude(entry, where) for entry in value]
    raise ConfigError(f"{where} must be an integer or amplitude list, got {value!r}")


def system_from_dict(obj: dict) -> SystemSpec:
    _check_keys(obj, _SYSTEM_KEYS, "system")
    kwargs = {}
    for key in ("omega1", "omega2", "omega_r", "gamma", "alpha"):
        if key in obj:
            kwargs[key] = _number(obj[key], f"system.{key}")
    if "fock_cutoff" in obj:
        kwargs["fock_cutoff"] = _integer(obj["fock_cutoff"], "system.fock_cutoff")
    if "nonlinearity" in obj:
        if not isinstance(obj["nonlinearity"], str):
            raise ConfigError(f"system.nonlinearity must be a string, got {obj['nonlinearity']!r}")
        kwargs["nonlinearity"] = obj["nonlinearity"]
    return SystemSpec(**kwargs)


def initial_from_dict(obj: dict) -> ProductStateSpec:
    _check_keys(obj, _INITIAL_KEYS, "initial")
    return ProductStateSpec(
        q1=_qubit_value(obj.get("q1", "g"), "initial.q1"),
        q2=_qubit_value(obj.get("q2", "g"), "initial.q2"),
        photons=_photon_value(obj.get("photons", 0), "initial.photons"),
    )


def lindblad_from_dict(obj: dict) -> LindbladSpec:
    _check_keys(obj, _LINDBLAD_KEYS, "lindblad")
    kwargs = {}
    for key in ("t_r", "t_q1", "t_q2", "omega_phys"):
        if key in obj:
            kwargs[key] = _number(obj[key], f"lindblad.{key}")
    if "standard_lowering" in obj:
        if not isinstance(obj["standard_lowering"], bool):
            raise ConfigError("lindblad.standard_lowering must be a boolean")
        kwargs["standard_lowering"] = obj["standard_lowering"]
    return LindbladSpec(**kwargs)


def config_from_dict(obj: dict) -> ScenarioConfig:
    _check_keys(obj, _TOP_KEYS, "configuration")
    for key in ("name", "system", "initial", "time_max", "sample_count"):
        if key not in obj:
            raise ConfigError(f"configuration is missing required key {key!r}")
    if not isinstance(obj["name"], str) or not obj["name"]:
        raise ConfigError(f"name must be a non-empty string, got {obj['name']!r}")

    alpha_grid = None
    if obj.get("alpha_grid") is not None:
        if not isinstance(obj["alpha_grid"], list):
            raise ConfigError("alpha_grid must be a list of numbers")
        alpha_grid = [_number(a, "alpha_grid entry") for a in obj["alpha_grid"]]

    snapshots = None
    if obj.get("snapshots") is not None:
        if not isinstance(obj["snapshots"], list):
            raise ConfigError("snapshots must be a list of times")
        snapshots = [_number(t, "snapshots entry") for t in obj["snapshots"]]

    cfg = ScenarioConfig(
        name=obj["name"],
        system=system_from_dict(obj["system"]),
        initial=initial_from_dict(obj["initial"]),
        time_max=_number(obj["time_max"], "time_max"),
        sample_count=_integer(obj["sample_count"], "sample_count"),
        alpha_grid=alpha_grid,
        lindblad=lindblad_from_dict(obj["lindblad"]) if obj.get("lindblad") is not None else None,
        snapshots=snapshots,
    )
    _validate_photons(cfg)
    return cfg


def _validate_photons(cfg: ScenarioConfig):
    # surface photon overflow at parse time instead of deep inside a run
    product_state(cfg.initial, cfg.system.fock_cutoff)


def _encode_amplitude(value) -> list:
    c = complex(value)
    return [c.real, c.imag]


def _qubit_to_json(value):
    if isinstance(value, str):
        return value
    return [_encode_amplitude(v) for v in value]


def config_to_dict(cfg: ScenarioConfig) -> dict:
    system = cfg.system
    out = {
        "name": cfg.name,
        "system": {
            "omega1": system.omega1,
            "omega2": system.omega2,
            "omega_r": system.omega_r,
            "gamma": system.gamma,
            "nonlinearity": system.nonlinearity,
            "alpha": system.alpha,
            "fock_cutoff": system.fock_cutoff,
        },
        "initial": {
            "q1": _qubit_to_json(cfg.initial.q1),
            "q2": _qubit_to_json(cfg.initial.q2),
            "photons": cfg.initial.photons
            if isinstance(cfg.initial.photons, int)
            else [_encode_amplitude(v) for v in cfg.initial.photons],
        },
        "time_max": cfg.time_max,
        "sample_count": cfg.sample_count,
    }
    if cfg.alpha_grid is not None:
        out["alpha_grid"] = [float(a) for a in cfg.alpha_grid]
    if cfg.lindblad is not None:
        out["lindblad"] = {
            "t_r": cfg.lindblad.t_r,
            "t_q1": cfg.lindblad.t_q1,
            "t_q2": cfg.lindblad.t_q2,
            "omega_phys": cfg.lindblad.omega_phys,
            "standard_lowering": cfg.lindblad.standard_lowering,
        }
    if cfg.snapshots is not None:
        out["snapshots"] = [float(t) for t in cfg.snapshots]
    return out


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return config_from_dict(obj)


def save_config(cfg: ScenarioConfig, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")


def config_digest(cfg: ScenarioConfig) -> str:
    """Stable content hash of the resolved configuration."""
    canonical = json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
