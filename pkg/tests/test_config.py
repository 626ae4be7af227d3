import json

import pytest

from qubus import config, model, scenarios
from qubus.dynamics import LindbladSpec
from qubus.errors import ConfigError, PhotonOverflowError


def full_config():
    return scenarios.ScenarioConfig(
        name="custom",
        system=model.SystemSpec(
            omega1=1.0, omega2=0.98, omega_r=1.0, gamma=0.02,
            nonlinearity="cosine", alpha=0.004, fock_cutoff=12,
        ),
        initial=model.ProductStateSpec(q1="e", q2="g", photons=0),
        time_max=50.0,
        sample_count=101,
        alpha_grid=[0.0, 0.004],
        lindblad=LindbladSpec(t_r=5e-5, t_q1=1e-5, t_q2=2e-5, standard_lowering=True),
        snapshots=[25.0],
    )


def test_round_trip_structural_identity():
    cfg = full_config()
    again = config.config_from_dict(config.config_to_dict(cfg))
    assert again == cfg


def test_round_trip_minimal():
    cfg = scenarios.ScenarioConfig(
        name="minimal",
        system=model.SystemSpec(),
        initial=model.ProductStateSpec(),
        time_max=10.0,
        sample_count=21,
    )
    again = config.config_from_dict(config.config_to_dict(cfg))
    assert again == cfg
    assert again.alpha_grid is None and again.lindblad is None and again.snapshots is None


def test_round_trip_amplitude_forms():
    isq = 1.0 / 2.0**0.5
    cfg = scenarios.ScenarioConfig(
        name="amps",
        system=model.SystemSpec(fock_cutoff=2),
        initial=model.ProductStateSpec(
            q1=[complex(isq), complex(0, isq)], q2="g", photons=[complex(1.0), complex(0.0), complex(0.0)]
        ),
        time_max=5.0,
        sample_count=6,
    )
    again = config.config_from_dict(config.config_to_dict(cfg))
    assert again.initial.q1 == [complex(isq), complex(0, isq)]
    assert again.initial.photons == [1.0 + 0.0j, 0.0j, 0.0j]


def test_unknown_keys_rejected():
    doc = config.config_to_dict(full_config())
    doc["system"]["aplha"] = 0.001
    with pytest.raises(ConfigError, match="aplha"):
        config.config_from_dict(doc)

    doc = config.config_to_dict(full_config())
    doc["extra"] = 1
    with pytest.raises(ConfigError, match="extra"):
        config.config_from_dict(doc)

    doc = config.config_to_dict(full_config())
    doc["lindblad"]["tau"] = 2.0
    with pytest.raises(ConfigError, match="tau"):
        config.config_from_dict(doc)


def test_missing_required_key():
    doc = config.config_to_dict(full_config())
    del doc["time_max"]
    with pytest.raises(ConfigError, match="time_max"):
        config.config_from_dict(doc)


def test_photon_overflow_at_parse_time():
    doc = config.config_to_dict(full_config())
    doc["initial"]["photons"] = doc["system"]["fock_cutoff"] + 1
    with pytest.raises(PhotonOverflowError):
        config.config_from_dict(doc)


def test_type_errors():
    doc = config.config_to_dict(full_config())
    doc["sample_count"] = 10.5
    with pytest.raises(ConfigError):
        config.config_from_dict(doc)

    doc = config.config_to_dict(full_config())
    doc["system"]["gamma"] = "fast"
    with pytest.raises(ConfigError):
        config.config_from_dict(doc)


def test_digest_stability_and_sensitivity():
    cfg = full_config()
    assert config.config_digest(cfg) == config.config_digest(full_config())
    other = full_config()
    other.system = other.system.with_alpha(0.005)
    assert config.config_digest(other) != config.config_digest(cfg)


def test_file_round_trip(tmp_path):
    cfg = full_config()
    path = tmp_path / "scenario.json"
    config.save_config(cfg, path)
    assert config.load_config(path) == cfg


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError):
        config.load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        config.load_config(bad)


def test_preset_configs_serialize(tmp_path):
    # every catalog entry must survive a file round trip unchanged
    for name in scenarios.preset_names():
        for cfg in scenarios.preset_group(name):
            path = tmp_path / f"{cfg.name}.json"
            config.save_config(cfg, path)
            assert config.load_config(path) == cfg


def test_digest_independent_of_json_key_order():
    doc = config.config_to_dict(full_config())
    shuffled = json.loads(json.dumps(doc, sort_keys=True))
    assert config.config_digest(config.config_from_dict(shuffled)) == config.config_digest(full_config())
