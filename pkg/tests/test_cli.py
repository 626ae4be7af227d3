import json

import numpy as np
import pytest

from qubus import cli, config, scenarios


def tiny_config_doc(**overrides):
    doc = {
        "name": "tiny",
        "system": {"fock_cutoff": 3, "gamma": 0.01, "nonlinearity": "none", "alpha": 0.0},
        "initial": {"q1": "g", "q2": "g", "photons": 1},
        "time_max": 20.0,
        "sample_count": 11,
    }
    doc.update(overrides)
    return doc


def write_doc(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_list_shows_catalog(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    for name in scenarios.preset_names():
        assert name in out
    assert "2 runs" in out  # fig1 expands to both initial states


def test_run_tiny_config(tmp_path, capsys):
    path = write_doc(tmp_path, tiny_config_doc())
    out_dir = tmp_path / "results"
    assert cli.main(["run", str(path), "--out", str(out_dir)]) == 0
    csv_path = out_dir / "tiny.csv"
    assert csv_path.exists()
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 1 + 11
    manifest = json.loads((out_dir / "tiny_manifest.json").read_text())
    assert manifest["tool_version"]
    assert str(csv_path) in manifest["output_paths"]
    cfg = config.config_from_dict(tiny_config_doc())
    assert manifest["config_digest"] == config.config_digest(cfg)


def test_csv_formatting_12_significant_digits(tmp_path):
    path = write_doc(tmp_path, tiny_config_doc())
    out_dir = tmp_path / "results"
    cli.main(["run", str(path), "--out", str(out_dir)])
    row = (out_dir / "tiny.csv").read_text().strip().split("\n")[1].split(",")
    assert len(row) == 7
    for cell in row:
        mantissa = cell.split("e")[0]
        assert len(mantissa.replace("-", "").replace(".", "")) == 12


def test_byte_identical_reruns(tmp_path):
    doc = tiny_config_doc(snapshots=[10.0])
    path = write_doc(tmp_path, doc)
    cli.main(["run", str(path), "--out", str(tmp_path / "a")])
    cli.main(["run", str(path), "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "tiny.csv").read_bytes() == (tmp_path / "b" / "tiny.csv").read_bytes()
    assert (
        (tmp_path / "a" / "tiny_snapshot.json").read_bytes()
        == (tmp_path / "b" / "tiny_snapshot.json").read_bytes()
    )


def test_photon_overflow_exit_code(tmp_path, capsys):
    doc = tiny_config_doc()
    doc["initial"]["photons"] = 9
    path = write_doc(tmp_path, doc)
    assert cli.main(["run", str(path)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("ERROR photon-overflow")


def test_unknown_key_exit_code(tmp_path, capsys):
    doc = tiny_config_doc()
    doc["system"]["aplha"] = 0.1
    path = write_doc(tmp_path, doc)
    assert cli.main(["run", str(path)]) == 1
    assert capsys.readouterr().err.startswith("ERROR config-invalid")


def test_missing_file_exit_code(tmp_path, capsys):
    assert cli.main(["run", str(tmp_path / "nope.json")]) == 1
    assert capsys.readouterr().err.startswith("ERROR config-invalid")


def test_unknown_preset_exit_code(capsys):
    assert cli.main(["preset", "fig99"]) == 1
    assert capsys.readouterr().err.startswith("ERROR unknown-preset")


def test_bad_usage_exit_code(capsys):
    assert cli.main(["frobnicate"]) == 1


def test_preset_fig7_snapshot(tmp_path):
    out_dir = tmp_path / "results"
    assert cli.main(["preset", "fig7", "--out", str(out_dir)]) == 0
    snap = json.loads((out_dir / "fig7_snapshot.json").read_text())
    assert snap["omega_t"] == 111.0
    assert snap["basis"] == ["ee", "eg", "ge", "gg"]
    real = np.array(snap["real"])
    imag = np.array(snap["imag"])
    # two-qubit state at the first negativity maximum of the linear case:
    # dominant diagonal, small coherences, essentially real matrix
    assert real.shape == (4, 4)
    assert np.trace(real) == pytest.approx(1.0, abs=1e-10)
    assert real[1, 1] > 0.2 and real[2, 2] > 0.2 and real[3, 3] > 0.2
    assert np.max(np.abs(imag)) <= 1e-12
    assert snap["negativity"] == pytest.approx(0.104, abs=0.002)


def test_preset_group_outputs(tmp_path):
    out_dir = tmp_path / "results"
    assert cli.main(["preset", "fig1", "--out", str(out_dir), "--samples", "3"]) == 0
    assert (out_dir / "fig1_eg0.csv").exists()
    assert (out_dir / "fig1_gg1.csv").exists()
    assert (out_dir / "fig1_eg0_manifest.json").exists()


def test_samples_and_fock_overrides(tmp_path):
    path = write_doc(tmp_path, tiny_config_doc())
    out_dir = tmp_path / "results"
    assert cli.main(["run", str(path), "--out", str(out_dir), "--samples", "5", "--fock", "4"]) == 0
    lines = (out_dir / "tiny.csv").read_text().strip().split("\n")
    assert len(lines) == 1 + 5


def test_threads_auto(tmp_path):
    doc = tiny_config_doc()
    doc["system"]["nonlinearity"] = "cosine"
    doc["alpha_grid"] = [0.0, 0.0005]
    path = write_doc(tmp_path, doc)
    assert cli.main(["run", str(path), "--out", str(tmp_path / "auto"), "--threads", "0"]) == 0
    assert cli.main(["run", str(path), "--out", str(tmp_path / "seq"), "--threads", "1"]) == 0
    assert (
        (tmp_path / "auto" / "tiny.csv").read_bytes() == (tmp_path / "seq" / "tiny.csv").read_bytes()
    )


def test_long_flag_extends_fig3_horizon():
    args = cli.build_parser().parse_args(["preset", "fig3", "--long"])
    cfg = cli._apply_overrides(scenarios.preset("fig3"), args)
    assert cfg.time_max == 25000.0
    assert cfg.sample_count == 50001
    # other presets are unaffected by --long
    args = cli.build_parser().parse_args(["preset", "fig7", "--long"])
    assert cli._apply_overrides(scenarios.preset("fig7"), args).time_max == 150.0


def test_csv_rows_sorted_by_alpha_then_time(tmp_path):
    doc = tiny_config_doc()
    doc["system"]["nonlinearity"] = "cosine"
    doc["alpha_grid"] = [0.0005, 0.0]
    path = write_doc(tmp_path, doc)
    out_dir = tmp_path / "results"
    cli.main(["run", str(path), "--out", str(out_dir)])
    rows = [line.split(",") for line in (out_dir / "tiny.csv").read_text().strip().split("\n")[1:]]
    alphas = [float(r[1]) for r in rows]
    times = [float(r[0]) for r in rows]
    assert alphas == sorted(alphas)
    assert times[:11] == sorted(times[:11])


def test_oracle_check(capsys):
    assert cli.main(["oracle-check"]) == 0
    out = capsys.readouterr().out
    assert "max |dN|" in out


def test_emit_snapshot_bell(tmp_path):
    bell = np.zeros((4, 4), dtype=complex)
    bell[1:3, 1:3] = 0.5
    path = tmp_path / "bell.json"
    cli.emit_snapshot(bell, {"omega_t": 0.0, "alpha": 0.0, "negativity": 0.5}, path)
    doc = json.loads(path.read_text())
    assert doc["real"][1][2] == pytest.approx(0.5)
    assert doc["real"][2][1] == pytest.approx(0.5)


def test_emit_snapshot_product_state(tmp_path):
    product = np.diag([0.0, 1.0, 0.0, 0.0]).astype(complex)
    path = tmp_path / "prod.json"
    cli.emit_snapshot(product, {"omega_t": 0.0, "alpha": 0.0, "negativity": 0.0}, path)
    assert json.loads(path.read_text())["negativity"] == 0.0


def test_fig1_csv_bell_row(tmp_path):
    # the row nearest the Bell time must carry n_qq within 1e-4 of 1/2
    out_dir = tmp_path / "results"
    cli.main(["preset", "fig1", "--out", str(out_dir)])
    lines = (out_dir / "fig1_gg1.csv").read_text().strip().split("\n")[1:]
    rows = [[float(x) for x in line.split(",")] for line in lines]
    t_bell = np.pi / (2 * np.sqrt(2) * 0.01)
    nearest = min(rows, key=lambda r: abs(r[0] - t_bell))
    assert nearest[2] == pytest.approx(0.5, abs=1e-4)
