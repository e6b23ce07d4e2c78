"""Command-line interface: outputs, exit codes and determinism."""

import json

import numpy as np
import pytest

from spincrop.cli import main


def _read(path):
    return path.read_bytes()


def test_bound_writes_json_and_prints(tmp_path, capsys):
    assert main(["bound", "--ka", "1", "--kc", "0.75",
                 "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "bound.json").read_text())
    assert payload["eta"] == pytest.approx(0.6022205876855579, abs=1e-12)
    assert payload["gamma_star_rad"] == pytest.approx(2.58399382689, abs=1e-9)
    assert max(map(abs, payload["residuals"])) < 1e-12
    assert payload["composites"]["eta_iz_to_sz"] == pytest.approx(
        payload["eta"] ** 2, rel=1e-12)  # S rates default to I rates
    assert "eta" in capsys.readouterr().out


def test_bound_rejects_bad_rates(tmp_path):
    assert main(["bound", "--ka", "1", "--kc", "1.5",
                 "--out", str(tmp_path)]) == 1


def test_synth_outputs(tmp_path):
    assert main(["synth", "--ka", "1", "--kc", "0.75", "--dt", "0.002",
                 "--out", str(tmp_path)]) == 0
    csv = (tmp_path / "waveform.csv").read_text().splitlines()
    assert csv[0] == "t_s,amplitude_hz,phase_rad,offset_hz"
    assert len(csv) > 100
    meta = json.loads((tmp_path / "waveform.json").read_text())
    assert meta["eta_predicted"] == pytest.approx(0.602221, abs=1e-3)
    assert (tmp_path / "waveform.png").stat().st_size > 0


def test_synth_frequency_form(tmp_path):
    assert main(["synth", "--ka", "1", "--kc", "0.75", "--dt", "0.002",
                 "--frequency-form", "--out", str(tmp_path)]) == 0
    data = np.loadtxt(tmp_path / "waveform.csv", delimiter=",", skiprows=1)
    assert np.any(data[:, 3] != 0)  # offsets carry the modulation


def test_synth_error_paths(tmp_path):
    assert main(["synth", "--ka", "1", "--kc", "1", "--out",
                 str(tmp_path)]) == 1
    assert main(["synth", "--ka", "1", "--kc", "0.5", "--window", "0",
                 "--out", str(tmp_path)]) == 1
    assert main(["synth", "--ka", "1", "--kc", "0.5", "--epsilon", "0.5",
                 "--out", str(tmp_path)]) == 1


def test_usage_errors():
    assert main(["simulate", "--scheme", "crop", "--program", "x.json"]) == 1
    assert main(["simulate"]) == 1
    assert main(["compare", "--schemes", "inept,zept"]) == 1
    assert main(["compare", "--grid-ka", "1,two"]) == 1


def test_simulate_baseline(tmp_path, capsys):
    assert main(["simulate", "--scheme", "inept", "--ka", "1", "--kc", "0.75",
                 "--out", str(tmp_path)]) == 0
    info = json.loads((tmp_path / "run.json").read_text())
    assert info["efficiency"] == pytest.approx(0.403535, abs=1e-4)
    header = (tmp_path / "trajectory.csv").read_text().splitlines()[0]
    assert header.startswith("t_s,Ix,Iy,Iz,") and "gamma_rad" in header
    assert (tmp_path / "trajectory.png").stat().st_size > 0
    assert "inept" in capsys.readouterr().out


def test_simulate_crop_and_program_file(tmp_path):
    assert main(["simulate", "--scheme", "crop", "--ka", "1", "--kc", "0.75",
                 "--max-rows", "500", "--out", str(tmp_path)]) == 0
    info = json.loads((tmp_path / "run.json").read_text())
    assert info["efficiency"] >= 0.99 * 0.602221
    # a hand-written program file drives the same machinery
    prog = {"elements": [
        {"type": "hard_rotation", "spin": "I", "phase_rad": np.pi / 2,
         "angle_rad": np.pi / 2},
        {"type": "delay", "duration_s": 0.356},
    ]}
    path = tmp_path / "prog.json"
    path.write_text(json.dumps(prog))
    assert main(["simulate", "--program", str(path), "--ka", "1",
                 "--kc", "0.75", "--target", "2IySz",
                 "--out", str(tmp_path)]) == 0
    info = json.loads((tmp_path / "run.json").read_text())
    assert info["efficiency"] == pytest.approx(0.4035, abs=1e-3)


def test_compare_outputs_and_determinism(tmp_path):
    args = ["compare", "--grid-ka", "0.5,1", "--ratio-kc", "0,1",
            "--out", str(tmp_path)]
    assert main(args) == 0
    first = _read(tmp_path / "comparison.csv")
    lines = first.decode().splitlines()
    assert lines[0] == "scheme,ka_over_J,kc_over_ka,tau_s,efficiency"
    assert len(lines) == 1 + 4 * 2 * 2
    # the lossless ratio has no finite transfer time for the optimal scheme
    crop_lossless = [ln.split(",") for ln in lines[1:]
                     if ln.split(",")[0] == "crop" and ln.split(",")[2] == "1"]
    assert len(crop_lossless) == 2
    assert all(f[3] == "" for f in crop_lossless)
    assert all(float(f[4]) == pytest.approx(1.0) for f in crop_lossless)
    assert (tmp_path / "comparison.png").stat().st_size > 0
    assert main(args) == 0
    assert _read(tmp_path / "comparison.csv") == first


def test_synth_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["synth", "--ka", "1", "--kc", "0.75", "--dt", "0.002",
                     "--out", str(out)]) == 0
    assert _read(out1 / "waveform.csv") == _read(out2 / "waveform.csv")
    assert _read(out1 / "waveform.json") == _read(out2 / "waveform.json")


def test_verify_ok_and_report(tmp_path):
    assert main(["verify", "--grid-ka", "1", "--ratio-kc", "0.75",
                 "--trials", "3000", "--seed", "5",
                 "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "verify.json").read_text())
    assert payload["falsified"] is False
    assert payload["eta_bound"] == pytest.approx(0.602221, abs=1e-5)
    assert payload["max_found"] < payload["eta_bound"]
    assert "best_schedule" not in payload


def test_verify_flags_corrupted_bound(tmp_path, monkeypatch):
    monkeypatch.setenv("SPINCROP_ETA_SCALE", "0.005")
    assert main(["verify", "--grid-ka", "1", "--ratio-kc", "0.75",
                 "--trials", "3000", "--seed", "5",
                 "--out", str(tmp_path)]) == 2
    payload = json.loads((tmp_path / "verify.json").read_text())
    assert payload["falsified"] is True
    assert payload["eta_scale"] == 0.005
    assert "best_schedule" in payload
    sched = payload["best_schedule"]
    assert len(sched["durations_s"]) == 32


def test_out_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("SPINCROP_OUT", str(tmp_path / "envout"))
    assert main(["bound", "--ka", "0.5", "--kc", "0.25"]) == 0
    assert (tmp_path / "envout" / "bound.json").exists()
