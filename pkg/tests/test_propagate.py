"""Program propagation: rotations, delays, shaped pulses, projections and
the trajectory CSV."""

import numpy as np
import pytest

from spincrop.propagate import (Delay, HardRotation, PulseProgram, Shape,
                                TrajectoryRecord, multiplet_magnitudes,
                                reduced_projection, run, transfer_efficiency,
                                write_trajectory_csv)
from spincrop.spinsys import BASIS_INDEX, SystemParams, multiplet_components
from spincrop.synth import Waveform, synthesize_crop

P = SystemParams.from_rates(1.0, 0.8, 0.5)


def _const_shape(duration, amplitude, phase, n=1):
    return Waveform(
        duration=np.full(n, duration / n), amplitude=np.full(n, amplitude),
        phase=np.full(n, phase), offset=np.zeros(n),
        eta_predicted=np.nan, eta_truncated=np.nan, epsilon=np.nan,
        dt=duration / n, window=None, gamma_star=np.nan, theta=np.nan)


def test_rotation_program():
    rec = run(PulseProgram((HardRotation("I", np.pi / 2, np.pi / 2),)), P,
              initial="Iz")
    assert rec.t[-1] == 0.0 and len(rec) == 2
    assert rec.expectations("Ix")[-1] == pytest.approx(1.0, abs=1e-12)


def test_delay_matches_transverse_closed_form():
    tau = 0.37
    rec = run(PulseProgram((Delay(tau),)), P, initial="Ix", dt_max=tau)
    decay = np.exp(-np.pi * P.ka * tau)
    y2 = decay * np.cosh(np.pi * P.kc * tau) * np.sin(np.pi * P.J * tau)
    x2 = -decay * np.sinh(np.pi * P.kc * tau) * np.cos(np.pi * P.J * tau)
    assert rec.expectations("2IySz")[-1] == pytest.approx(y2, abs=1e-12)
    assert rec.expectations("2IxSz")[-1] == pytest.approx(x2, abs=1e-12)
    assert rec.expectations("Sz")[-1] == pytest.approx(0.0, abs=1e-15)


def test_delay_semigroup_and_subdivision():
    one = run(PulseProgram((Delay(0.8),)), P, initial="Iy", dt_max=0.8)
    two = run(PulseProgram((Delay(0.3), Delay(0.5))), P, initial="Iy",
              dt_max=0.8)
    fine = run(PulseProgram((Delay(0.8),)), P, initial="Iy", dt_max=0.1)
    assert np.allclose(one.coeffs[-1], two.coeffs[-1], atol=1e-12)
    assert np.allclose(one.coeffs[-1], fine.coeffs[-1], atol=1e-12)
    assert len(fine) == 9 and fine.t[1] == pytest.approx(0.1)


def test_rotation_reversal_and_shape_rotation_equivalence():
    fwd = PulseProgram((HardRotation("S", 0.4, 1.1),
                        HardRotation("S", 0.4, -1.1)))
    rec = run(fwd, P, initial="2IySx")
    assert np.allclose(rec.coeffs[-1], rec.coeffs[0], atol=1e-12)
    # a strong short constant shape approaches the same hard rotation
    lossless = SystemParams(1e-6)
    angle, phase = 1.3, 0.7
    amp = angle / (2 * np.pi * 1e-5)
    soft = run(PulseProgram((Shape("I", _const_shape(1e-5, amp, phase)),)),
               lossless, initial="Iz", dt_max=1e-5)
    hard = run(PulseProgram((HardRotation("I", phase, angle),)), lossless,
               initial="Iz")
    assert np.allclose(soft.coeffs[-1], hard.coeffs[-1], atol=1e-4)


def test_multiplet_closed_form_under_free_evolution():
    taus = np.linspace(0.0, 1.0, 9)
    rec = run(PulseProgram((Delay(1.0),)), P, initial="Ix", dt_max=0.125)
    alpha, beta = multiplet_magnitudes(rec.coeffs)
    expect_a = 0.5 * np.exp(-np.pi * (P.ka + P.kc) * rec.t)
    expect_b = 0.5 * np.exp(-np.pi * (P.ka - P.kc) * rec.t)
    assert np.allclose(alpha, expect_a, atol=1e-12)
    assert np.allclose(beta, expect_b, atol=1e-12)
    assert np.all(np.diff(alpha) < 0) and np.all(np.diff(beta) < 0)
    # opposite precession at J/2
    a0, b0 = multiplet_components(rec.coeffs[0])
    a1, b1 = multiplet_components(rec.coeffs[-1])
    da = np.arctan2(a1[1], a1[0]) - np.arctan2(a0[1], a0[0])
    db = np.arctan2(b1[1], b1[0]) - np.arctan2(b0[1], b0[0])
    assert da == pytest.approx(np.pi * P.J * 1.0, abs=1e-12)
    assert db == pytest.approx(-np.pi * P.J * 1.0, abs=1e-12)


def test_run_validations():
    with pytest.raises(ValueError):
        run(PulseProgram((Delay(0.1),)), P, initial=np.zeros(14))
    with pytest.raises(ValueError):
        run(PulseProgram((Delay(0.1),)), P, dt_max=0.0)
    with pytest.raises(ValueError):
        run(PulseProgram((Delay(-0.1),)), P)
    with np.errstate(invalid="ignore", over="ignore"), pytest.raises(RuntimeError):
        run(PulseProgram((Shape("I", _const_shape(1.0, 1e308, 0.0)),)), P)


def test_reduced_projection_values():
    c = np.zeros(15)
    c[BASIS_INDEX["Ix"]] = 0.3
    c[BASIS_INDEX["Iy"]] = 0.4
    c[BASIS_INDEX["Iz"]] = 1.2
    c[BASIS_INDEX["2IySz"]] = 0.5
    c[BASIS_INDEX["2IzSz"]] = -0.5
    l1, l2, r1, r2, gamma = reduced_projection(c)
    assert l1 == pytest.approx(0.5) and r1 == pytest.approx(1.3)
    assert l2 == pytest.approx(0.5)
    assert r2 == pytest.approx(np.hypot(0.5, 0.5))
    assert gamma == pytest.approx(np.pi / 2 - np.arctan2(0.4, 0.3), rel=1e-12)
    # gamma undefined when a transverse vector vanishes
    assert np.isnan(reduced_projection(np.zeros(15))[4])


def test_transfer_efficiency_picks_peak():
    t = np.array([0.0, 1.0, 2.0])
    coeffs = np.zeros((3, 15))
    coeffs[:, BASIS_INDEX["2IzSz"]] = [0.1, 0.9, 0.4]
    rec = TrajectoryRecord(t, coeffs, P)
    assert transfer_efficiency(rec) == (0.9, 1.0)


def test_program_json_round_trip():
    wf = synthesize_crop(SystemParams.from_rates(1.0, 1.0, 0.75),
                         truncation_window=0.5)
    prog = PulseProgram((HardRotation("I", np.pi / 2, np.pi / 2), Delay(0.25),
                         Shape("S", wf)))
    text = prog.to_json()
    clone = PulseProgram.from_json(text)
    assert isinstance(clone.elements[2], Shape)
    assert np.allclose(clone.elements[2].waveform.amplitude, wf.amplitude)
    p = SystemParams.from_rates(1.0, 1.0, 0.75)
    a = run(prog, p, initial="Iz")
    b = run(clone, p, initial="Iz")
    assert np.array_equal(a.coeffs[-1], b.coeffs[-1])
    with pytest.raises(ValueError):
        PulseProgram.from_json('{"elements": [{"type": "nap"}]}')
    with pytest.raises(ValueError, match="missing key"):
        PulseProgram.from_json(
            '{"elements": [{"type": "delay", "duration": 0.1}]}')


def test_trajectory_csv_round_trip(tmp_path):
    rec = run(PulseProgram((HardRotation("I", np.pi / 2, np.pi / 2),
                            Delay(0.4))), P, dt_max=0.05)
    path = tmp_path / "traj.csv"
    write_trajectory_csv(rec, path)
    raw = np.genfromtxt(path, delimiter=",", names=True)
    assert len(raw) == len(rec)
    assert np.allclose(raw["t_s"], rec.t, atol=1e-12)
    assert np.allclose(raw["2IzSz".replace("2", "_2")]
                       if "_2IzSz" in raw.dtype.names else raw["2IzSz"],
                       rec.expectations("2IzSz"), atol=1e-10)
    l1, _, _, _, gamma = reduced_projection(rec.coeffs)
    assert np.allclose(raw["l1"], l1, atol=1e-10)
    # the initial Iz row has no transverse vectors: empty gamma field
    assert np.isnan(raw["gamma_rad"][0])
    assert np.isfinite(raw["gamma_rad"][-1])


def test_trajectory_csv_max_rows(tmp_path):
    rec = run(PulseProgram((Delay(1.0),)), P, initial="Ix", dt_max=0.01)
    path = tmp_path / "thin.csv"
    write_trajectory_csv(rec, path, max_rows=11)
    raw = np.genfromtxt(path, delimiter=",", names=True)
    assert len(raw) == 11
    assert raw["t_s"][0] == 0.0
    assert raw["t_s"][-1] == pytest.approx(1.0)
