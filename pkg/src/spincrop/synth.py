"""Synthesis of the relaxation-optimized (CROP) transfer pulse.

The transfer Iz -> 2IzSz reduces, on the optimal manifold, to a two-state
system for the magnitudes (r1, r2) of the source and target operator balls,

    d/dt [r1, r2] = pi*J * [[-xi u1^2,                chi u1 u2 cos(theta+gamma)],
                            [chi u1 u2 cos(theta-gamma),             -xi u2^2  ]] [r1, r2],

controlled by the polar angles of the two transverse vectors (u_v = cos beta_v)
and the angle gamma between them.  The optimum holds gamma = gamma* and the
transverse length ratio l2/l1 = eta; the attained efficiency is eta.

Two integrators are provided.  `integrate_optimal_trajectory` evolves the
reduced system directly under the time-optimal saturation policy (the larger
control pinned at 1).  `synthesize_crop` integrates the self-consistent closed
loop of the six transverse/longitudinal coordinates driven by the rf field
(`rf_amplitude`, `rf_phase`) evaluated on the instantaneous state, which keeps
both constants of motion exact, and emits the field as a uniformly sampled
waveform.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from .bounds import compute_bound

_SEED_TILT = 1.0        # longitudinal seed fraction, see synthesize_crop
_DRAIN_FACTOR = 30.0    # stop the flow when l1 < _DRAIN_FACTOR * epsilon
_EMIT_SUBSAMPLES = 16   # fine feedback samples vector-averaged per cell
_STALL_STEPS = 5        # reduced-trajectory stop: consecutive non-increases


@dataclass(frozen=True)
class ReducedState:
    """Reduced coordinates at one instant: ball magnitudes r, transverse
    magnitudes l = r cos(beta), and the angle gamma between the transverse
    vectors."""

    t: float
    r1: float
    r2: float
    l1: float
    l2: float
    beta1: float
    beta2: float
    gamma: float


class ReducedTrajectory:
    """Sampled optimal reduced trajectory; indexable as a sequence of
    ReducedState."""

    def __init__(self, t, r1, r2, u1, u2, gamma, bound, converged):
        self.t = t
        self.r1 = r1
        self.r2 = r2
        self.u1 = u1
        self.u2 = u2
        self.l1 = u1 * r1
        self.l2 = u2 * r2
        self.beta1 = np.arccos(np.clip(u1, -1.0, 1.0))
        self.beta2 = np.arccos(np.clip(u2, -1.0, 1.0))
        self.gamma = gamma
        self.bound = bound
        self.converged = converged

    def __len__(self):
        return len(self.t)

    def __getitem__(self, i):
        return ReducedState(
            t=float(self.t[i]), r1=float(self.r1[i]), r2=float(self.r2[i]),
            l1=float(self.l1[i]), l2=float(self.l2[i]),
            beta1=float(self.beta1[i]), beta2=float(self.beta2[i]),
            gamma=float(self.gamma[i]),
        )

    @property
    def final_r2(self):
        return float(self.r2[-1])


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled shaped pulse.

    Arrays hold one entry per cell: duration (s), amplitude (Hz), phase (rad)
    and resonance offset (Hz).  The trailing `n_hard_cells` cells encode
    instantaneous rotations (amplitude angle/(2 pi dt), above the shaping
    ceiling).  Metadata records the bootstrap epsilon, the sample step, the
    requested truncation window and the reduced-model efficiency predictions
    before and after truncation.
    """

    duration: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray
    offset: np.ndarray
    eta_predicted: float
    eta_truncated: float
    epsilon: float
    dt: float
    window: float | None
    gamma_star: float
    theta: float
    spin: str = "I"
    n_hard_cells: int = 0
    warnings: tuple = field(default_factory=tuple)

    @property
    def times(self):
        """Start time of each cell."""
        return np.concatenate(([0.0], np.cumsum(self.duration[:-1])))

    @property
    def total_duration(self):
        return float(np.sum(self.duration))

    def metadata(self):
        return {
            "eta_predicted": self.eta_predicted,
            "eta_truncated": self.eta_truncated,
            "epsilon": self.epsilon,
            "dt_s": self.dt,
            "window_s": self.window,
            "gamma_star_rad": self.gamma_star,
            "theta_rad": self.theta,
            "spin": self.spin,
            "n_hard_cells": self.n_hard_cells,
            "warnings": list(self.warnings),
        }


def reduced_drift(l1, l2, gamma, params):
    """Drift of the transverse magnitudes under free evolution.

    Returns pi*J*(-xi l1 + chi cos(theta+gamma) l2,
                  chi cos(theta-gamma) l1 - xi l2).
    """
    b = compute_bound(params.ka, params.kc, params.J)
    pj = np.pi * params.J
    dl1 = pj * (-b.xi * l1 + b.chi * np.cos(b.theta + gamma) * l2)
    dl2 = pj * (b.chi * np.cos(b.theta - gamma) * l1 - b.xi * l2)
    return dl1, dl2


def optimal_controls(state, bound):
    """Time-optimal controls obeying u2/u1 = eta r1/r2.

    The larger control saturates at 1: u1 = min(1, r2/(eta r1)),
    u2 = min(1, eta r1/r2).
    """
    r1, r2 = state.r1, state.r2
    if r1 == 0 and r2 == 0:
        raise ValueError("controls undefined at r1 = r2 = 0")
    eta = bound.eta
    u1 = 1.0 if eta * r1 <= r2 else r2 / (eta * r1)
    u2 = 1.0 if eta * r1 >= r2 else eta * r1 / r2
    return u1, u2


def _saturation_controls(r1, r2, eta):
    # array version of optimal_controls for the integrator
    g = eta * r1 / np.maximum(r2, 1e-300)
    u1 = np.where(g >= 1.0, 1.0 / np.maximum(g, 1.0), 1.0)
    u2 = np.where(g >= 1.0, 1.0, g)
    return u1, u2


def integrate_optimal_trajectory(params, epsilon=1e-4, dt_sample=None,
                                 horizon=None, bound=None):
    """Reduced trajectory under the saturation policy, from r = (1, epsilon).

    Fixed-step RK4 at dt_sample (default 1e-3/J); stops when r2 has not
    increased for a few consecutive steps or at the horizon (default 40/J),
    warning in the latter case.  The final r2 reaches eta - O(epsilon) up to
    integration error.
    """
    if not 0 < epsilon < 0.1:
        raise ValueError("bootstrap epsilon must lie in (0, 0.1)")
    J = params.J
    b = bound or compute_bound(params.ka, params.kc, J)
    dt = dt_sample or 1e-3 / J
    horizon = horizon or 40.0 / J
    pj = np.pi * J
    cp, cm = np.cos(b.theta + b.gamma_star), np.cos(b.theta - b.gamma_star)

    def f(r):
        u1, u2 = _saturation_controls(r[0], r[1], b.eta)
        return np.array([
            pj * (-b.xi * u1 ** 2 * r[0] + b.chi * u1 * u2 * cp * r[1]),
            pj * (b.chi * u1 * u2 * cm * r[0] - b.xi * u2 ** 2 * r[1]),
        ])

    n_max = int(np.ceil(horizon / dt))
    r = np.array([1.0, epsilon])
    rs = [r]
    stall = 0
    for _ in range(n_max):
        k1 = f(r)
        k2 = f(r + 0.5 * dt * k1)
        k3 = f(r + 0.5 * dt * k2)
        k4 = f(r + dt * k3)
        r = r + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        stall = stall + 1 if r[1] <= rs[-1][1] + 1e-14 else 0
        rs.append(r)
        if stall >= _STALL_STEPS:
            break
    converged = stall >= _STALL_STEPS
    rs = np.array(rs)
    r1, r2 = rs[:, 0], rs[:, 1]
    if not converged:
        warnings.warn(
            f"reduced trajectory still transferring at horizon {horizon:g} s, "
            f"achieved r2 = {r2[-1]:.6g} (bound eta = {b.eta:.6g})")
    u1, u2 = _saturation_controls(r1, r2, b.eta)
    t = np.arange(len(r1)) * dt
    return ReducedTrajectory(t, r1, r2, u1, u2,
                             np.full_like(r1, b.gamma_star), b, converged)


def rf_phase(beta1, beta2, gamma_star):
    """Rf phase (relative to the l1 direction) holding the constants of motion.

    phi = atan(tan beta1 / (tan beta2 sin gamma*) - cot gamma*), evaluated in
    atan2 form so the beta2 < 0 branch is handled continuously.
    """
    if np.any(np.abs(np.sin(gamma_star)) < 1e-15):
        raise ValueError("gamma* = 0 or pi leaves the rf phase undefined")
    t1, t2 = np.tan(beta1), np.tan(beta2)
    return np.arctan2(t1 - t2 * np.cos(gamma_star), t2 * np.sin(gamma_star))


def rf_amplitude(beta1, beta2, phi, bound, J):
    """Rf amplitude (Hz) holding the constants of motion at phase phi.

    A = (1/2) (cos(theta-gamma*) - eta^2 cos(theta+gamma*)) chi J
        / ((tan beta1 sin phi + tan beta2 sin(gamma* - phi)) eta).

    Singular where the denominator vanishes (fully transverse state, the
    crossover of the saturation policy); scalar input raises there, array
    input returns inf for the synthesis loop to clamp at its ceiling.
    """
    g, th, eta = bound.gamma_star, bound.theta, bound.eta
    numer = np.cos(th - g) - eta ** 2 * np.cos(th + g)
    den = (np.tan(beta1) * np.sin(phi) + np.tan(beta2) * np.sin(g - phi)) * eta
    with np.errstate(divide="ignore", invalid="ignore"):
        amp = 0.5 * numer * bound.chi * J / den
    if np.isscalar(beta1) and not np.isfinite(amp):
        raise ValueError("rf amplitude singular: tan(beta1) sin(phi) + "
                         "tan(beta2) sin(gamma*-phi) = 0")
    return amp


def propagate_reduced(durations, u1, u2, gamma, bound, J, r0=(1.0, 0.0)):
    """Propagate the reduced system through piecewise-constant controls.

    Each segment is applied with its exact 2x2 matrix exponential.  Inputs of
    shape (N,) propagate one schedule; (N, B) propagates B schedules at once.
    Returns the final (r1, r2) as shape (2,) or (2, B).
    """
    durations = np.asarray(durations, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    pj = np.pi * J
    xi, chi, th = bound.xi, bound.chi, bound.theta
    shape = durations.shape[1:] if durations.ndim > 1 else ()
    r = np.empty((2,) + shape)
    r[0], r[1] = r0
    for k in range(durations.shape[0]):
        m11 = -pj * xi * u1[k] ** 2
        m22 = -pj * xi * u2[k] ** 2
        m12 = pj * chi * u1[k] * u2[k] * np.cos(th + gamma[k])
        m21 = pj * chi * u1[k] * u2[k] * np.cos(th - gamma[k])
        s = 0.5 * (m11 + m22)
        b11 = m11 - s
        q2 = b11 ** 2 + m12 * m21
        q = np.sqrt(np.abs(q2))
        qd = np.minimum(q * durations[k], 700.0)  # dynamics is contractive; defensive clip
        pos = q2 > 0
        c = np.where(pos, np.cosh(qd), np.cos(qd))
        sn = np.where(pos, np.sinh(qd), np.sin(qd))
        f = np.where(q > 1e-300, sn / np.where(q > 0, q, 1.0), durations[k])
        e = np.exp(s * durations[k])
        r0_, r1_ = r[0], r[1]
        r = np.stack([e * (c * r0_ + f * (b11 * r0_ + m12 * r1_)),
                      e * (c * r1_ + f * (m21 * r0_ - b11 * r1_))])
    return r


def _feedback(y, bound, J, ceiling):
    """Field (A, phi_absolute) and saturation measure R on 6-state samples."""
    y = np.atleast_2d(np.asarray(y).T).T
    x1, y1, z1, x2, y2, z2 = y
    l1 = np.hypot(x1, y1)
    l2 = np.hypot(x2, y2)
    beta1 = np.arctan2(z1, l1)
    beta2 = np.arctan2(z2, l2)
    phi_rel = rf_phase(beta1, beta2, bound.gamma_star)
    amp = rf_amplitude(beta1, beta2, phi_rel, bound, J)
    amp = np.clip(np.nan_to_num(amp, nan=ceiling, posinf=ceiling, neginf=0.0),
                  0.0, ceiling)
    return amp, np.arctan2(y1, x1) + phi_rel


def _closed_loop(J, ka, kc, epsilon, ceiling, horizon, lstop):
    """Integrate the 6 coordinates (Ix, Iy, Iz, 2IxSz, 2IySz, 2IzSz) under the
    feedback field.  Returns the bound, the dense solution, its end time and
    which terminal event fired ('drained', 'saturated' or 'horizon')."""
    b = compute_bound(ka, kc, J)
    g, eta = b.gamma_star, b.eta
    power = J * b.chi * (np.cos(b.theta - g) - eta ** 2 * np.cos(b.theta + g)) / (2 * eta)
    pj, pa, pc = np.pi * J, np.pi * ka, np.pi * kc

    def rhs(t, y):
        amp, phi = _feedback(y, b, J, ceiling)
        w = 2 * np.pi * amp[0]
        sp, cp = np.sin(phi[0]), np.cos(phi[0])
        x1, y1, z1, x2, y2, z2 = y
        return [
            -pa * x1 - pj * y2 - pc * x2 + w * sp * z1,
            -pa * y1 + pj * x2 - pc * y2 - w * cp * z1,
            -w * sp * x1 + w * cp * y1,
            -pa * x2 - pj * y1 - pc * x1 + w * sp * z2,
            -pa * y2 + pj * x1 - pc * y1 - w * cp * z2,
            -w * sp * x2 + w * cp * y2,
        ]

    def drained(t, y):
        return np.hypot(y[0], y[1]) - lstop
    drained.terminal = True
    drained.direction = -1

    def saturated(t, y):
        # feedback amplitude reaches the ceiling: R = P/A falls through P/ceiling
        a = y[2] / np.hypot(y[0], y[1])
        bb = y[5] / np.hypot(y[3], y[4])
        return np.hypot(a - bb * np.cos(g), bb * np.sin(g)) - power / ceiling
    saturated.terminal = True
    saturated.direction = -1

    # bootstrap seed: an O(epsilon) rotation of Iz placing l2/l1 = eta at
    # gamma = gamma*, tilted out of the transverse plane (z2 = epsilon) to
    # escape the z2 = 0 line, which is invariant but stalls when gamma* = pi/2
    l1 = epsilon / eta
    y0 = [l1, 0.0, np.sqrt(1 - l1 ** 2),
          epsilon * np.cos(g), epsilon * np.sin(g), _SEED_TILT * epsilon]
    sol = solve_ivp(rhs, (0.0, horizon), y0, method="DOP853",
                    rtol=1e-11, atol=1e-14, dense_output=True,
                    events=(drained, saturated))
    if sol.t_events[1].size:
        stop = "saturated"
    elif sol.t_events[0].size:
        stop = "drained"
    else:
        stop = "horizon"
    return b, sol, float(sol.t[-1]), stop


def synthesize_crop(params, epsilon=1e-4, dt_sample=None, truncation_window=None,
                    spin="I", ceiling=None, horizon=None):
    """Synthesize the optimal transfer waveform for one spin side.

    spin "I" synthesizes Iz -> 2IzSz with the (ka, kc) rates; spin "S"
    synthesizes 2IzSz -> Sz with (ka', kc'), the same construction with the
    spin roles swapped.  The closed-loop flow is emitted as cells of length
    dt_sample (vector-averaged field per cell); if the feedback saturates at
    the amplitude ceiling the residual transfer is completed by a trailing
    hard rotation, encoded as a single cell and counted in n_hard_cells.

    The truncation window (default: none) is centered on the cell of fastest
    transfer (peak dr2/dt) and cut symmetrically; the predicted truncated
    efficiency is the reduced-model propagation from (r1, r2) = (1, 0) through
    the windowed control samples.
    """
    if spin not in ("I", "S"):
        raise ValueError("spin must be 'I' or 'S'")
    ka, kc = (params.ka, params.kc) if spin == "I" else (params.ka_prime,
                                                         params.kc_prime)
    J = params.J
    if abs(kc) >= ka:
        raise ValueError("synthesis needs |kc| < ka: at |kc| = ka the optimal "
                         "transfer is infinitely slow (the bound is still defined)")
    if not 0 < epsilon < 0.1:
        raise ValueError("bootstrap epsilon must lie in (0, 0.1)")
    if truncation_window is not None and truncation_window <= 0:
        raise ValueError("truncation window must be positive (got "
                         f"{truncation_window!r}); omit it to keep the full pulse")
    dt = dt_sample or 1e-3 / J
    ceiling = ceiling or 50.0 * J
    if horizon is None:
        horizon = (60.0 if abs(kc) > 0.99 * ka else 40.0) / J

    b, sol, t_end, stop = _closed_loop(J, ka, kc, epsilon, ceiling, horizon,
                                       _DRAIN_FACTOR * epsilon)
    notes = []
    if stop == "horizon":
        notes.append(f"flow still transferring at horizon {horizon:g} s")

    # emit the shaped cells: vector-average the feedback field over fine samples
    n = max(1, int(np.ceil((t_end - 1e-12) / dt)))
    sub = _EMIT_SUBSAMPLES
    t_fine = np.minimum((np.arange(n * sub) + 0.5) * (dt / sub), t_end)
    amp_f, phi_f = _feedback(sol.sol(t_fine), b, J, ceiling)
    ax = (amp_f * np.cos(phi_f)).reshape(n, sub).mean(axis=1)
    ay = (amp_f * np.sin(phi_f)).reshape(n, sub).mean(axis=1)
    amp = np.hypot(ax, ay)
    phase = np.arctan2(ay, ax)

    # control schedule at the cell centers, for the truncation bookkeeping
    t_c = np.minimum((np.arange(n) + 0.5) * dt, t_end)
    r1_c, r2_c, u1_c, u2_c, gam_c = _reduced_samples(sol.sol(t_c))
    rate = np.pi * J * (b.chi * u1_c * u2_c * np.cos(b.theta - gam_c) * r1_c
                        - b.xi * u2_c ** 2 * r2_c)

    # trailing hard rotations: complete the transfer when the feedback
    # saturated, and flip the target ball if it ends inverted
    x1, y1, z1, x2, y2, z2 = sol.sol(t_end)
    l2 = np.hypot(x2, y2)
    hard = []
    if stop == "saturated":
        angle = np.arctan2(l2 * np.sin(b.gamma_star), z2)
        hard.append((angle, np.arctan2(y1, x1)))
        z2 = np.hypot(l2 * np.sin(b.gamma_star), z2)
    if z2 < 0:
        hard.append((np.pi, 0.0))

    # truncate symmetrically about the transfer peak
    keep = slice(0, n)
    window_clipped = truncation_window
    if truncation_window is not None:
        total = n * dt
        if truncation_window >= total:
            if truncation_window > total:
                notes.append(
                    f"window {truncation_window:g} s exceeds the synthesized "
                    f"duration {total:g} s; full pulse returned")
        else:
            t_peak = t_c[int(np.argmax(rate))]
            lo = t_peak - truncation_window / 2
            hi = t_peak + truncation_window / 2
            inside = np.nonzero((t_c >= lo) & (t_c <= hi))[0]
            if inside.size == 0:
                inside = np.array([int(np.argmax(rate))])
            keep = slice(int(inside[0]), int(inside[-1]) + 1)
            if hi < t_end:
                hard = []  # the endgame belongs to the discarded tail

    eta_predicted = float(propagate_reduced(
        np.full(n, dt), u1_c, u2_c, gam_c, b, J)[1])
    eta_truncated = float(propagate_reduced(
        np.full(keep.stop - keep.start, dt), u1_c[keep], u2_c[keep],
        gam_c[keep], b, J)[1])

    amp = amp[keep]
    phase = phase[keep]
    for angle, axis in hard:
        amp = np.append(amp, angle / (2 * np.pi * dt))
        phase = np.append(phase, axis)
    m = len(amp)
    return Waveform(
        duration=np.full(m, dt), amplitude=amp, phase=np.unwrap(phase),
        offset=np.zeros(m), eta_predicted=eta_predicted,
        eta_truncated=eta_truncated, epsilon=epsilon, dt=dt,
        window=window_clipped, gamma_star=b.gamma_star, theta=b.theta,
        spin=spin, n_hard_cells=len(hard), warnings=tuple(notes),
    )


def _reduced_samples(y):
    x1, y1, z1, x2, y2, z2 = np.atleast_2d(np.asarray(y).T).T
    l1 = np.hypot(x1, y1)
    l2 = np.hypot(x2, y2)
    r1 = np.hypot(l1, z1)
    r2 = np.hypot(l2, z2)
    gamma = np.arctan2(y2, x2) - np.arctan2(y1, x1)
    return r1, r2, l1 / r1, l2 / r2, gamma


def crop_schedule(params, epsilon=1e-4, dt_sample=None, horizon=None, spin="I"):
    """Reduced control schedule (durations, u1, u2, gamma) of the closed loop.

    The schedule propagated through the reduced system from (1, 0) reproduces
    the synthesized efficiency; it is the natural input for the verification
    search.
    """
    ka, kc = (params.ka, params.kc) if spin == "I" else (params.ka_prime,
                                                         params.kc_prime)
    J = params.J
    if abs(kc) >= ka:
        raise ValueError("synthesis needs |kc| < ka")
    dt = dt_sample or 1e-3 / J
    if horizon is None:
        horizon = (60.0 if abs(kc) > 0.99 * ka else 40.0) / J
    _, sol, t_end, _ = _closed_loop(J, ka, kc, epsilon, 50.0 * J, horizon,
                                    _DRAIN_FACTOR * epsilon)
    n = max(1, int(np.ceil((t_end - 1e-12) / dt)))
    t_c = np.minimum((np.arange(n) + 0.5) * dt, t_end)
    _, _, u1, u2, gamma = _reduced_samples(sol.sol(t_c))
    return np.full(n, dt), u1, u2, np.mod(gamma, 2 * np.pi)


def to_frequency_form(waveform):
    """Re-express phase modulation as piecewise-constant resonance offsets.

    The offset column becomes nu = (1/2 pi) d(phase)/dt (finite differences of
    the unwrapped phase at the cell centers); the phase column keeps only the
    per-cell residual after removing the accumulated offset phase.
    """
    pu = np.unwrap(waveform.phase)
    centers = waveform.times + waveform.duration / 2
    if len(pu) > 1:
        nu = np.gradient(pu, centers) / (2 * np.pi)
    else:
        nu = np.zeros_like(pu)
    residual = pu - _accumulated_phase(nu, centers)
    return replace(waveform, phase=residual, offset=nu)


def to_phase_form(waveform):
    """Inverse of to_frequency_form: fold the offsets back into the phase."""
    centers = waveform.times + waveform.duration / 2
    phase = waveform.phase + _accumulated_phase(waveform.offset, centers)
    return replace(waveform, phase=phase, offset=np.zeros_like(waveform.offset))


def _accumulated_phase(nu, centers):
    # phase accumulated by the offsets at the cell centers, zero at the first
    acc = np.zeros_like(nu)
    if len(nu) > 1:
        steps = np.diff(centers) * np.pi * (nu[1:] + nu[:-1])  # trapezoid, x2pi/2
        acc[1:] = np.cumsum(steps)
    return acc


def write_waveform_csv(waveform, path):
    """Write cells as CSV `t_s,amplitude_hz,phase_rad,offset_hz`."""
    with open(path, "w") as fh:
        fh.write("t_s,amplitude_hz,phase_rad,offset_hz\n")
        for t, a, p, o in zip(waveform.times, waveform.amplitude,
                              waveform.phase, waveform.offset):
            fh.write(f"{t:.12g},{a:.12g},{p:.12g},{o:.12g}\n")


def write_waveform_meta(waveform, path):
    """Write the metadata sidecar JSON."""
    with open(path, "w") as fh:
        json.dump(waveform.metadata(), fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_waveform_csv(path, meta=None):
    """Read a waveform CSV (plus optional metadata dict) back."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    t, amp, phase, offset = data.T
    durations = np.diff(t, append=2 * t[-1] - (t[-2] if len(t) > 1 else 0.0))
    meta = meta or {}
    return Waveform(
        duration=durations, amplitude=amp, phase=phase, offset=offset,
        eta_predicted=meta.get("eta_predicted", float("nan")),
        eta_truncated=meta.get("eta_truncated", float("nan")),
        epsilon=meta.get("epsilon", float("nan")),
        dt=meta.get("dt_s", float(durations[0])),
        window=meta.get("window_s"), gamma_star=meta.get("gamma_star_rad",
                                                         float("nan")),
        theta=meta.get("theta_rad", float("nan")),
        spin=meta.get("spin", "I"),
        n_hard_cells=meta.get("n_hard_cells", 0),
        warnings=tuple(meta.get("warnings", ())),
    )
