"""Pulse programs and their exact piecewise-constant propagation.

A program is a sequence of hard rotations (instantaneous), free-evolution
delays and shaped pulses.  `run` propagates the 15 product-operator
coefficients through one matrix exponential per piecewise-constant step,
subdividing steps longer than dt_max (never across cell boundaries) so the
recorded trajectory is densely sampled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .spinsys import (BASIS, BASIS_INDEX, free_evolution_generator,
                      hard_rotation, rf_generator, unit_state)
from .synth import Waveform

_IDX_TRANSVERSE = (BASIS_INDEX["Ix"], BASIS_INDEX["Iy"],
                   BASIS_INDEX["2IxSz"], BASIS_INDEX["2IySz"])
_IDX_Z = (BASIS_INDEX["Iz"], BASIS_INDEX["2IzSz"])


@dataclass(frozen=True)
class HardRotation:
    """Instantaneous rotation of one spin by `angle` about the transverse
    axis at `phase` (0 = x, pi/2 = y)."""

    spin: str
    phase: float
    angle: float


@dataclass(frozen=True)
class Delay:
    """Free evolution for `duration` seconds."""

    duration: float


@dataclass(frozen=True)
class Shape:
    """A shaped pulse applied to one spin."""

    spin: str
    waveform: Waveform


@dataclass(frozen=True)
class PulseProgram:
    elements: tuple

    def to_json(self):
        out = []
        for el in self.elements:
            if isinstance(el, HardRotation):
                out.append({"type": "hard_rotation", "spin": el.spin,
                            "phase_rad": el.phase, "angle_rad": el.angle})
            elif isinstance(el, Delay):
                out.append({"type": "delay", "duration_s": el.duration})
            elif isinstance(el, Shape):
                wf = el.waveform
                cells = [[float(d), float(a), float(p), float(o)]
                         for d, a, p, o in zip(wf.duration, wf.amplitude,
                                               wf.phase, wf.offset)]
                out.append({"type": "shape", "spin": el.spin, "cells": cells})
            else:
                raise TypeError(f"unknown program element {el!r}")
        return json.dumps({"elements": out}, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text):
        elements = []
        try:
            for el in json.loads(text)["elements"]:
                kind = el["type"]
                if kind == "hard_rotation":
                    elements.append(HardRotation(el["spin"], el["phase_rad"],
                                                 el["angle_rad"]))
                elif kind == "delay":
                    elements.append(Delay(el["duration_s"]))
                elif kind == "shape":
                    cells = np.asarray(el["cells"], dtype=float).reshape(-1, 4)
                    wf = Waveform(
                        duration=cells[:, 0], amplitude=cells[:, 1],
                        phase=cells[:, 2], offset=cells[:, 3],
                        eta_predicted=float("nan"), eta_truncated=float("nan"),
                        epsilon=float("nan"),
                        dt=float(cells[0, 0]) if len(cells) else 0.0,
                        window=None, gamma_star=float("nan"),
                        theta=float("nan"))
                    elements.append(Shape(el["spin"], wf))
                else:
                    raise ValueError(
                        f"unknown program element type {kind!r}")
        except KeyError as exc:
            raise ValueError(f"program element missing key {exc}") from exc
        return cls(tuple(elements))


class TrajectoryRecord:
    """Sampled trajectory: times `t` (n,) and coefficients `coeffs` (n, 15)
    in the product-operator basis."""

    def __init__(self, t, coeffs, params):
        self.t = np.asarray(t, dtype=float)
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.params = params

    def __len__(self):
        return len(self.t)

    def expectations(self, name):
        return self.coeffs[:, BASIS_INDEX[name]]


def run(program, params, initial="Iz", dt_max=None):
    """Propagate `initial` (operator name or 15-vector) through the program.

    Every piecewise-constant stretch is applied through its exact matrix
    exponential; stretches longer than dt_max (default 1e-3/J) are subdivided
    into equal substeps for recording, never across cell boundaries.  Raises
    RuntimeError if the state leaves the unit ball or turns non-finite.
    """
    if dt_max is not None and dt_max <= 0:
        raise ValueError("dt_max must be positive")
    dt_max = dt_max or 1e-3 / params.J
    g_free = free_evolution_generator(params)
    state = (unit_state(initial) if isinstance(initial, str)
             else np.array(initial, dtype=float))
    if state.shape != (15,):
        raise ValueError("initial state must name a basis operator or give "
                         "15 coefficients")
    ts = [0.0]
    coeffs = [state.copy()]
    t = 0.0
    ball = max(1.0, float(state @ state)) * (1.0 + 1e-9)

    def emit(p, reps, h):
        nonlocal state, t
        for _ in range(reps):
            state = p @ state
            t += h
            ts.append(t)
            coeffs.append(state.copy())

    for el in program.elements:
        if isinstance(el, HardRotation):
            state = hard_rotation(el.spin, el.phase, el.angle) @ state
            ts.append(t)
            coeffs.append(state.copy())
        elif isinstance(el, Delay):
            if el.duration < 0:
                raise ValueError("delay duration must be non-negative")
            if el.duration > 0:
                reps = int(np.ceil(el.duration / dt_max))
                h = el.duration / reps
                emit(expm(g_free * h), reps, h)
        elif isinstance(el, Shape):
            wf = el.waveform
            n = len(wf.duration)
            if n == 0:
                continue
            reps = np.ceil(wf.duration / dt_max).astype(int)
            h = wf.duration / reps
            gens = np.empty((n, 15, 15))
            for i in range(n):
                gens[i] = (g_free + rf_generator(el.spin, wf.amplitude[i],
                                                 wf.phase[i], wf.offset[i])) * h[i]
            props = expm(gens)
            for i in range(n):
                emit(props[i], reps[i], h[i])
        else:
            raise TypeError(f"unknown program element {el!r}")
        if not np.all(np.isfinite(state)):
            raise RuntimeError("propagation produced non-finite coefficients")
        if state @ state > ball:
            raise RuntimeError("propagation left the unit ball: "
                               f"|c| = {np.sqrt(state @ state):.6g}")
    return TrajectoryRecord(np.array(ts), np.array(coeffs), params)


def reduced_projection(coeffs):
    """Project states onto the reduced coordinates (l1, l2, r1, r2, gamma).

    Accepts one state (15,) or a batch (n, 15).  gamma is the angle from the
    source transverse vector (Ix, Iy) to the target one (2IxSz, 2IySz), NaN
    where either vector vanishes.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    ix, iy, axz, ayz = (c[:, i] for i in _IDX_TRANSVERSE)
    z1, z2 = (c[:, i] for i in _IDX_Z)
    l1 = np.hypot(ix, iy)
    l2 = np.hypot(axz, ayz)
    r1 = np.hypot(l1, z1)
    r2 = np.hypot(l2, z2)
    gamma = np.where((l1 > 1e-15) & (l2 > 1e-15),
                     np.arctan2(ayz, axz) - np.arctan2(iy, ix), np.nan)
    out = l1, l2, r1, r2, np.mod(gamma, 2 * np.pi)
    if np.ndim(coeffs) == 1:
        return tuple(float(v[0]) for v in out)
    return out


def multiplet_magnitudes(coeffs):
    """Magnitudes of the two multiplet-component Bloch vectors.

    alpha = |(<Ix>+<2IxSz>, <Iy>+<2IySz>, <Iz>+<2IzSz>)| / 2 and beta the
    difference combination; both are non-increasing under free evolution and
    rf on the source spin.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    ii = [BASIS_INDEX[n] for n in ("Ix", "Iy", "Iz")]
    aa = [BASIS_INDEX[n] for n in ("2IxSz", "2IySz", "2IzSz")]
    alpha = 0.5 * np.sqrt(((c[:, ii] + c[:, aa]) ** 2).sum(axis=1))
    beta = 0.5 * np.sqrt(((c[:, ii] - c[:, aa]) ** 2).sum(axis=1))
    if np.ndim(coeffs) == 1:
        return float(alpha[0]), float(beta[0])
    return alpha, beta


def transfer_efficiency(record, target="2IzSz"):
    """Peak coefficient of `target` along the trajectory and its time."""
    vals = record.expectations(target)
    i = int(np.argmax(vals))
    return float(vals[i]), float(record.t[i])


def write_trajectory_csv(record, path, max_rows=None):
    """Write `t_s`, the 15 coefficients, and the reduced/multiplet columns.

    gamma_rad is left empty where undefined.  max_rows thins the output to at
    most that many rows (first and last always kept).
    """
    n = len(record)
    idx = np.arange(n)
    if max_rows is not None and n > max_rows:
        idx = np.unique(np.linspace(0, n - 1, max_rows).round().astype(int))
    l1, l2, r1, r2, gamma = reduced_projection(record.coeffs[idx])
    alpha, beta = multiplet_magnitudes(record.coeffs[idx])
    header = ",".join(("t_s",) + BASIS +
                      ("l1", "l2", "r1", "r2", "gamma_rad",
                       "alpha_mag", "beta_mag"))
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row, i in enumerate(idx):
            cells = [f"{record.t[i]:.12g}"]
            cells += [f"{v:.12g}" for v in record.coeffs[i]]
            cells += [f"{l1[row]:.12g}", f"{l2[row]:.12g}",
                      f"{r1[row]:.12g}", f"{r2[row]:.12g}"]
            cells.append("" if np.isnan(gamma[row]) else f"{gamma[row]:.12g}")
            cells += [f"{alpha[row]:.12g}", f"{beta[row]:.12g}"]
            fh.write(",".join(cells) + "\n")
