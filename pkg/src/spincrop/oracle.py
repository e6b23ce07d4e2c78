"""Verification oracle for the transfer bound.

The bound claims no piecewise-constant control schedule drives the reduced
system from (r1, r2) = (1, 0) to r2 > eta.  Two independent checks attack it:
a randomized ceiling check over arbitrary schedules, and a gradient-ascent
search (multi-start L-BFGS-B over segment durations, controls and angles)
that should converge to eta from below but never cross it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .bounds import compute_bound
from .synth import propagate_reduced

CEILING_TOL = 1e-6    # slack above eta that counts as a falsification


@dataclass(frozen=True)
class ControlSchedule:
    """Piecewise-constant reduced controls: per-segment duration (s),
    saturation levels u1, u2 in [0, 1] and inter-vector angle gamma."""

    durations: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        for name in ("durations", "u1", "u2", "gamma"):
            object.__setattr__(self, name,
                               np.atleast_1d(np.asarray(getattr(self, name),
                                                        dtype=float)))
        n = len(self.durations)
        if n < 1:
            raise ValueError("schedule needs at least one segment")
        if any(len(getattr(self, name)) != n for name in ("u1", "u2", "gamma")):
            raise ValueError("schedule columns must share one length")
        if np.any(self.durations < 0):
            raise ValueError("durations must be non-negative")
        if np.any((self.u1 < 0) | (self.u1 > 1) | (self.u2 < 0) | (self.u2 > 1)):
            raise ValueError("controls must lie in [0, 1]")
        if not np.all(np.isfinite(self.gamma)):
            raise ValueError("gamma must be finite")

    @property
    def total_duration(self):
        return float(np.sum(self.durations))

    def to_dict(self):
        return {"durations_s": self.durations.tolist(),
                "u1": self.u1.tolist(), "u2": self.u2.tolist(),
                "gamma_rad": self.gamma.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["durations_s"]), np.asarray(d["u1"]),
                   np.asarray(d["u2"]), np.asarray(d["gamma_rad"]))


def reduced_propagate(schedule, params, r0=(1.0, 0.0)):
    """Final (r1, r2) after the schedule, starting from r0."""
    b = compute_bound(params.ka, params.kc, params.J)
    r = propagate_reduced(schedule.durations, schedule.u1, schedule.u2,
                          schedule.gamma, b, params.J, r0=r0)
    return float(r[0]), float(r[1])


@dataclass(frozen=True)
class CeilingReport:
    eta_bound: float
    max_found: float
    trials: int
    max_segments: int
    seed: int
    falsified: bool
    best_schedule: ControlSchedule

    def to_dict(self):
        out = {"eta_bound": self.eta_bound, "max_found": self.max_found,
               "trials": self.trials, "max_segments": self.max_segments,
               "seed": self.seed, "falsified": self.falsified}
        if self.falsified:
            out["best_schedule"] = self.best_schedule.to_dict()
        return out


@dataclass(frozen=True)
class AscentResult:
    eta_bound: float
    best_found: float
    gap: float
    falsified: bool
    schedule: ControlSchedule

    def to_dict(self):
        out = {"eta_bound": self.eta_bound, "max_found": self.best_found,
               "gap": self.gap, "falsified": self.falsified}
        if self.falsified:
            out["best_schedule"] = self.schedule.to_dict()
        return out


def random_ceiling_check(params, trials=100000, max_segments=32, seed=0):
    """Monte-Carlo attack: `trials` random schedules of `max_segments`
    segments (durations up to 20/(J n), uniform controls and angles), batched
    through the closed-form reduced propagator.  Reports the best r2 found
    and whether it breaches eta + tolerance.
    """
    if trials < 1 or max_segments < 1:
        raise ValueError("trials and max_segments must be positive")
    b = compute_bound(params.ka, params.kc, params.J)
    rng = np.random.default_rng(seed)
    n = max_segments
    chunk = 20000
    best = -np.inf
    best_cols = None
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        dur = rng.uniform(0, 20.0 / (params.J * n), (n, m))
        u1 = rng.uniform(0, 1, (n, m))
        u2 = rng.uniform(0, 1, (n, m))
        gam = rng.uniform(0, 2 * np.pi, (n, m))
        r2 = propagate_reduced(dur, u1, u2, gam, b, params.J)[1]
        j = int(np.argmax(r2))
        if r2[j] > best:
            best = float(r2[j])
            best_cols = (dur[:, j].copy(), u1[:, j].copy(),
                         u2[:, j].copy(), gam[:, j].copy())
        done += m
    return CeilingReport(
        eta_bound=b.eta, max_found=best, trials=trials,
        max_segments=max_segments, seed=seed,
        falsified=best > b.eta + CEILING_TOL,
        best_schedule=ControlSchedule(*best_cols))


def ascent_search(params, n_segments=50, horizon=None, iterations=2000,
                  seed=0, n_scout=6144, starts=3, cycles=3):
    """Gradient-ascent attack on the bound.

    Optimizes all 4 n_segments schedule parameters by L-BFGS-B from the best
    of a structured scout ensemble (free-angle schedules, constant-angle ones,
    and constant-angle with monotone control ramps; ramps match the optimal
    policy's shape).  Each start refines first on arcsinh(r2/1e-6), which
    keeps a usable gradient where r2 is still exponentially small, then on the
    raw objective, followed by perturbation-restart cycles to climb out of
    local maxima.  The search should approach eta from below; crossing
    eta + tolerance falsifies the bound.
    """
    J = params.J
    b = compute_bound(params.ka, params.kc, J)
    horizon = horizon or 25.0 / J
    nseg = n_segments
    dmax = 4.0 * horizon / nseg
    n4 = 4 * nseg
    rng = np.random.default_rng(seed)
    lo = np.zeros(n4)
    hi = np.concatenate([np.full(nseg, dmax), np.ones(2 * nseg),
                         np.full(nseg, 2 * np.pi)])
    rows = np.arange(n4)

    def batch_r2(x):
        return propagate_reduced(x[:nseg], x[nseg:2 * nseg],
                                 x[2 * nseg:3 * nseg], x[3 * nseg:],
                                 b, J)[1]

    h = 1e-6

    def value_and_grad(x, scale):
        # central differences, batched: columns = [x, x+h e_i ..., x-h e_i ...]
        xp = np.tile(x[:, None], (1, n4))
        xm = xp.copy()
        xp[rows, rows] = np.minimum(xp[rows, rows] + h, hi)
        xm[rows, rows] = np.maximum(xm[rows, rows] - h, lo)
        dx = xp[rows, rows] - xm[rows, rows]
        r2 = batch_r2(np.concatenate([x[:, None], xp, xm], axis=1))
        if scale == "asinh":
            r2 = np.arcsinh(r2 / 1e-6)
        return -r2[0], -(r2[1:n4 + 1] - r2[n4 + 1:]) / dx

    m = n_scout // 3

    def draw(kind, m):
        dur = rng.uniform(0, dmax, (nseg, m)) * rng.uniform(0, 1, (1, m))
        u1 = rng.uniform(0, 1, (nseg, m))
        u2 = rng.uniform(0, 1, (nseg, m))
        if kind == "free":
            gam = rng.uniform(0, 2 * np.pi, (nseg, m))
        else:
            gam = np.tile(rng.uniform(0, 2 * np.pi, (1, m)), (nseg, 1))
        if kind == "ramp":
            u1 = np.sort(u1, axis=0)
            u2 = np.sort(u2, axis=0)[::-1]
        return np.vstack([dur, u1, u2, gam])

    scouts = np.concatenate([draw("free", m), draw("const", m),
                             draw("ramp", m)], axis=1)
    order = np.argsort(batch_r2(scouts))[::-1]
    bnds = list(zip(lo, hi))
    opts = dict(maxiter=iterations, ftol=1e-18, gtol=1e-14, maxcor=30)

    def refine(x0):
        res = minimize(value_and_grad, x0, args=("asinh",), jac=True,
                       method="L-BFGS-B", bounds=bnds, options=opts)
        res = minimize(value_and_grad, res.x, args=("raw",), jac=True,
                       method="L-BFGS-B", bounds=bnds, options=opts)
        return float(batch_r2(res.x[:, None])[0]), res.x

    best = -np.inf
    bestx = None
    for s in range(starts):
        v, x = refine(scouts[:, order[s]])
        for _ in range(cycles):
            pert = np.clip(x + rng.normal(0, 0.03, n4) * (hi - lo), lo, hi)
            v2, x2 = refine(pert)
            if v2 > v:
                v, x = v2, x2
        if v > best:
            best, bestx = v, x
    schedule = ControlSchedule(bestx[:nseg], bestx[nseg:2 * nseg],
                               bestx[2 * nseg:3 * nseg], bestx[3 * nseg:])
    return AscentResult(eta_bound=b.eta, best_found=best, gap=b.eta - best,
                        falsified=best > b.eta + CEILING_TOL,
                        schedule=schedule)
