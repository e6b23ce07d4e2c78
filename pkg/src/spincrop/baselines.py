"""Fixed-delay transfer baselines and their mixing-time optimization.

All three schemes evolve transverse source magnetization freely and read an
anti-phase coherence after a delay tau; with the transverse relaxation rate
ka and the cross-correlation rate kc the amplitudes follow in closed form
from the 4x4 transverse block:

    <2IySz>(tau) = exp(-pi ka tau) cosh(pi kc tau) sin(pi J tau)
    <2IxSz>(tau) = -exp(-pi ka tau) sinh(pi kc tau) cos(pi J tau)

starting from <Ix> = 1.  The J-coupling pathway (in-phase/anti-phase, the
INEPT read-out), the pure cross-correlation pathway (CRIPT) and their
quadrature combination (CRINEPT) are |y|, |x| and hypot(x, y).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .bounds import compute_bound
from .synth import integrate_optimal_trajectory

_FLAT_LEVEL = 1e-12


def _antiphase_components(params, tau):
    tau = np.asarray(tau, dtype=float)
    decay = np.exp(-np.pi * params.ka * tau)
    y = decay * np.cosh(np.pi * params.kc * tau) * np.sin(np.pi * params.J * tau)
    x = -decay * np.sinh(np.pi * params.kc * tau) * np.cos(np.pi * params.J * tau)
    return x, y


def inept_efficiency(params, tau):
    """|<2IySz>| after free evolution of Ix for tau (the J-coupling pathway)."""
    return np.abs(_antiphase_components(params, tau)[1])


def cript_efficiency(params, tau):
    """|<2IxSz>| after free evolution of Ix (the cross-correlation pathway);
    identically zero when kc = 0."""
    return np.abs(_antiphase_components(params, tau)[0])


def crinept_efficiency(params, tau):
    """Quadrature sum of both pathways, hypot(<2IxSz>, <2IySz>)."""
    x, y = _antiphase_components(params, tau)
    return np.hypot(x, y)


SCHEMES = {
    "inept": inept_efficiency,
    "cript": cript_efficiency,
    "crinept": crinept_efficiency,
}


@dataclass(frozen=True)
class SchemeResult:
    scheme: str
    tau: float
    efficiency: float
    curve_tau: np.ndarray
    curve_eff: np.ndarray
    flat: bool


def optimize_mixing_time(scheme, params, bracket=None, n_grid=601):
    """Best mixing time for a baseline scheme.

    Samples the efficiency curve on `bracket` (default (0, 3/J]), takes the
    first global maximum of the samples and refines it on the bracketing
    subinterval.  The first maximum matters: the curves are oscillatory and
    for vanishing relaxation all lobes tie, where tau = 1/(2J) is the answer.
    A curve flat at zero (CRIPT with kc = 0) is flagged and gets tau = 0.
    """
    if callable(scheme):
        fn, name = scheme, getattr(scheme, "__name__", "custom")
    else:
        try:
            fn = SCHEMES[scheme]
        except KeyError:
            raise ValueError(f"unknown scheme {scheme!r}; "
                             f"choose from {sorted(SCHEMES)}") from None
        name = scheme
    lo, hi = bracket or (0.0, 3.0 / params.J)
    if not 0 <= lo < hi:
        raise ValueError("bracket must satisfy 0 <= lo < hi")
    taus = np.linspace(lo, hi, n_grid)
    effs = np.asarray(fn(params, taus), dtype=float)
    if effs.max() < _FLAT_LEVEL:
        return SchemeResult(name, 0.0, 0.0, taus, effs, True)
    i = int(np.argmax(effs >= effs.max() * (1 - 1e-12)))
    res = minimize_scalar(lambda t: -fn(params, t), method="bounded",
                          bounds=(taus[max(i - 1, 0)], taus[min(i + 1, n_grid - 1)]),
                          options={"xatol": 1e-12})
    tau = float(res.x)
    return SchemeResult(name, tau, float(fn(params, tau)), taus, effs, False)


def crop_reference(params):
    """Efficiency and duration of the optimal transfer, for comparisons.

    The efficiency is the analytic bound eta; the duration is taken from the
    reduced optimal trajectory (NaN at |kc| = ka, where it diverges).
    """
    b = compute_bound(params.ka, params.kc, params.J)
    if abs(params.kc) >= params.ka:
        return b.eta, float("nan")
    traj = integrate_optimal_trajectory(params)
    return b.eta, float(traj.t[-1])
