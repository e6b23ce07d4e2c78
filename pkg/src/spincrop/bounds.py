"""Closed-form limits of relaxation-optimized polarization transfer.

For the transfer Iz -> 2IzSz under scalar coupling J and relaxation rates
(ka, kc), the attainable efficiency is governed by the single dimensionless
ratio

    zeta = sqrt((ka^2 - kc^2) / (J^2 + kc^2)),      eta = sqrt(1 + zeta^2) - zeta.

The optimal trajectory holds the angle between the in-phase and antiphase
transverse vectors at a fixed value gamma* and their length ratio at eta; the
angle theta = atan2(J, -kc) is the direction in which antiphase coherence
builds.  Composite transfers (Iz -> Sz via 2IzSz, and the single-transition
variant) combine the per-step efficiencies eta and eta'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TransferBound:
    """Optimal-transfer invariants for one transfer step.

    theta and gamma_star in rad; zeta, eta, xi = ka/J and
    chi = sqrt(1 + (kc/J)^2) dimensionless.
    """

    theta: float
    zeta: float
    eta: float
    gamma_star: float
    xi: float
    chi: float


@dataclass(frozen=True)
class CompositeBounds:
    """Efficiency limits of the four tabulated transfers."""

    eta_iz_to_izsz: float
    eta_izsz_to_sz: float
    eta_iz_to_sz: float
    eta_single_transition: float


def compute_theta(J, kc):
    """Build-up direction theta = atan2(J, -kc), in (0, pi)."""
    if not J > 0:
        raise ValueError("J must be positive")
    return float(np.arctan2(J, -kc))


def compute_bound(ka, kc, J):
    """Transfer bound for rates (ka, kc) at coupling J.

    Requires J > 0 and |kc| <= ka.  The gamma* branch is fixed in (0, pi] so
    that the lossless limit kc -> ka yields gamma* = pi and the pure
    auto-relaxation case kc = 0 yields gamma* = pi/2.
    """
    if not J > 0:
        raise ValueError("J must be positive")
    if ka < 0 or abs(kc) > ka:
        raise ValueError("rates must satisfy 0 <= |kc| <= ka")
    theta = compute_theta(J, kc)
    zeta = float(np.sqrt((ka ** 2 - kc ** 2) / (J ** 2 + kc ** 2)))
    eta = float(np.sqrt(1 + zeta ** 2) - zeta)
    xi = ka / J
    chi = float(np.sqrt(1 + (kc / J) ** 2))
    if ka == 0 and kc == 0:
        # degenerate relaxation-free input: continuous limit of the kc = 0 case
        gamma_star = np.pi / 2
    else:
        # cot(theta) = -kc/J exactly, theta in (0, pi)
        gamma_star = float(np.arctan2(1 - eta ** 2, (1 + eta ** 2) * (-kc / J)))
        if gamma_star <= 0:
            gamma_star += np.pi
    return TransferBound(theta=theta, zeta=zeta, eta=eta, gamma_star=gamma_star,
                         xi=xi, chi=chi)


def verify_stationarity(bound):
    """Residuals of the two stationarity conditions satisfied by (eta, gamma*).

    res1 = (1/eta) cos(theta - gamma*) + eta cos(theta + gamma*) - 2 xi/chi
    res2 = (1/eta) sin(theta - gamma*) - eta sin(theta + gamma*)

    Both vanish (to rounding) for a correctly computed bound.
    """
    th, g, eta = bound.theta, bound.gamma_star, bound.eta
    res1 = np.cos(th - g) / eta + eta * np.cos(th + g) - 2 * bound.xi / bound.chi
    res2 = np.sin(th - g) / eta - eta * np.sin(th + g)
    return float(res1), float(res2)


def compute_composite_bounds(params):
    """Composite transfer limits from the two per-spin bounds.

    eta bounds Iz -> 2IzSz (rates ka, kc), eta' bounds 2IzSz -> Sz (rates
    ka', kc'); the polarization relay Iz -> Sz is bounded by the product and
    the single-transition transfer by sqrt(eta^2 + eta'^2).
    """
    eta = compute_bound(params.ka, params.kc, params.J).eta
    eta_p = compute_bound(params.ka_prime, params.kc_prime, params.J).eta
    return CompositeBounds(
        eta_iz_to_izsz=eta,
        eta_izsz_to_sz=eta_p,
        eta_iz_to_sz=eta * eta_p,
        eta_single_transition=float(np.hypot(eta, eta_p)),
    )
