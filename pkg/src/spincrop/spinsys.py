"""Two-spin product-operator state space and its evolution generators.

The state of a scalar-coupled spin-1/2 pair (I, S) in the spin-diffusion limit
is a 15-vector of expectation values of the normalized product operators

    Ix Iy Iz Sx Sy Sz 2IxSx 2IxSy 2IxSz 2IySx 2IySy 2IySz 2IzSx 2IzSy 2IzSz

(the identity component is conserved and dropped).  Free evolution couples each
spin's in-phase transverse components to the antiphase components of the same
spin through the scalar coupling J and the auto/cross-correlated relaxation
rates ka = kDD + kCSA and kc (DD/CSA interference); the longitudinal operators
Iz, Sz, 2IzSz are conserved.  Transverse rf irradiation of one spin rotates its
longitudinal coordinates into the transverse plane, acting identically on
linear and bilinear operators of that spin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

BASIS = (
    "Ix", "Iy", "Iz", "Sx", "Sy", "Sz",
    "2IxSx", "2IxSy", "2IxSz", "2IySx", "2IySy", "2IySz",
    "2IzSx", "2IzSy", "2IzSz",
)
BASIS_INDEX = {name: i for i, name in enumerate(BASIS)}

# rf on one spin rigidly rotates four (x, y, z) coordinate triples
_RF_TRIPLES = {
    "I": (("Ix", "Iy", "Iz"), ("2IxSx", "2IySx", "2IzSx"),
          ("2IxSy", "2IySy", "2IzSy"), ("2IxSz", "2IySz", "2IzSz")),
    "S": (("Sx", "Sy", "Sz"), ("2IxSx", "2IxSy", "2IxSz"),
          ("2IySx", "2IySy", "2IySz"), ("2IzSx", "2IzSy", "2IzSz")),
}

_MULTI_QUANTUM = ("2IxSx", "2IxSy", "2IySx", "2IySy")

_JSON_KEYS = {
    "J_hz": "J", "k_dd_hz": "k_dd", "k_csa_i_hz": "k_csa_i",
    "k_csa_s_hz": "k_csa_s", "k_ddcsa_i_hz": "k_ddcsa_i",
    "k_ddcsa_s_hz": "k_ddcsa_s",
}


@dataclass(frozen=True)
class SystemParams:
    """Coupling and elementary relaxation rates, all in Hz.

    Parameters
    ----------
    J : float
        Scalar coupling constant, > 0.
    k_dd : float
        Dipole-dipole relaxation rate.
    k_csa_i, k_csa_s : float
        Chemical-shift-anisotropy rates of spin I and spin S.
    k_ddcsa_i, k_ddcsa_s : float
        DD/CSA cross-correlation rates of spin I and spin S (either sign).

    The net transverse rates are ``ka = k_dd + k_csa_i`` with cross rate
    ``kc = k_ddcsa_i`` for spin I, and ``ka_prime = k_dd + k_csa_s``,
    ``kc_prime = k_ddcsa_s`` for spin S.  Both multiplet decay rates
    ka +- kc must be non-negative.
    """

    J: float
    k_dd: float = 0.0
    k_csa_i: float = 0.0
    k_csa_s: float = 0.0
    k_ddcsa_i: float = 0.0
    k_ddcsa_s: float = 0.0

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError("J must be positive (sign conventions assume J > 0)")
        if self.ka < 0 or self.ka_prime < 0:
            raise ValueError("net transverse rates ka, ka' must be non-negative")
        if abs(self.kc) > self.ka + 1e-15 * abs(self.kc):
            raise ValueError("|kc| > ka: multiplet rate ka - |kc| would be negative")
        if abs(self.kc_prime) > self.ka_prime + 1e-15 * abs(self.kc_prime):
            raise ValueError("|kc'| > ka': multiplet rate ka' - |kc'| would be negative")

    @property
    def ka(self):
        return self.k_dd + self.k_csa_i

    @property
    def kc(self):
        return self.k_ddcsa_i

    @property
    def ka_prime(self):
        return self.k_dd + self.k_csa_s

    @property
    def kc_prime(self):
        return self.k_ddcsa_s

    @classmethod
    def from_rates(cls, J, ka, kc, ka_prime=0.0, kc_prime=0.0):
        """Build params from net rates, attributing the auto rates to CSA.

        The split between k_dd and the CSA rates is not observable in any
        single-spin transfer; it only sets the multi-quantum decay rate
        pi*(k_csa_i + k_csa_s).
        """
        return cls(J=J, k_dd=0.0, k_csa_i=ka, k_csa_s=ka_prime,
                   k_ddcsa_i=kc, k_ddcsa_s=kc_prime)

    def to_json(self):
        obj = {key: getattr(self, attr) for key, attr in _JSON_KEYS.items()}
        return json.dumps(obj, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(**{attr: float(obj[key]) for key, attr in _JSON_KEYS.items()})


def unit_state(name):
    """State vector with unit coefficient on one basis operator."""
    state = np.zeros(len(BASIS))
    state[_index(name)] = 1.0
    return state


def _index(name):
    try:
        return BASIS_INDEX[name]
    except KeyError:
        raise ValueError(f"unknown basis operator {name!r}") from None


def expectation(state, target):
    """Expectation value of one normalized basis operator."""
    return float(np.asarray(state)[_index(target)])


def free_evolution_generator(params):
    """15x15 generator G of free evolution, d(coeffs)/dt = G @ coeffs.

    On the I-spin transverse subspace (Ix, Iy, 2IxSz, 2IySz):

        d<Ix>/dt    = -pi ka <Ix>    - pi J <2IySz> - pi kc <2IxSz>
        d<Iy>/dt    = -pi ka <Iy>    + pi J <2IxSz> - pi kc <2IySz>
        d<2IxSz>/dt = -pi ka <2IxSz> - pi J <Iy>    - pi kc <Ix>
        d<2IySz>/dt = -pi ka <2IySz> + pi J <Ix>    - pi kc <Iy>

    and symmetrically on (Sx, Sy, 2IzSx, 2IzSy) with ka', kc'.  Multi-quantum
    coefficients decay at pi*(k_csa_i + k_csa_s); dipolar relaxation does not
    touch multi-quantum coherence in this model.  Iz, Sz, 2IzSz rows are zero.
    """
    G = np.zeros((len(BASIS), len(BASIS)))
    pj = np.pi * params.J
    _transverse_block(G, ("Ix", "Iy", "2IxSz", "2IySz"), pj, params.ka, params.kc)
    _transverse_block(G, ("Sx", "Sy", "2IzSx", "2IzSy"), pj, params.ka_prime,
                      params.kc_prime)
    k_mq = np.pi * (params.k_csa_i + params.k_csa_s)
    for name in _MULTI_QUANTUM:
        G[BASIS_INDEX[name], BASIS_INDEX[name]] -= k_mq
    return G


def _transverse_block(G, names, pj, ka, kc):
    x, y, ax, ay = (BASIS_INDEX[n] for n in names)
    pa, pc = np.pi * ka, np.pi * kc
    G[x, x] -= pa; G[x, ay] -= pj; G[x, ax] -= pc
    G[y, y] -= pa; G[y, ax] += pj; G[y, ay] -= pc
    G[ax, ax] -= pa; G[ax, y] -= pj; G[ax, x] -= pc
    G[ay, ay] -= pa; G[ay, x] += pj; G[ay, y] -= pc


def rf_generator(spin, amplitude, phase, offset=0.0):
    """15x15 generator of rf irradiation on one spin.

    Amplitude A (Hz) with phase phi rotates the addressed spin's z coordinate
    toward the transverse axis (cos phi, sin phi) at angular rate 2*pi*A:
    phase pi/2 (y pulse) takes Iz to Ix, phase 0 (x pulse) takes Iz to -Iy.
    A resonance offset nu (Hz) rotates the transverse coordinates about z at
    2*pi*nu.  The same rotation acts on all four coordinate triples of the
    spin, e.g. (Ix, Iy, Iz) and (2IxSz, 2IySz, 2IzSz) for spin I.
    """
    if spin not in _RF_TRIPLES:
        raise ValueError(f"spin must be 'I' or 'S', got {spin!r}")
    if amplitude < 0:
        raise ValueError("rf amplitude must be non-negative")
    w = 2 * np.pi * amplitude
    wz = 2 * np.pi * offset
    omega = np.array([
        [0.0, -wz, w * np.sin(phase)],
        [wz, 0.0, -w * np.cos(phase)],
        [-w * np.sin(phase), w * np.cos(phase), 0.0],
    ])
    G = np.zeros((len(BASIS), len(BASIS)))
    for triple in _RF_TRIPLES[spin]:
        idx = [BASIS_INDEX[n] for n in triple]
        G[np.ix_(idx, idx)] += omega
    return G


def hard_rotation(spin, phase, angle):
    """Exact 15x15 rotation matrix of an instantaneous pulse.

    Rotates the addressed spin by `angle` about the transverse axis
    (cos phase, sin phase); lossless.
    """
    # run the rf generator for unit time at the amplitude giving the angle
    return expm(rf_generator(spin, abs(angle) / (2 * np.pi), phase) * np.sign(angle))


def multiplet_components(state):
    """Transverse multiplet component vectors of spin I.

    Returns the alpha component (<Ix>+<2IxSz>, <Iy>+<2IySz>)/2 and the beta
    component (<Ix>-<2IxSz>, <Iy>-<2IySz>)/2.  Under free evolution their
    magnitudes decay at pi*(ka + kc) and pi*(ka - kc), precessing at +J/2 and
    -J/2.
    """
    state = np.asarray(state)
    x1, y1 = state[BASIS_INDEX["Ix"]], state[BASIS_INDEX["Iy"]]
    x2, y2 = state[BASIS_INDEX["2IxSz"]], state[BASIS_INDEX["2IySz"]]
    alpha = np.array([x1 + x2, y1 + y2]) / 2
    beta = np.array([x1 - x2, y1 - y2]) / 2
    return alpha, beta
