"""The coefficient-space generators against an independent density-matrix
construction: Pauli products, commutator superoperators and double-commutator
relaxation, projected onto the operator basis."""

import numpy as np
import pytest
from scipy.linalg import expm

from spincrop.spinsys import (BASIS, BASIS_INDEX, SystemParams, expectation,
                              free_evolution_generator, hard_rotation,
                              multiplet_components, rf_generator, unit_state)

_S = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex) / 2,
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex) / 2,
    "z": np.array([[1, 0], [0, -1]], dtype=complex) / 2,
}
_E = np.eye(2, dtype=complex)


def _op(label):
    if label.startswith("2"):
        return 2 * np.kron(_S[label[2]], _S[label[4]])
    if label[0] == "I":
        return np.kron(_S[label[1]], _E)
    return np.kron(_E, _S[label[1]])


OPS = [_op(name) for name in BASIS]


def _comm(a, b):
    return a @ b - b @ a


def _project(lmap):
    """Matrix of a superoperator in the orthonormal product-operator basis."""
    m = np.empty((15, 15))
    for j, bj in enumerate(OPS):
        image = lmap(bj)
        for i, bi in enumerate(OPS):
            m[i, j] = np.real(np.trace(bi.conj().T @ image))
    return m


def test_basis_orthonormal():
    g = np.array([[np.trace(a.conj().T @ b).real for b in OPS] for a in OPS])
    assert np.allclose(g, np.eye(15), atol=1e-14)


@pytest.mark.parametrize("rates", [
    (1.0, 0.3, 0.2, 0.15, 0.1, -0.05),
    (2.5, 0.0, 0.8, 0.3, 0.55, 0.2),
    (0.7, 1.1, 0.0, 0.0, 0.9, 0.0),
    (1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
])
def test_free_generator_matches_density_matrix(rates):
    J, k_dd, k_csa_i, k_csa_s, k_ddcsa_i, k_ddcsa_s = rates
    params = SystemParams(J, k_dd, k_csa_i, k_csa_s, k_ddcsa_i, k_ddcsa_s)
    h = 2 * np.pi * J * np.kron(_S["z"], _S["z"])
    a_dd, a_i, a_s = _op("2IzSz"), _op("Iz"), _op("Sz")

    def lmap(rho):
        d = -1j * _comm(h, rho)
        for k, a in ((k_dd, a_dd), (k_csa_i, a_i), (k_csa_s, a_s)):
            d = d - np.pi * k * _comm(a, _comm(a, rho))
        for k, a in ((k_ddcsa_i, a_i), (k_ddcsa_s, a_s)):
            d = d - np.pi * k * 0.5 * (_comm(a, _comm(a_dd, rho))
                                       + _comm(a_dd, _comm(a, rho)))
        return d

    assert np.allclose(_project(lmap), free_evolution_generator(params),
                       atol=1e-12)


@pytest.mark.parametrize("spin", ["I", "S"])
@pytest.mark.parametrize("amp,phase,offset", [
    (1.0, 0.0, 0.0), (0.5, 1.1, 0.0), (2.0, -0.7, 3.0), (0.0, 0.0, 1.5),
])
def test_rf_generator_matches_density_matrix(spin, amp, phase, offset):
    sx = _op(spin + "x")
    sy = _op(spin + "y")
    sz = _op(spin + "z")
    h = 2 * np.pi * (amp * (np.cos(phase) * sx + np.sin(phase) * sy)
                     + offset * sz)
    m = _project(lambda rho: -1j * _comm(h, rho))
    assert np.allclose(m, rf_generator(spin, amp, phase, offset), atol=1e-12)


def test_rf_amplitude_must_be_nonnegative():
    with pytest.raises(ValueError):
        rf_generator("I", -1.0, 0.0)
    with pytest.raises(ValueError):
        rf_generator("X", 1.0, 0.0)


def test_rotation_conventions():
    # 90 about y takes Iz to Ix; 90 about x takes Iz to -Iy
    z = unit_state("Iz")
    about_y = hard_rotation("I", np.pi / 2, np.pi / 2) @ z
    assert expectation(about_y, "Ix") == pytest.approx(1.0, abs=1e-12)
    about_x = hard_rotation("I", 0.0, np.pi / 2) @ z
    assert expectation(about_x, "Iy") == pytest.approx(-1.0, abs=1e-12)
    # S rotations leave I untouched
    s_rot = hard_rotation("S", 0.3, 1.2) @ z
    assert expectation(s_rot, "Iz") == pytest.approx(1.0, abs=1e-12)


def test_rotation_angle_sign_and_composition():
    r = hard_rotation("I", 0.7, 0.4)
    rinv = hard_rotation("I", 0.7, -0.4)
    assert np.allclose(r @ rinv, np.eye(15), atol=1e-12)
    assert np.allclose(hard_rotation("I", 0.7, 0.9) @ r,
                       hard_rotation("I", 0.7, 1.3), atol=1e-12)


def test_rotations_preserve_norm_and_free_evolution_contracts():
    rng = np.random.default_rng(3)
    c = rng.normal(size=15)
    r = hard_rotation("S", 1.1, 2.2) @ c
    assert np.linalg.norm(r) == pytest.approx(np.linalg.norm(c), rel=1e-12)
    params = SystemParams.from_rates(1.0, 1.2, 0.6, ka_prime=0.8,
                                     kc_prime=-0.3)
    g = free_evolution_generator(params)
    assert np.max(np.linalg.eigvals(g).real) < 1e-12
    u = expm(g * 0.37)
    assert np.linalg.norm(u @ c) <= np.linalg.norm(c) + 1e-12


def test_longitudinal_subspace_is_free_invariant():
    params = SystemParams.from_rates(1.0, 1.0, 0.75)
    g = free_evolution_generator(params)
    for name in ("Iz", "Sz", "2IzSz"):
        assert np.allclose(g @ unit_state(name), 0.0, atol=1e-15)


def test_multiplet_components_split_transverse_plane():
    c = np.zeros(15)
    c[BASIS_INDEX["Ix"]] = 0.6
    c[BASIS_INDEX["Iy"]] = -0.2
    c[BASIS_INDEX["2IxSz"]] = 0.1
    c[BASIS_INDEX["2IySz"]] = 0.4
    alpha, beta = multiplet_components(c)
    assert alpha == pytest.approx(((0.6 + 0.1) / 2, (-0.2 + 0.4) / 2))
    assert beta == pytest.approx(((0.6 - 0.1) / 2, (-0.2 - 0.4) / 2))


def test_params_validation_and_json_round_trip():
    with pytest.raises(ValueError):
        SystemParams(0.0)
    with pytest.raises(ValueError):
        SystemParams(1.0, k_dd=0.1, k_ddcsa_i=0.5)  # |kc| > ka
    p = SystemParams.from_rates(2.0, 1.0, -0.5, ka_prime=0.7, kc_prime=0.2)
    q = SystemParams.from_json(p.to_json())
    assert q == p
    assert q.ka == pytest.approx(1.0) and q.kc == pytest.approx(-0.5)


def test_unit_state_and_expectation():
    s = unit_state("2IySx")
    assert s[BASIS_INDEX["2IySx"]] == 1.0 and np.sum(np.abs(s)) == 1.0
    with pytest.raises(ValueError):
        unit_state("Qz")
    with pytest.raises(ValueError):
        expectation(s, "nope")
