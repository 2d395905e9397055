import numpy as np
import pytest
from scipy import integrate

from irqubits.kinematics import OnShellMomentum, minkowski_dot
from irqubits.photon_modes import (
    GridError,
    build_grid,
    cloud_amplitude,
    cloud_amplitude_dressed,
    cloud_amplitude_W,
    coherent_overlap,
    dressing_vector,
    eikonal_factor,
    gauge_residue,
    soft_photon_number,
)

LAM, UV = 1e-4, 0.1


@pytest.fixture(scope="module")
def grid():
    return build_grid(LAM, UV, 24, 16, 16)


@pytest.mark.parametrize(
    "f, expected",
    [
        (lambda k: np.ones_like(k), 4 * np.pi / 3 * (UV**3 - LAM**3)),
        (lambda k: k**-2, 4 * np.pi * (UV - LAM)),
        (lambda k: k**-3, 4 * np.pi * np.log(UV / LAM)),
    ],
)
def test_shell_integrals(grid, f, expected):
    assert grid.integrate(f(grid.k0)) == pytest.approx(expected, rel=1e-3)


def test_modes_are_null(grid):
    k = grid.k
    np.testing.assert_allclose(k[:, 0], np.linalg.norm(k[:, 1:], axis=1), rtol=1e-14)
    assert np.max(np.abs(minkowski_dot(k, k)) / k[:, 0] ** 2) < 1e-12


def test_polarizations_transverse_orthonormal(grid):
    e = grid.polarizations
    khat = grid.k[:, 1:] / grid.k0[:, None]
    assert np.max(np.abs(np.einsum("npi,ni->np", e, khat))) < 1e-14
    gram = np.einsum("npi,nqi->npq", e, e)
    np.testing.assert_allclose(gram, np.broadcast_to(np.eye(2), gram.shape), atol=1e-14)


def test_bad_grids():
    with pytest.raises(GridError):
        build_grid(0.1, 0.01)
    with pytest.raises(GridError):
        build_grid(0.0, 0.1)
    with pytest.raises(GridError):
        build_grid(1e-3, 0.1, n_radial=1)


def test_dressing_vector_identity(grid):
    v = np.array([0.3, -0.4, 0.2])
    k = grid.k
    V, c = dressing_vector(v, k)
    eta = np.array([1.0, 0, 0, 0])
    v4 = np.concatenate(([0.0], v))
    expected = minkowski_dot(eta + v4, k) * minkowski_dot(eta - v4, k)
    np.testing.assert_allclose(minkowski_dot(V, k), expected, rtol=1e-12)
    np.testing.assert_allclose(minkowski_dot(c, k), 1.0, rtol=1e-12)


def test_gauge_residue_and_longitudinal_difference(grid):
    p = OnShellMomentum.from_velocity([0.4, 0.3, -0.5])
    assert np.max(np.abs(gauge_residue(p, grid.k))) < 1e-12
    d = eikonal_factor(p, grid.k, dressed=True)
    # d is parallel to k: its spatial part has no transverse projection. d is a
    # difference of two terms of size |p|/(p.k) ~ 1/k, so compare on that scale.
    proj = np.einsum("npi,ni->np", grid.polarizations, d[:, 1:])
    scale = np.linalg.norm(eikonal_factor(p, grid.k), axis=1)
    assert np.max(np.abs(proj) / scale[:, None]) < 1e-12


def test_zero_coupling_gives_zero_amplitude(grid):
    p = OnShellMomentum.from_velocity([0.5, 0, 0])
    for amp in (cloud_amplitude([p], 3.0, grid, alpha=0.0), cloud_amplitude_dressed(p, p, 3.0, grid, alpha=0.0)):
        assert not np.any(amp.values)
        assert soft_photon_number(amp) == 0.0


def test_rest_frame_amplitude(grid):
    p = OnShellMomentum([0, 0, 0])
    t = 7.0
    amp = cloud_amplitude([p], t, grid)
    e = np.sqrt(4 * np.pi * amp.alpha)
    k0 = grid.k0
    expected0 = e * (2 * np.pi) ** -1.5 / np.sqrt(2 * k0) / k0 * np.exp(1j * k0 * t)
    np.testing.assert_allclose(amp.values[:, 0], expected0, rtol=1e-13)
    assert not np.any(amp.values[:, 1:])
    # a charge at rest radiates no transverse photons
    assert soft_photon_number(amp) == 0.0


def test_amplitude_small_k_scaling():
    grid = build_grid(1e-6, 1e-1, 40, 4, 4)
    p = OnShellMomentum.from_velocity([0.5, 0, 0])
    amp = cloud_amplitude([p], 0.0, grid)
    idx = np.arange(grid.size) % (4 * 4) == 0  # fixed direction, every radial node
    slope = np.polyfit(np.log(grid.k0[idx]), np.log(np.abs(amp.values[idx, 0])), 1)[0]
    assert slope == pytest.approx(-1.5, abs=0.01)


def _undressed_number_oracle(v, lam, uv, alpha):
    """N = e^2/(2 (2 pi)^3) int dk/k int dOmega |v x khat|^2 / (1 - v.khat)^2, by scipy dblquad."""
    speed = np.linalg.norm(v)

    def angular(c, phi):
        return speed**2 * (1 - c**2) / (1 - speed * c) ** 2

    ang, _ = integrate.dblquad(angular, 0, 2 * np.pi, -1, 1, epsabs=1e-13, epsrel=1e-13)
    return 4 * np.pi * alpha / (2 * (2 * np.pi) ** 3) * np.log(uv / lam) * ang


def test_undressed_number_matches_oracle():
    v = np.array([0.5, 0, 0])
    p = OnShellMomentum.from_velocity(v)
    for lam in (1e-3, 1e-5):
        amp = cloud_amplitude([p], 0.0, build_grid(lam, 0.1, 32, 24, 24))
        assert soft_photon_number(amp) == pytest.approx(_undressed_number_oracle(v, lam, 0.1, amp.alpha), rel=1e-6)


def test_ir_log_divergence_increment_constant():
    p = OnShellMomentum.from_velocity([0.5, 0, 0])
    inc = []
    for lam in (1e-3, 1e-4, 1e-5):
        n = [soft_photon_number(cloud_amplitude([p], 0.0, build_grid(c, 0.1))) for c in (lam, 2 * lam)]
        inc.append(n[0] - n[1])
    inc = np.array(inc)
    assert np.ptp(inc) / inc.mean() < 0.01
    assert inc.mean() > 0


def test_number_independent_of_time():
    grid = build_grid(1e-3, 0.1, 16, 12, 12)
    p = OnShellMomentum.from_velocity([0.3, 0.2, 0])
    n = [soft_photon_number(cloud_amplitude([p], t, grid)) for t in (0.0, 1e2, 1e4)]
    np.testing.assert_allclose(n, n[0], rtol=1e-12)


def test_grid_convergence():
    p1, p2 = OnShellMomentum.from_velocity([0.5, 0, 0]), OnShellMomentum.from_velocity([-0.2, 0.1, 0])
    n = [
        soft_photon_number(cloud_amplitude_W(p1, p2, 0.0, build_grid(1e-4, 0.1, nr, nt, nt)))
        for nr, nt in ((16, 12), (32, 24))
    ]
    assert abs(n[1] - n[0]) / n[1] < 0.005


def test_dressed_cloud_has_no_transverse_photons():
    p1, p2 = OnShellMomentum.from_velocity([0.6, 0, 0]), OnShellMomentum.from_velocity([-0.3, 0.2, 0.1])
    for lam in (1e-3, 1e-5):
        grid = build_grid(lam, 0.1)
        assert soft_photon_number(cloud_amplitude_dressed(p1, p2, 50.0, grid)) < 1e-10


def test_feynman_number_is_not_positive_definite(grid):
    p = OnShellMomentum([0, 0, 0])
    assert soft_photon_number(cloud_amplitude([p], 0.0, grid), "feynman") < 0
    with pytest.raises(ValueError):
        soft_photon_number(cloud_amplitude([p], 0.0, grid), "coulomb")


def test_coherent_overlap(grid):
    p1, p2 = OnShellMomentum.from_velocity([0.6, 0, 0]), OnShellMomentum.from_velocity([0, 0.3, 0])
    f = cloud_amplitude_W(p1, p2, 1.0, grid)
    g = cloud_amplitude([p1], 1.0, grid)
    zero = cloud_amplitude([p1], 1.0, grid, alpha=0.0)
    assert abs(coherent_overlap(f, f)) == pytest.approx(1.0, abs=1e-15)
    assert coherent_overlap(zero, zero) == 1.0
    assert abs(coherent_overlap(f, g)) < 1.0
    dressed = cloud_amplitude_dressed(p1, p2, 1.0, grid)
    assert abs(coherent_overlap(dressed, zero)) == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValueError):
        coherent_overlap(f, cloud_amplitude([p1], 1.0, build_grid(1e-3, 0.1, 4, 4, 4)))
