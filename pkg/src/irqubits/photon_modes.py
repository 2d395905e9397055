"""Soft-photon phase space, coherent cloud amplitudes and the mass-shell residue.

Everything lives at the level of coherent-state eigenvalues: a cloud is the
c-number function f^mu(k) multiplying a_mu^dagger(k) in the exponent of the
asymptotic (or dressed) evolution operator, sampled on a quadrature grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import roots_legendre

from ._reduce import exact_csum, exact_sum
from .kinematics import ALPHA, ETA, OnShellMomentum, coupling, minkowski_dot


class GridError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PhotonModeGrid:
    """Product grid: Gauss-Legendre in ln|k|, Gauss-Legendre in cos(theta), uniform azimuth.

    ``k`` has shape (N, 4) with k0 = |k|; ``weights`` include the full d^3k
    measure so that sum(weights * F(k)) approximates the integral of F over
    the shell ir_cutoff < |k| < uv_cutoff.
    """

    ir_cutoff: float
    uv_cutoff: float
    n_radial: int
    n_polar: int
    n_azimuth: int
    k: np.ndarray
    weights: np.ndarray
    polarizations: np.ndarray  # (N, 2, 3) real unit vectors transverse to k

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def k0(self) -> np.ndarray:
        return self.k[:, 0]

    def integrate(self, values) -> float:
        return exact_sum(self.weights * np.asarray(values, dtype=float))

    def same_as(self, other: "PhotonModeGrid") -> bool:
        return self is other or (
            self.k.shape == other.k.shape
            and np.array_equal(self.k, other.k)
            and np.array_equal(self.weights, other.weights)
        )


def build_grid(
    ir_cutoff: float = 1e-4,
    uv_cutoff: float = 0.1,
    n_radial: int = 32,
    n_polar: int = 24,
    n_azimuth: int = 24,
) -> PhotonModeGrid:
    if not (0.0 < ir_cutoff < uv_cutoff) or not np.isfinite(uv_cutoff):
        raise GridError(f"need 0 < ir_cutoff < uv_cutoff, got {ir_cutoff}, {uv_cutoff}")
    for name, n in (("n_radial", n_radial), ("n_polar", n_polar), ("n_azimuth", n_azimuth)):
        if int(n) != n or n < 2:
            raise GridError(f"{name} must be an integer >= 2, got {n}")

    lo, hi = np.log(ir_cutoff), np.log(uv_cutoff)
    x, w = roots_legendre(n_radial)
    u = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    radius = np.exp(u)
    # d^3k = k^3 du dOmega
    w_radial = 0.5 * (hi - lo) * w * radius**3

    cos_t, w_polar = roots_legendre(n_polar)
    phi = 2.0 * np.pi * (np.arange(n_azimuth) + 0.5) / n_azimuth
    w_azimuth = np.full(n_azimuth, 2.0 * np.pi / n_azimuth)

    R, CT, PH = np.meshgrid(radius, cos_t, phi, indexing="ij")
    ST = np.sqrt(1.0 - CT**2)
    khat = np.stack([ST * np.cos(PH), ST * np.sin(PH), CT], axis=-1).reshape(-1, 3)
    e_theta = np.stack([CT * np.cos(PH), CT * np.sin(PH), -ST], axis=-1).reshape(-1, 3)
    e_phi = np.stack([-np.sin(PH), np.cos(PH), np.zeros_like(PH)], axis=-1).reshape(-1, 3)

    kmag = R.reshape(-1)
    k = np.column_stack([kmag, kmag[:, None] * khat])
    weights = (w_radial[:, None, None] * w_polar[None, :, None] * w_azimuth[None, None, :]).reshape(-1)
    for arr in (k, weights):
        arr.setflags(write=False)
    pols = np.stack([e_theta, e_phi], axis=1)
    pols.setflags(write=False)
    return PhotonModeGrid(ir_cutoff, uv_cutoff, n_radial, n_polar, n_azimuth, k, weights, pols)


class DressingVector(NamedTuple):
    V: np.ndarray  # (N, 4)
    c: np.ndarray  # (N, 4), V / (V.k)


def dressing_vector(velocity, k) -> DressingVector:
    """V^mu = (eta + v)^mu (eta - v).k - k^mu and c^mu = V^mu / (V.k)."""
    v4 = np.concatenate(([0.0], np.asarray(velocity, dtype=float)))
    k = np.atleast_2d(k)
    plus, minus = ETA + v4, ETA - v4
    V = plus[None, :] * minkowski_dot(minus, k)[:, None] - k
    return DressingVector(V, V / minkowski_dot(V, k)[:, None])


def eikonal_factor(p: OnShellMomentum, k, dressed: bool = False) -> np.ndarray:
    """p^mu/(p.k), or the on-shell dressed combination p^mu/(p.k) - c^mu."""
    P = p.four_momentum
    k = np.atleast_2d(k)
    term = P[None, :] / minkowski_dot(P, k)[:, None]
    if dressed:
        term = term - dressing_vector(p.velocity, k).c
    return term


def gauge_residue(p: OnShellMomentum, k) -> np.ndarray:
    """Antisymmetrised tensor d^mu k^nu - d^nu k^mu, d = p/(p.k) - c; shape (N, 4, 4)."""
    k = np.atleast_2d(k)
    d = eikonal_factor(p, k, dressed=True)
    outer = d[:, :, None] * k[:, None, :]
    return outer - np.swapaxes(outer, 1, 2)


@dataclass(frozen=True, eq=False)
class CloudAmplitude:
    grid: PhotonModeGrid
    values: np.ndarray  # (N, 4) complex, contravariant components
    momenta: tuple
    t: float
    dressed: bool
    alpha: float

    def transverse(self) -> np.ndarray:
        """Components along the two polarization vectors, shape (N, 2).

        With eps = (0, e), the Minkowski product eps.f = -e.f; the sign drops
        out of every quadratic form used here.
        """
        return np.einsum("npi,ni->np", self.grid.polarizations, self.values[:, 1:])


def cloud_amplitude(
    momenta: Sequence[OnShellMomentum],
    t: float,
    grid: PhotonModeGrid,
    alpha: float = ALPHA,
    dressed: bool = False,
) -> CloudAmplitude:
    """f^mu(k) = e (2 pi)^{-3/2} (2 k0)^{-1/2} sum_j F_j^mu(k) exp(i k.p_j t / p_j0).

    F_j = p_j/(p_j.k) for the bare asymptotic cloud and p_j/(p_j.k) - c_j for
    the dressed one. Time phases are kept exactly.
    """
    k = grid.k
    pref = coupling(alpha) / (2.0 * np.pi) ** 1.5 / np.sqrt(2.0 * grid.k0)
    total = np.zeros((grid.size, 4), dtype=complex)
    for p in momenta:
        kp = minkowski_dot(p.four_momentum, k)
        total += eikonal_factor(p, k, dressed) * np.exp(1j * kp * t / p.energy)[:, None]
    return CloudAmplitude(grid, pref[:, None] * total, tuple(momenta), float(t), dressed, alpha)


def cloud_amplitude_W(p1, p2, t, grid, alpha=ALPHA) -> CloudAmplitude:
    return cloud_amplitude((p1, p2), t, grid, alpha, dressed=False)


def cloud_amplitude_dressed(p1, p2, t, grid, alpha=ALPHA) -> CloudAmplitude:
    return cloud_amplitude((p1, p2), t, grid, alpha, dressed=True)


def soft_photon_number(amplitude: CloudAmplitude, projection: str = "transverse") -> float:
    """Mean photon number of the coherent cloud.

    ``transverse`` sums |eps.f|^2 over the two physical polarizations;
    ``feynman`` contracts with -g_{mu nu} and need not be positive.
    """
    f = amplitude.values
    if projection == "transverse":
        density = np.sum(np.abs(amplitude.transverse()) ** 2, axis=1)
    elif projection == "feynman":
        density = -np.abs(f[:, 0]) ** 2 + np.sum(np.abs(f[:, 1:]) ** 2, axis=1)
    else:
        raise ValueError(f"unknown projection {projection!r}")
    return amplitude.grid.integrate(density)


def coherent_overlap(f: CloudAmplitude, g: CloudAmplitude, projection: str = "transverse") -> complex:
    """<g|f> = exp(-|f|^2/2 - |g|^2/2 + (g, f)) for normalized coherent states."""
    if projection != "transverse":
        raise ValueError("only the transverse projection defines a positive inner product")
    if not f.grid.same_as(g.grid):
        raise GridError("amplitudes live on different grids")
    w = f.grid.weights
    ft, gt = f.transverse(), g.transverse()
    nf = exact_sum(w * np.sum(np.abs(ft) ** 2, axis=1))
    ng = exact_sum(w * np.sum(np.abs(gt) ** 2, axis=1))
    cross = exact_csum(w * np.sum(np.conj(gt) * ft, axis=1))
    return complex(np.exp(-0.5 * nf - 0.5 * ng + cross))
