"""Large-time structure of the QED interaction.

Two groups of terms appear after normal ordering the interaction: pair terms
(b^dagger d^dagger, b d) with phase E(p) + E(p + k) +/- k0, and scattering
terms (b^dagger b, d^dagger d) with phase E(p) - E(p + k) +/- k0. This module
smears those phases against a normalized Gaussian envelope in photon momentum
and evaluates the resulting oscillatory integrals, checks the small-k
expansion that produces the asymptotic Hamiltonian, and evaluates the Fock
eigenvalue of the asymptotic current.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.special import roots_legendre

from ._reduce import exact_csum
from .kinematics import ALPHA, OnShellMomentum, coupling, lower_index, minkowski_dot

GROUPS = {"pair_creation": 1, "scattering": 2, 1: 1, 2: 2}
# dominant branch per group: photon emission on top of the pair phase for
# group 1, photon emission (minus k0) for group 2
DEFAULT_BRANCH = {1: +1, 2: -1}

_GL_ORDER = 8
_MAX_PHASE_STEP = np.pi / 4


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class OscillatoryTermSpec:
    """One smeared interaction term.

    The envelope is a normalized Gaussian in k, centred at k = 0, with width
    ``sigma_parallel`` along the fermion momentum and ``sigma_perp``
    transverse to it (both default to ``sigma``).
    """

    group: int | str
    momentum: np.ndarray = field(default_factory=lambda: np.zeros(3))
    t: float = 0.0
    sigma: float = 0.1
    sigma_parallel: float | None = None
    sigma_perp: float | None = None
    branch: int | None = None
    mass: float = 1.0

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ValueError(f"unknown group {self.group!r}")
        object.__setattr__(self, "group", GROUPS[self.group])
        object.__setattr__(self, "momentum", np.asarray(self.momentum, dtype=float).reshape(3))
        if self.sigma_parallel is None:
            object.__setattr__(self, "sigma_parallel", self.sigma)
        if self.sigma_perp is None:
            object.__setattr__(self, "sigma_perp", self.sigma)
        if self.branch is None:
            object.__setattr__(self, "branch", DEFAULT_BRANCH[self.group])
        if self.branch not in (-1, 1):
            raise ValueError("branch must be +1 or -1")
        if min(self.sigma_parallel, self.sigma_perp) <= 0:
            raise ValueError("envelope widths must be positive")

    def envelope(self, k, cos_theta):
        """g at |k| = k and angle theta to the fermion momentum; integrates to 1 over d^3k."""
        sp, st = self.sigma_parallel, self.sigma_perp
        kpar = k * cos_theta
        kperp2 = k**2 * (1.0 - cos_theta**2)
        norm = (2.0 * np.pi) ** -1.5 / (sp * st * st)
        return norm * np.exp(-0.5 * kpar**2 / sp**2 - 0.5 * kperp2 / st**2)

    def phase(self, k, cos_theta):
        """Phi_group as a function of |k| and the angle to p."""
        m = self.mass
        p = float(np.linalg.norm(self.momentum))
        Ep = np.sqrt(p * p + m * m)
        Epk = np.sqrt(p * p + k * k + 2.0 * p * k * cos_theta + m * m)
        if self.group == 1:
            return Ep + Epk + self.branch * k
        return Epk - Ep + self.branch * k


def _gl_cells(edges, nodes, weights):
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    return (0.5 * (a + b) + half * nodes).ravel(), (half * weights).ravel()


def _refine(edges, phase_of, max_cells):
    """Bisect cells until the sampled phase varies by less than pi/4 across each."""
    probe = np.linspace(0.0, 1.0, 9)
    while True:
        a, b = edges[:-1], edges[1:]
        pts = a[:, None] + (b - a)[:, None] * probe
        ph = phase_of(pts)  # (cells, probe, ...)
        spread = ph.max(axis=1) - ph.min(axis=1)
        if spread.ndim > 1:
            spread = spread.reshape(spread.shape[0], -1).max(axis=1)
        bad = spread >= _MAX_PHASE_STEP
        if not bad.any():
            return edges
        mids = 0.5 * (a[bad] + b[bad])
        edges = np.sort(np.concatenate([edges, mids]))
        if edges.size - 1 > max_cells:
            raise QuadratureError(f"phase resolution needs more than {max_cells} cells")


def _angular_integral(spec: OscillatoryTermSpec, k, t: float):
    """Integral over cos(theta) in [-1, 1] of exp(i t Phi) at fixed |k|.

    Phi depends on the angle only through E(p + k), and dE = p k dc / E, so
    the integral is [exp(i t E) (E / (i t) + 1 / t^2)] / (p k) between
    E(|p - k|) and E(p + k), times the angle-independent part of the phase.
    Where t (E+ - E-) < 1 the closed form cancels badly and 16-point
    Gauss-Legendre in cos(theta) is used instead.
    """
    p, m = float(np.linalg.norm(spec.momentum)), spec.mass
    Ep = np.sqrt(p * p + m * m)
    e_lo = np.sqrt((p - k) ** 2 + m * m)
    e_hi = np.sqrt((p + k) ** 2 + m * m)
    rest = (Ep if spec.group == 1 else -Ep) + spec.branch * k
    out = np.empty(k.shape, dtype=complex)
    small = t * (e_hi - e_lo) < 1.0
    if np.any(small):
        xc, wc = roots_legendre(16)
        ph = spec.phase(k[small, None], xc[None, :]) * t
        out[small] = np.exp(1j * ph) @ wc
    big = ~small
    if np.any(big):
        def F(E):
            return np.exp(1j * t * E) * (E / (1j * t) + 1.0 / t**2)

        kb = k[big]
        out[big] = np.exp(1j * t * rest[big]) * (F(e_hi[big]) - F(e_lo[big])) / (p * kb)
    return out


def oscillatory_integral(spec: OscillatoryTermSpec, truncation: float = 8.0, max_cells: int = 200_000) -> complex:
    """Integral over d^3k of g(k) exp(i Phi(k) t), adaptive in |k| and in the angle to p.

    The envelope is cut at ``truncation`` widths; cells are bisected until
    the phase changes by less than pi/4 across each, then integrated with
    8-point Gauss-Legendre in both directions.
    """
    t = float(spec.t)
    kmax = truncation * max(spec.sigma_parallel, spec.sigma_perp)
    width = 0.5 * min(spec.sigma_parallel, spec.sigma_perp)
    x, w = roots_legendre(_GL_ORDER)

    p = float(np.linalg.norm(spec.momentum))
    isotropic = spec.sigma_parallel == spec.sigma_perp
    angular_probe = np.linspace(-1.0, 1.0, 5 if p > 0 else 1)
    radial_probe = np.linspace(0.0, kmax, 17)

    kedges = np.linspace(0.0, kmax, int(np.ceil(kmax / width)) + 1)
    kedges = _refine(kedges, lambda k: spec.phase(k[..., None], angular_probe) * t, max_cells)

    if p > 0.0 and isotropic:
        k, wk = _gl_cells(kedges, x, w)
        radial = spec.envelope(k, 0.0) * _angular_integral(spec, k, t)
        return exact_csum(2.0 * np.pi * wk * k**2 * radial)

    if p == 0.0 and isotropic:
        cedges = np.array([-1.0, 1.0])
    else:
        cedges = np.linspace(-1.0, 1.0, 9)
        cedges = _refine(cedges, lambda c: spec.phase(radial_probe, c[..., None]) * t, max_cells)
    if (kedges.size - 1) * (cedges.size - 1) > max_cells:
        raise QuadratureError("oscillatory integral too expensive at this t; raise max_cells")

    k, wk = _gl_cells(kedges, x, w)
    c, wc = _gl_cells(cedges, x, w)
    K, C = np.meshgrid(k, c, indexing="ij")
    integrand = spec.envelope(K, C) * np.exp(1j * spec.phase(K, C) * t)
    contrib = 2.0 * np.pi * (wk * k**2)[:, None] * wc[None, :] * integrand
    return exact_csum(contrib)


def decay_sweep(spec: OscillatoryTermSpec, times: Sequence[float]) -> np.ndarray:
    """|I(t)| along a time schedule."""
    return np.array([abs(oscillatory_integral(replace(spec, t=float(t)))) for t in times])


def phase_expansion_residual(p, k, mass: float = 1.0) -> float:
    """|E(p + k) - E(p) - k.p/E(p)|, with the energy difference evaluated without cancellation."""
    p = np.asarray(p, dtype=float)
    k = np.asarray(k, dtype=float)
    Ep = np.sqrt(p @ p + mass**2)
    Epk = np.sqrt((p + k) @ (p + k) + mass**2)
    diff = (2.0 * p @ k + k @ k) / (Epk + Ep)
    return float(abs(diff - k @ p / Ep))


def expansion_residual_bound(p, k, mass: float = 1.0) -> float:
    """C |k|^2 with C = (1 + |v|)^2 / (2 m)."""
    p = np.asarray(p, dtype=float)
    k = np.asarray(k, dtype=float)
    v = np.linalg.norm(p) / np.sqrt(p @ p + mass**2)
    return float((1.0 + v) ** 2 / (2.0 * mass) * (k @ k))


def current_eigenvalue(momenta: Sequence[OnShellMomentum], k, t: float, alpha: float = ALPHA) -> np.ndarray:
    """Sum over constituents of j_mu(k, t; p) = e (p_mu / p0) exp(-i k.p t / p0).

    Returned with a lower (covariant) index.
    """
    k = np.asarray(k, dtype=float)
    if abs(minkowski_dot(k, k)) > 1e-12 * max(k[0] ** 2, 1e-300):
        raise ValueError("photon momentum must be null")
    e = coupling(alpha)
    total = np.zeros(4, dtype=complex)
    for p in momenta:
        P = p.four_momentum
        total += e * lower_index(P) / p.energy * np.exp(-1j * minkowski_dot(k, P) * t / p.energy)
    return total
