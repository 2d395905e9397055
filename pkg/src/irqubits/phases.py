"""Dressing phases along straight world lines and the asymptotic Coulomb phase.

kappa_i (self terms) and kappa_12 (cross term) come from integrating the
Green-function-weighted asymptotic current along the world line of a dressed
particle from t0 to t. phi is the eigenvalue of the phase operator on a
two-particle state. Both kappa_12 and phi grow like ln(t/t0); their product
exp(i phi) exp(-i kappa_12) is what the dressing leaves behind, and it is
independent of t0.

Conventions: the distance entering the world-line integrand is
x(s) - s v_j with x(s) = x_i + (s - t) v_i, i.e. particle j is at the origin
at s = 0. The gamma factor of a cross term is that of the world line being
integrated along (particle 1 for kappa_12).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad

from .kinematics import (
    ALPHA,
    KinematicsError,
    OnShellMomentum,
    are_collinear,
    relative_velocity_3v,
    relative_velocity_invariant,
    retarded_position,
)

QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-12


class SingularConfiguration(ValueError):
    """World lines touch inside the integration window, or R = 0."""


class DivergentPhase(ValueError):
    """phi diverges for coincident momenta (zero relative velocity)."""


def _vec(x):
    return np.asarray(x, dtype=float).reshape(3)


@dataclass(frozen=True)
class PhaseConfig:
    v1: np.ndarray
    v2: np.ndarray
    x1: np.ndarray = field(default_factory=lambda: np.zeros(3))
    x2: np.ndarray = field(default_factory=lambda: np.zeros(3))
    t: float = 1e3
    t0: float = 1e2
    alpha: float = ALPHA

    def __post_init__(self):
        for name in ("v1", "v2", "x1", "x2"):
            object.__setattr__(self, name, _vec(getattr(self, name)))
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "t0", float(self.t0))
        if not (np.isfinite(self.t) and np.isfinite(self.t0)) or self.t * self.t0 <= 0:
            raise ValueError(f"t and t0 must be finite, nonzero and of the same sign (t={self.t}, t0={self.t0})")
        for v in (self.v1, self.v2):
            if v @ v >= 1.0:
                raise KinematicsError(f"velocity {v} is not subluminal")
        if not are_collinear(self.v1, self.v2):
            raise KinematicsError("v1 and v2 must be collinear")

    def velocity(self, which: int) -> np.ndarray:
        return self.v1 if which == 1 else self.v2

    def position(self, which: int) -> np.ndarray:
        return self.x1 if which == 1 else self.x2

    def gamma(self, which: int) -> float:
        v = self.velocity(which)
        return float(1.0 / np.sqrt(1.0 - v @ v))

    def retarded(self, which: int) -> np.ndarray:
        return retarded_position(self.position(which), self.velocity(which), self.t)

    def swapped(self) -> "PhaseConfig":
        return replace(self, v1=self.v2, v2=self.v1, x1=self.x2, x2=self.x1)

    def mirrored(self) -> "PhaseConfig":
        """Time reversal s -> -s, v -> -v; leaves R = x - v t unchanged."""
        return replace(self, v1=-self.v1, v2=-self.v2, t=-self.t, t0=-self.t0)

    @classmethod
    def from_momenta(cls, p1: OnShellMomentum, p2: OnShellMomentum, **kwargs) -> "PhaseConfig":
        return cls(v1=p1.velocity, v2=p2.velocity, **kwargs)


@dataclass(frozen=True)
class PhaseFactors:
    kappa1: float
    kappa2: float
    kappa12: float
    phi: float
    theta: float = 0.0


def _inverse_distance(d, v, gamma):
    """{d^2 + gamma^2 (v.d)^2}^{-1/2} for d of shape (..., 3)."""
    d = np.asarray(d, dtype=float)
    vd = d @ v
    return 1.0 / np.sqrt(np.sum(d * d, axis=-1) + gamma**2 * vd**2)


def _self_integrand(cfg: PhaseConfig, which: int):
    x, v, t = cfg.position(which), cfg.velocity(which), cfg.t
    gamma = cfg.gamma(which)

    def f(s):
        xs = x + (s - t) * v
        return _inverse_distance(xs - s * v, v, gamma)

    return f


def _check_self(cfg: PhaseConfig, which: int):
    R = cfg.retarded(which)
    if not np.any(R):
        raise SingularConfiguration(f"particle {which} sits at its own retarded position (R = 0)")


def kappa_self_quadrature(cfg: PhaseConfig, which: int) -> float:
    """(alpha/gamma_i) times the world-line integral of the self-term inverse distance."""
    _check_self(cfg, which)
    val, _ = quad(_self_integrand(cfg, which), cfg.t0, cfg.t, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL)
    return cfg.alpha / cfg.gamma(which) * val


def kappa_self_closed(cfg: PhaseConfig, which: int) -> float:
    """alpha (1/gamma) (t - t0) / sqrt(R^2 + gamma^2 (v.R)^2), R = x - v t."""
    _check_self(cfg, which)
    R, v, gamma = cfg.retarded(which), cfg.velocity(which), cfg.gamma(which)
    return float(cfg.alpha / gamma * (cfg.t - cfg.t0) * _inverse_distance(R, v, gamma))


def kappa_self_array(x, v, t: float, t0: float, alpha: float = ALPHA) -> np.ndarray:
    """Vectorized self phase alpha (1/gamma)(t - t0)/sqrt(R^2 + gamma^2 (v.R)^2) over rows of v."""
    v = np.atleast_2d(v)
    gamma2 = 1.0 / (1.0 - np.sum(v * v, axis=1))
    R = np.asarray(x, dtype=float)[None, :] - v * t
    denom = np.sqrt(np.sum(R * R, axis=1) + gamma2 * np.sum(v * R, axis=1) ** 2)
    if np.any(denom == 0):
        raise SingularConfiguration("a grid pair sits at its own retarded position (R = 0)")
    return alpha / np.sqrt(gamma2) * (t - t0) / denom


def _cross_geometry(cfg: PhaseConfig):
    """Decompose R1 along and across v_r = v1 - v2: returns (v_r, unit, R_par, b)."""
    vr_vec = cfg.v1 - cfg.v2
    v_r = float(np.linalg.norm(vr_vec))
    if v_r == 0.0:
        raise DivergentPhase("equal velocities: relative velocity vanishes")
    n = vr_vec / v_r
    R1 = cfg.retarded(1)
    R_par = float(R1 @ n)
    b = float(np.linalg.norm(R1 - R_par * n))
    return v_r, n, R_par, b


def _cross_coefficient(cfg: PhaseConfig, v_r: float) -> float:
    g = cfg.gamma(1)
    return cfg.alpha * g * (1.0 - cfg.v1 @ cfg.v2) / (g * v_r)


def kappa_cross_quadrature(cfg: PhaseConfig) -> float:
    """alpha gamma_1 (1 - v1.v2) times the integral over [t0, t] of the inverse distance
    between R1 + s v_r and the origin (gamma_1-weighted along v1)."""
    v_r, n, R_par, b = _cross_geometry(cfg)
    R1, v1, g1 = cfg.retarded(1), cfg.v1, cfg.gamma(1)
    vr_vec = cfg.v1 - cfg.v2
    lo, hi = sorted((cfg.t0, cfg.t))
    s_star = -R_par / v_r
    points = None
    if lo <= s_star <= hi:
        scale = max(np.linalg.norm(R1), v_r * abs(s_star), 1.0)
        if b <= 1e-12 * scale:
            raise SingularConfiguration(f"world lines cross at s = {s_star} inside [{lo}, {hi}]")
        points = [s_star]

    def f(s):
        return _inverse_distance(R1 + s * vr_vec, v1, g1)

    val, _ = quad(f, cfg.t0, cfg.t, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=500, points=points)
    return float(cfg.alpha * g1 * (1.0 - v1 @ cfg.v2) * val)


def kappa_cross_closed(cfg: PhaseConfig, asymptotic: bool = False) -> float:
    """Closed form of kappa_12 for collinear velocities.

    Full form: alpha gamma (1 - v1.v2) / (gamma v_r) [ln(t/t0) + ln(ratio)], with the
    ratio built from the impact parameter b and the longitudinal offset R_par.
    ``asymptotic=True`` drops the ratio, leaving alpha / u_r ln(t/t0).
    """
    v_r, _, R_par, b = _cross_geometry(cfg)
    coeff = _cross_coefficient(cfg, v_r)
    if asymptotic:
        return float(np.sign(cfg.t) * coeff * np.log(abs(cfg.t) / abs(cfg.t0)))
    if cfg.t < 0:
        return -kappa_cross_closed(cfg.mirrored(), asymptotic=False)

    t, t0 = cfg.t, cfg.t0
    u_t, u_t0 = t * v_r + R_par, t0 * v_r + R_par
    if min(u_t, u_t0) <= 0.0:
        raise SingularConfiguration(
            f"t v_r + R_par <= 0 in the window (R_par = {R_par}, v_r = {v_r}, t0 = {t0}, t = {t})"
        )
    beta2 = b * b / cfg.gamma(1) ** 2
    num = (1.0 + R_par / (t * v_r)) * (1.0 + np.sqrt(beta2 / u_t**2 + 1.0))
    den = (1.0 + R_par / (t0 * v_r)) * (1.0 + np.sqrt(beta2 / u_t0**2 + 1.0))
    return float(coeff * (np.log(t / t0) + np.log(num / den)))


def phi_eigenvalue(p1: OnShellMomentum, p2: OnShellMomentum, t: float, t0: float, alpha: float = ALPHA) -> float:
    """alpha / u(p1, p2) sign(t) ln(|t| / |t0|)."""
    if t * t0 <= 0:
        raise ValueError("t and t0 must share their sign")
    u = relative_velocity_invariant(p1, p2)
    if u == 0.0:
        raise DivergentPhase("coincident momenta: phi diverges as 1/u_r")
    return float(np.sign(t) * alpha / u * np.log(abs(t) / abs(t0)))


def _kappa12(cfg: PhaseConfig, method: str) -> float:
    if method == "asymptotic":
        return kappa_cross_closed(cfg, asymptotic=True)
    if method == "closed":
        return kappa_cross_closed(cfg)
    if method == "quadrature":
        return kappa_cross_quadrature(cfg)
    raise ValueError(f"unknown method {method!r}")


def cancellation_residual(
    cfg: PhaseConfig, p1: OnShellMomentum, p2: OnShellMomentum, method: str = "asymptotic"
) -> float:
    """|exp(i phi) exp(-i kappa_12) - 1|."""
    for p, v in ((p1, cfg.v1), (p2, cfg.v2)):
        if not np.allclose(p.velocity, v, rtol=1e-12, atol=1e-12):
            raise ValueError("momenta are not on the mass shell of the configured velocities")
    phi = phi_eigenvalue(p1, p2, cfg.t, cfg.t0, cfg.alpha)
    kappa = _kappa12(cfg, method)
    return float(abs(np.exp(1j * phi) * np.exp(-1j * kappa) - 1.0))


def phase_factors(
    cfg: PhaseConfig,
    p1: OnShellMomentum | None = None,
    p2: OnShellMomentum | None = None,
    primed: PhaseConfig | None = None,
    method: str = "closed",
) -> PhaseFactors:
    """All phases for one configuration.

    theta = -kappa(R1) - kappa(R2) + kappa(R1') + kappa(R2') compares with a
    primed configuration (a different momentum pair at the same t, t0); it is
    zero when no primed configuration is given.
    """
    if p1 is None:
        p1 = OnShellMomentum.from_velocity(cfg.v1)
    if p2 is None:
        p2 = OnShellMomentum.from_velocity(cfg.v2)
    k1, k2 = kappa_self_closed(cfg, 1), kappa_self_closed(cfg, 2)
    theta = 0.0
    if primed is not None:
        theta = -k1 - k2 + kappa_self_closed(primed, 1) + kappa_self_closed(primed, 2)
    return PhaseFactors(
        kappa1=k1,
        kappa2=k2,
        kappa12=_kappa12(cfg, method),
        phi=phi_eigenvalue(p1, p2, cfg.t, cfg.t0, cfg.alpha),
        theta=theta,
    )


def cancellation_sweep(base: PhaseConfig, t0_values, ratio: float = 10.0) -> list[dict]:
    """kappa_12 (quadrature, closed, asymptotic), phi and residuals along a t0 schedule at fixed t/t0."""
    p1 = OnShellMomentum.from_velocity(base.v1)
    p2 = OnShellMomentum.from_velocity(base.v2)
    rows = []
    for t0 in t0_values:
        cfg = replace(base, t0=float(t0), t=float(t0) * ratio)
        k_quad = kappa_cross_quadrature(cfg)
        k_closed = kappa_cross_closed(cfg)
        k_asym = kappa_cross_closed(cfg, asymptotic=True)
        phi = phi_eigenvalue(p1, p2, cfg.t, cfg.t0, cfg.alpha)
        rows.append(
            dict(
                t0=cfg.t0,
                t=cfg.t,
                kappa1=kappa_self_closed(cfg, 1),
                kappa2=kappa_self_closed(cfg, 2),
                kappa12_quad=k_quad,
                kappa12_closed=k_closed,
                kappa12_asymptotic=k_asym,
                phi=phi,
                residual=abs(np.exp(1j * phi) * np.exp(-1j * k_quad) - 1.0),
                residual_asymptotic=abs(np.exp(1j * phi) * np.exp(-1j * k_asym) - 1.0),
            )
        )
    return rows


def sample_config(
    rng: np.random.Generator,
    alpha: float = ALPHA,
    max_speed: float = 0.9,
    min_relative: float = 0.05,
    position_scale: float = 5.0,
    t0_range=(10.0, 1e3),
    ratio_range=(1.5, 100.0),
    margin: float = 0.5,
) -> PhaseConfig:
    """Random collinear configuration whose cross-term window avoids world-line contact.

    Rejection-samples until t0 v_r + R_par exceeds ``margin`` (the closed form
    needs it positive over the window).
    """
    while True:
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        s1, s2 = rng.uniform(-max_speed, max_speed, size=2)
        if abs(s1 - s2) < min_relative:
            continue
        t0 = float(np.exp(rng.uniform(*np.log(t0_range))))
        t = t0 * float(np.exp(rng.uniform(*np.log(ratio_range))))
        cfg = PhaseConfig(
            v1=s1 * axis,
            v2=s2 * axis,
            x1=rng.uniform(-position_scale, position_scale, size=3),
            x2=rng.uniform(-position_scale, position_scale, size=3),
            t=t,
            t0=t0,
            alpha=alpha,
        )
        v_r, _, R_par, _ = _cross_geometry(cfg)
        if t0 * v_r + R_par > margin and np.any(cfg.retarded(1)) and np.any(cfg.retarded(2)):
            return cfg
