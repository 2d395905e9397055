"""Minkowski 4-vectors, mass-shell momenta and world lines.

Natural units with the fermion mass as the unit of energy (hbar = c = m = 1
unless a mass is passed explicitly). Metric signature (+, -, -, -).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ALPHA = 1.0 / 137.035999
ETA = np.array([1.0, 0.0, 0.0, 0.0])
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# relative tolerance for "p.q >= m^2" and collinearity checks
_DOMAIN_RTOL = 1e-12


class KinematicsError(ValueError):
    """Input outside the kinematic domain of an operation."""


def coupling(alpha: float = ALPHA) -> float:
    """Electric charge e with e^2 = 4 pi alpha."""
    return float(np.sqrt(4.0 * np.pi * alpha))


def four_vector(t, x, y, z) -> np.ndarray:
    return np.array([t, x, y, z], dtype=float)


def minkowski_dot(a, b):
    """a.b = a0 b0 - a1 b1 - a2 b2 - a3 b3, broadcast over leading axes."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2] - a[..., 3] * b[..., 3]


def lower_index(a) -> np.ndarray:
    """Covariant components a_mu = g_{mu nu} a^nu."""
    a = np.asarray(a)
    a = np.array(a, dtype=np.result_type(a.dtype, float))
    a[..., 1:] *= -1
    return a


@dataclass(frozen=True)
class OnShellMomentum:
    """Particle of the given mass with spatial momentum p; p0 = sqrt(p^2 + m^2)."""

    spatial_momentum: np.ndarray
    mass: float = 1.0

    def __post_init__(self):
        p = np.asarray(self.spatial_momentum, dtype=float).reshape(3)
        p.setflags(write=False)
        object.__setattr__(self, "spatial_momentum", p)
        if not self.mass > 0:
            raise KinematicsError(f"mass must be positive, got {self.mass}")

    @classmethod
    def from_velocity(cls, v, mass: float = 1.0) -> "OnShellMomentum":
        v = np.asarray(v, dtype=float)
        v2 = float(v @ v)
        if v2 >= 1.0:
            raise KinematicsError(f"|v| = {np.sqrt(v2)} is not subluminal")
        return cls(mass * v / np.sqrt(1.0 - v2), mass)

    @property
    def energy(self) -> float:
        p = self.spatial_momentum
        return float(np.sqrt(p @ p + self.mass**2))

    @property
    def four_momentum(self) -> np.ndarray:
        return np.concatenate(([self.energy], self.spatial_momentum))

    @property
    def velocity(self) -> np.ndarray:
        return self.spatial_momentum / self.energy

    @property
    def gamma(self) -> float:
        return self.energy / self.mass

    @property
    def four_velocity_direction(self) -> np.ndarray:
        """(eta + v)^mu = p^mu / p0."""
        return self.four_momentum / self.energy


def momentum_dot(p: OnShellMomentum, q: OnShellMomentum) -> float:
    return float(minkowski_dot(p.four_momentum, q.four_momentum))


def relative_velocity_invariant(p: OnShellMomentum, q: OnShellMomentum) -> float:
    """Invariant relative speed u(p, q) = sqrt(1 - m^4 / (p.q)^2) for equal masses.

    Evaluated as sqrt((pq - m^2)(pq + m^2)) / pq with pq - m^2 = -(p - q)^2 / 2
    written through spatial differences, which keeps full relative precision
    for nearly equal momenta.
    """
    m = p.mass
    if not np.isclose(q.mass, m, rtol=_DOMAIN_RTOL, atol=0.0):
        raise KinematicsError(f"unequal masses {p.mass} and {q.mass}")
    pq = momentum_dot(p, q)
    if pq < m**2 * (1.0 - _DOMAIN_RTOL):
        raise KinematicsError(f"p.q = {pq} < m^2 = {m**2}: not an on-shell equal-mass pair")
    dp = p.spatial_momentum - q.spatial_momentum
    dE = float((p.spatial_momentum - q.spatial_momentum) @ (p.spatial_momentum + q.spatial_momentum)) / (
        p.energy + q.energy
    )
    half_sep = 0.5 * (float(dp @ dp) - dE * dE)
    half_sep = max(half_sep, 0.0)
    return float(np.sqrt(half_sep * (pq + m**2)) / pq)


def are_collinear(v1, v2, rtol: float = 1e-9) -> bool:
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    cross = np.cross(v1, v2)
    scale = np.linalg.norm(v1) * np.linalg.norm(v2)
    return bool(np.linalg.norm(cross) <= rtol * scale)


def relative_velocity_3v(v1, v2) -> float:
    """|v1 - v2| / (1 - v1.v2); only defined here for collinear velocities."""
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    if v1 @ v1 >= 1.0 or v2 @ v2 >= 1.0:
        raise KinematicsError("velocities must be subluminal")
    if not are_collinear(v1, v2):
        raise KinematicsError(f"non-collinear velocities {v1}, {v2}: collinear formula does not apply")
    return float(np.linalg.norm(v1 - v2) / (1.0 - v1 @ v2))


def retarded_position(x, v, t):
    """R = x - v t."""
    return np.asarray(x, dtype=float) - np.asarray(v, dtype=float) * t


def boost_matrix(beta) -> np.ndarray:
    """Pure Lorentz boost Lambda^mu_nu with velocity beta."""
    beta = np.asarray(beta, dtype=float)
    b2 = float(beta @ beta)
    if b2 >= 1.0:
        raise KinematicsError("boost velocity must be subluminal")
    L = np.eye(4)
    if b2 == 0.0:
        return L
    g = 1.0 / np.sqrt(1.0 - b2)
    L[0, 0] = g
    L[0, 1:] = L[1:, 0] = -g * beta
    L[1:, 1:] += (g - 1.0) * np.outer(beta, beta) / b2
    return L


def boost(p: OnShellMomentum, beta) -> OnShellMomentum:
    """Momentum as seen from a frame moving with velocity beta."""
    return OnShellMomentum(boost_matrix(beta)[1:] @ p.four_momentum, p.mass)


@dataclass(frozen=True)
class WorldLine:
    """Straight world line through base_point with 3-velocity v.

    x(s) = x + (s - t) v, x0(s) = s, where base_point = (t, x).
    """

    base_point: np.ndarray
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "base_point", np.asarray(self.base_point, dtype=float).reshape(4))
        object.__setattr__(self, "velocity", np.asarray(self.velocity, dtype=float).reshape(3))

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        t0, x = self.base_point[0], self.base_point[1:]
        spatial = x + np.multiply.outer(s - t0, self.velocity)
        return np.concatenate([s[..., None], spatial], axis=-1)
