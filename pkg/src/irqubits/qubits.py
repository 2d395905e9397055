"""Two spin-1/2 charged particles on a discrete momentum grid.

Spin basis ordering is (uu, ud, du, dd) with the quantization axis along lab
z. Fermions are treated as distinguishable, so the momentum contraction
<q1, q2 | p1, p2> is exact matching of grid pairs. The grid carries
quadrature weights: sum_a w_a sum_spins |phi_a|^2 = 1 for a normalized state,
and the momentum trace is rho = sum_a w_a phi_a phi_a^dagger.

Dressing multiplies the amplitude of pair a by exp(-i (kappa(R1) + kappa(R2)))
with the self phases evaluated at that pair's velocities. In the joint
(spin x momentum) density matrix block (a, b) picks up exp(i theta_ab),
theta_ab = -K_a + K_b, which vanishes identically on the diagonal blocks that
survive the momentum trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import ALPHA
from .phases import kappa_self_array

BASIS = ("uu", "ud", "du", "dd")
SIGMA_Y2 = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))

NORM_TOL = 1e-10
_RANK_CUT = 1e-13


class StateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    p1: np.ndarray  # (N, 3)
    p2: np.ndarray  # (N, 3)
    weights: np.ndarray  # (N,)
    amplitudes: np.ndarray  # (N, 4) complex
    mass: float = 1.0

    def __post_init__(self):
        p1 = np.asarray(self.p1, dtype=float).reshape(-1, 3)
        p2 = np.asarray(self.p2, dtype=float).reshape(-1, 3)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1, 4)
        n = w.size
        if not (p1.shape[0] == p2.shape[0] == amps.shape[0] == n) or n == 0:
            raise StateError("p1, p2, weights and amplitudes must describe the same non-empty grid")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise StateError("quadrature weights must be positive and finite")
        for name, arr in (("p1", p1), ("p2", p2), ("weights", w), ("amplitudes", amps)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_pairs(self) -> int:
        return self.weights.size

    @property
    def norm(self) -> float:
        return float(np.sum(self.weights * np.sum(np.abs(self.amplitudes) ** 2, axis=1)))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def normalized(self) -> "TwoQubitState":
        return TwoQubitState(self.p1, self.p2, self.weights, self.amplitudes / np.sqrt(self.norm), self.mass)

    def velocities(self, which: int) -> np.ndarray:
        p = self.p1 if which == 1 else self.p2
        return p / np.sqrt(np.sum(p * p, axis=1) + self.mass**2)[:, None]

    @classmethod
    def product(cls, spin, p1, p2, weights, profile=None, mass: float = 1.0) -> "TwoQubitState":
        """phi_a = profile_a * spin, normalized; spin factorizes out of the momentum trace."""
        spin = np.asarray(spin, dtype=complex).reshape(4)
        w = np.asarray(weights, dtype=float).reshape(-1)
        profile = np.ones(w.size) if profile is None else np.asarray(profile, dtype=complex).reshape(-1)
        return cls(p1, p2, w, profile[:, None] * spin[None, :], mass).normalized()


def random_state(rng: np.random.Generator, n_pairs: int, max_momentum: float = 0.5) -> TwoQubitState:
    """Random momenta in a ball, random positive weights, complex Gaussian spin amplitudes."""
    def ball():
        d = rng.normal(size=(n_pairs, 3))
        d /= np.linalg.norm(d, axis=1)[:, None]
        return d * max_momentum * rng.uniform(size=(n_pairs, 1)) ** (1 / 3)

    amps = rng.normal(size=(n_pairs, 4)) + 1j * rng.normal(size=(n_pairs, 4))
    return TwoQubitState(ball(), ball(), rng.uniform(0.1, 1.0, size=n_pairs), amps).normalized()


@dataclass(frozen=True, eq=False)
class SpinDensityMatrix:
    matrix: np.ndarray  # (4, 4) complex, basis order BASIS

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex).reshape(4, 4)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def validate(self, atol: float = 1e-12) -> None:
        check_density_matrix(self.matrix, atol)


def _as_matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, SpinDensityMatrix) else np.asarray(rho, dtype=complex).reshape(4, 4)


def check_density_matrix(rho, atol: float = 1e-12) -> None:
    m = _as_matrix(rho)
    if np.max(np.abs(m - m.conj().T)) > atol:
        raise StateError("density matrix is not Hermitian")
    if abs(np.trace(m) - 1.0) > atol:
        raise StateError(f"trace {np.trace(m)} != 1")
    low = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()
    if low < -atol:
        raise StateError(f"negative eigenvalue {low}")


@dataclass(frozen=True, eq=False)
class DressedPhaseAssignment:
    """Self phases kappa(R1), kappa(R2) of every grid pair; spin independent."""

    kappa1: np.ndarray
    kappa2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    t: float | None = None
    t0: float | None = None

    @property
    def total(self) -> np.ndarray:
        return self.kappa1 + self.kappa2

    def matches(self, state: TwoQubitState) -> bool:
        return np.array_equal(self.p1, state.p1) and np.array_equal(self.p2, state.p2)


def dressed_phases(
    state: TwoQubitState, x1, x2, t: float, t0: float, alpha: float = ALPHA
) -> DressedPhaseAssignment:
    if t * t0 <= 0:
        raise ValueError("t and t0 must share their sign")
    k1 = kappa_self_array(x1, state.velocities(1), t, t0, alpha)
    k2 = kappa_self_array(x2, state.velocities(2), t, t0, alpha)
    return DressedPhaseAssignment(k1, k2, state.p1, state.p2, float(t), float(t0))


def phases_from_arrays(state: TwoQubitState, kappa1, kappa2) -> DressedPhaseAssignment:
    k1 = np.asarray(kappa1, dtype=float).reshape(-1)
    k2 = np.asarray(kappa2, dtype=float).reshape(-1)
    if k1.size != state.n_pairs or k2.size != state.n_pairs:
        raise StateError("phase arrays do not match the grid")
    return DressedPhaseAssignment(k1, k2, state.p1, state.p2)


def amplitude_matrix_S(state: TwoQubitState, a: int, b: int) -> np.ndarray:
    """S(a, b) = phi(a) phi(b)^dagger."""
    return np.outer(state.amplitudes[a], state.amplitudes[b].conj())


def _require_normalized(state: TwoQubitState):
    if not state.is_normalized():
        raise StateError(f"state norm {state.norm} differs from 1")


def _momentum_trace(w, phi) -> SpinDensityMatrix:
    return SpinDensityMatrix(np.einsum("n,ni,nj->ij", np.asarray(w, dtype=complex), phi, phi.conj()))


def reduce_spin_free(state: TwoQubitState) -> SpinDensityMatrix:
    _require_normalized(state)
    return _momentum_trace(state.weights, state.amplitudes)


def reduce_spin_dressed(state: TwoQubitState, phases: DressedPhaseAssignment) -> SpinDensityMatrix:
    """Momentum trace of the dressed joint matrix; only a = b blocks contribute."""
    _require_normalized(state)
    if not phases.matches(state):
        raise StateError("phase assignment was built for a different momentum grid")
    K = phases.total
    theta_diag = -K + K
    return _momentum_trace(state.weights * np.exp(1j * theta_diag), state.amplitudes)


@dataclass(frozen=True, eq=False)
class JointMatrix:
    """(4N x 4N) spin x momentum density matrix with the phase of every block.

    Block (a, b) = sqrt(w_a w_b) exp(i theta_ab) S(a, b), so the matrix has
    unit trace and the momentum trace is the sum of diagonal blocks.
    """

    matrix: np.ndarray
    theta: np.ndarray  # (N, N)

    @property
    def n_pairs(self) -> int:
        return self.theta.shape[0]

    def block(self, a: int, b: int) -> np.ndarray:
        return self.matrix[4 * a : 4 * a + 4, 4 * b : 4 * b + 4]

    def trace_momenta(self) -> SpinDensityMatrix:
        n = self.n_pairs
        return SpinDensityMatrix(np.einsum("aiaj->ij", self.matrix.reshape(n, 4, n, 4)))


MAX_JOINT_BLOCKS = 10_000


def joint_matrix_with_phases(state: TwoQubitState, phases: DressedPhaseAssignment | None = None) -> JointMatrix:
    n = state.n_pairs
    if n * n > MAX_JOINT_BLOCKS:
        raise StateError(f"{n * n} blocks exceed the joint-matrix limit of {MAX_JOINT_BLOCKS}")
    if phases is None:
        K = np.zeros(n)
    elif not phases.matches(state):
        raise StateError("phase assignment was built for a different momentum grid")
    else:
        K = phases.total
    theta = -K[:, None] + K[None, :]
    psi = np.sqrt(state.weights)[:, None] * state.amplitudes
    blocks = np.exp(1j * theta)[:, None, :, None] * psi[:, :, None, None] * psi.conj()[None, None, :, :]
    return JointMatrix(blocks.reshape(4 * n, 4 * n), theta)


def _spectral_sqrt(m: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    evals = np.where(evals < _RANK_CUT, 0.0, evals)
    return (vecs * np.sqrt(evals)) @ vecs.conj().T


def concurrence(rho) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the singular values of sqrt(rho) Y sqrt(rho)^*, Y = sigma_y x
    sigma_y, which equal the square roots of the eigenvalues of rho rho~.
    Eigenvalues of rho below 1e-13 are treated as exact zeros so that rank
    deficient states (pure states in particular) are not polluted by
    square roots of rounding noise.
    """
    m = _as_matrix(rho)
    check_density_matrix(m, atol=1e-10)
    s = _spectral_sqrt(m)
    lam = np.linalg.svd(s @ SIGMA_Y2 @ s.conj(), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def partial_transpose(rho, subsystem: int = 2) -> np.ndarray:
    m = _as_matrix(rho).reshape(2, 2, 2, 2)
    if subsystem == 2:
        return m.transpose(0, 3, 2, 1).reshape(4, 4)
    return m.transpose(2, 1, 0, 3).reshape(4, 4)


def negativity(rho) -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose."""
    m = _as_matrix(rho)
    check_density_matrix(m, atol=1e-10)
    ev = np.linalg.eigvalsh(partial_transpose(m))
    return float(-np.sum(ev[ev < 0])) + 0.0


def is_ppt(rho, tol: float = 1e-12) -> bool:
    return bool(np.linalg.eigvalsh(partial_transpose(rho)).min() >= -tol)


def entanglement_entropy(psi_or_rho, purity_tol: float = 1e-10) -> float:
    """Von Neumann entropy (bits) of one qubit of a pure two-qubit spin state.

    Accepts a 4-component spin vector, a spin density matrix, or a
    TwoQubitState; the latter two must describe a pure spin state (momentum
    factorized), otherwise StateError.
    """
    obj = psi_or_rho
    if isinstance(obj, TwoQubitState):
        obj = reduce_spin_free(obj)
    arr = _as_matrix(obj) if isinstance(obj, SpinDensityMatrix) else np.asarray(obj, dtype=complex)
    if arr.shape == (4, 4):
        purity = float(np.real(np.trace(arr @ arr)))
        if abs(purity - 1.0) > purity_tol:
            raise StateError(f"spin state is mixed (purity {purity}); entropy of entanglement undefined")
        evals, vecs = np.linalg.eigh(arr)
        psi = vecs[:, -1]
    elif arr.size == 4:
        psi = arr.reshape(4) / np.linalg.norm(arr)
    else:
        raise StateError("expected a 4-vector or a 4x4 density matrix")
    s = np.linalg.svd(psi.reshape(2, 2), compute_uv=False)
    p = s**2
    p = p[p > 1e-300]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def entanglement_summary(rho) -> dict:
    m = _as_matrix(rho)
    summary = {"concurrence": concurrence(m), "negativity": negativity(m)}
    purity = float(np.real(np.trace(m @ m)))
    summary["purity"] = purity
    summary["entropy_bits"] = entanglement_entropy(m) if abs(purity - 1.0) <= 1e-10 else None
    return summary


def singlet() -> np.ndarray:
    return np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
