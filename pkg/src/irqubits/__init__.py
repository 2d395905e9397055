"""Infrared-finite QED dynamics and the spin entanglement of dressed fermion pairs."""

from .asymptotic import OscillatoryTermSpec, current_eigenvalue, oscillatory_integral, phase_expansion_residual
from .kinematics import ALPHA, OnShellMomentum, boost, minkowski_dot, relative_velocity_3v, relative_velocity_invariant
from .phases import (
    PhaseConfig,
    cancellation_residual,
    kappa_cross_closed,
    kappa_cross_quadrature,
    kappa_self_closed,
    kappa_self_quadrature,
    phase_factors,
    phi_eigenvalue,
)
from .photon_modes import (
    build_grid,
    cloud_amplitude,
    cloud_amplitude_dressed,
    coherent_overlap,
    gauge_residue,
    soft_photon_number,
)
from .qubits import (
    TwoQubitState,
    concurrence,
    dressed_phases,
    entanglement_entropy,
    negativity,
    reduce_spin_dressed,
    reduce_spin_free,
)

__version__ = "0.1.0"
