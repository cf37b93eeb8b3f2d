"""Entanglement-type quantities of length-two qubit channels.

Closed forms for the concurrence, ``E(T; rho)``, ``H(T; rho)`` and 1-shot
capacities, the anti-linear operator behind them, the foliation of the
Bloch ball into optimal leaves, and a brute-force convex-roof oracle to
check all of it.
"""

from .channels import (
    AmplitudeDamping,
    Canonical,
    Ensemble,
    KrausPair,
    PhaseDamping,
    apply_channel,
    holevo_chi,
    kraus_of,
)
from .concurrence import concurrence, concurrence_pure, concurrence_spectral, concurrence_theta
from .entanglement import (
    capacity_amplitude_damping,
    capacity_numeric,
    entanglement_E,
    entropy_H,
)
from .foliation import leaf_through, optimal_decomposition, zero_concurrence_states
from .qubit import (
    DensityOperator,
    DomainError,
    InvalidStateError,
    binary_entropy,
    h1,
    h2,
    von_neumann_entropy,
)
from .roof import flatness_residual, roof_max, roof_min
from .theta import AntilinearOperator, theta_from_kraus, theta_of, theta_spinflip_form

__version__ = "0.1.0"
