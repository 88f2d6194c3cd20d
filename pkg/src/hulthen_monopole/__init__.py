"""Hulthen potential in the spacetime of a point-like global monopole.

Analytic (hypergeometric) solutions of the radial problem with the
self-interaction term K(alpha)/r, together with an independent Numerov
oracle used to check them.
"""

from .model import Channel, ModelParams, ParameterError, derive_channel_params
from .monopole import SelfInteractionCoupling, coupling_k, s_series
from .potentials import Mode, effective_potential, scan
from .analytic import (
    NoBoundStateError,
    bound_energy,
    bound_energy_via_smatrix_pole,
    bound_state,
    bound_state_count,
    frobenius_energy,
    phase_shift,
    scattering,
    scattering_params,
)

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "Mode",
    "ModelParams",
    "NoBoundStateError",
    "ParameterError",
    "SelfInteractionCoupling",
    "bound_energy",
    "bound_energy_via_smatrix_pole",
    "bound_state",
    "bound_state_count",
    "coupling_k",
    "derive_channel_params",
    "effective_potential",
    "frobenius_energy",
    "phase_shift",
    "scan",
    "scattering",
    "scattering_params",
    "s_series",
]
