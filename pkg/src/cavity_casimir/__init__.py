"""Casimir energy of a spherical vacuum cavity in a dispersive host.

Dimensionless units throughout: ``c = hbar = 1``, frequencies in a reference
``omega_ref``, lengths in ``c / omega_ref``, energies in ``hbar omega_ref``.
"""
from ._backend import BACKEND
from .energy import (ChannelEnergy, EnergyReport, atom_shift, atom_shift_result, channel_energies,
                     channel_energy, channel_energy_result, u0_scan)
from .errors import (ConfigError, ContourError, DomainError, PoleError, QuadratureError,
                     ResonanceError)
from .media import (Constant, Drude, Lorentzian, PerfectConductor, PolarizabilityModel, Vacuum,
                    eval_alpha, eval_epsilon)
from .modes import count_modes, dos, dos_binned, mode_condition, total_scattering
from .quadrature import QuadratureSpec, QuadResult, integrate_finite, integrate_semi_infinite
from .scattering import (TE, TM, CavitySystem, Channel, ScatterAmplitude, s_b_pec, s_b_te, s_b_tm,
                         s_c_atom, s_c_empty)
from .specfun import dhat, hankel, hankel_scaled

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CavitySystem", "Channel", "ChannelEnergy", "ConfigError", "Constant", "ContourError",
    "DomainError", "Drude", "EnergyReport", "Lorentzian", "PerfectConductor", "PoleError",
    "PolarizabilityModel", "QuadResult", "QuadratureError", "QuadratureSpec", "ResonanceError",
    "ScatterAmplitude", "TE", "TM", "Vacuum", "atom_shift", "atom_shift_result", "channel_energies",
    "channel_energy", "channel_energy_result", "count_modes", "dhat", "dos", "dos_binned",
    "eval_alpha", "eval_epsilon", "hankel", "hankel_scaled", "integrate_finite",
    "integrate_semi_infinite", "mode_condition", "s_b_pec", "s_b_te", "s_b_tm", "s_c_atom",
    "s_c_empty", "total_scattering", "u0_scan",
]
