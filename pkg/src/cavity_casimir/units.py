"""Conversion between laboratory units and the dimensionless core.

The core uses ``c = hbar = 1`` with frequencies in a reference ``omega_ref``.
Given ``hbar omega_ref`` in eV, lengths are in ``c / omega_ref`` and energies in
``hbar omega_ref``.
"""
from __future__ import annotations

from dataclasses import dataclass

#: hbar c in eV nm (CODATA 2018)
HBAR_C_EV_NM = 197.3269804
#: classical electron radius e^2/(m c^2) in nm (CODATA 2018)
ELECTRON_RADIUS_NM = 2.8179403262e-6


def hydrogenic_alpha0_nm3(hbar_omega0_ev: float) -> float:
    """Static polarizability ``e^2 / (m omega0^2)`` of an electron bound at ``hbar omega0``, in nm^3."""
    return ELECTRON_RADIUS_NM * (HBAR_C_EV_NM / hbar_omega0_ev) ** 2


@dataclass(frozen=True)
class UnitSystem:
    """Laboratory units for a reference energy ``hbar omega_ref`` in eV."""

    omega_ref_ev: float

    @property
    def length_nm(self) -> float:
        """``c / omega_ref`` in nm."""
        return HBAR_C_EV_NM / self.omega_ref_ev

    def freq_from_ev(self, e_ev: float) -> float:
        return e_ev / self.omega_ref_ev

    def length_from_nm(self, x_nm: float) -> float:
        return x_nm / self.length_nm

    def length_to_nm(self, x: float) -> float:
        return x * self.length_nm

    def volume_from_nm3(self, v_nm3: float) -> float:
        return v_nm3 / self.length_nm ** 3

    def volume_from_a3(self, v_a3: float) -> float:
        return self.volume_from_nm3(v_a3 * 1e-3)

    def energy_to_mev(self, e: float) -> float:
        return e * self.omega_ref_ev * 1e3
