"""Dielectric response of the host and polarizability of the central atom.

All quantities are dimensionless: frequencies in units of a reference
frequency ``omega_ref`` and ``c = hbar = 1``.  The magnetic permeability is 1.

The atom is parameterised by its static polarizability ``alpha0`` and its
resonance ``omega0``; a single-oscillator model with charge ``e`` and mass
``m`` corresponds to ``alpha0 = e**2 / (m * omega0**2)``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, PoleError


def _nonneg(name, v):
    v = float(v)
    if not v >= 0:
        raise DomainError(f"{name} must be >= 0, got {v}")
    return v


@dataclass(frozen=True)
class Vacuum:
    """``eps = 1``."""

    def epsilon(self, w: complex) -> complex:
        return 1.0 + 0j

    def chi_imag(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))

    def epsilon_imag(self, u):
        return 1.0 + self.chi_imag(u)


@dataclass(frozen=True)
class Lorentzian:
    """``eps = 1 + omega_p**2 / (omega_0**2 - w**2 - i gamma w)``."""

    omega_p: float
    omega_0: float
    gamma: float = 0.0

    def __post_init__(self):
        for k in ("omega_p", "omega_0", "gamma"):
            object.__setattr__(self, k, _nonneg(k, getattr(self, k)))

    def epsilon(self, w: complex) -> complex:
        w = complex(w)
        den = self.omega_0 ** 2 - w * w - 1j * self.gamma * w
        if den == 0:
            raise PoleError(f"Lorentzian resonance hit at omega = {w}")
        return 1.0 + self.omega_p ** 2 / den

    def chi_imag(self, u):
        u = np.asarray(u, dtype=float)
        return self.omega_p ** 2 / (self.omega_0 ** 2 + u * u + self.gamma * u)

    def epsilon_imag(self, u):
        return 1.0 + self.chi_imag(u)


@dataclass(frozen=True)
class Drude:
    """``eps = 1 - omega_p**2 / (w**2 + i gamma w)``."""

    omega_p: float
    gamma: float = 0.0

    def __post_init__(self):
        for k in ("omega_p", "gamma"):
            object.__setattr__(self, k, _nonneg(k, getattr(self, k)))

    def epsilon(self, w: complex) -> complex:
        w = complex(w)
        den = w * w + 1j * self.gamma * w
        if den == 0:
            raise PoleError(f"Drude pole hit at omega = {w}")
        return 1.0 - self.omega_p ** 2 / den

    def chi_imag(self, u):
        u = np.asarray(u, dtype=float)
        return self.omega_p ** 2 / (u * u + self.gamma * u)

    def epsilon_imag(self, u):
        return 1.0 + self.chi_imag(u)


@dataclass(frozen=True)
class Constant:
    """Frequency-independent ``eps`` (lossless if real)."""

    eps: complex

    def __post_init__(self):
        e = complex(self.eps)
        if e.imag < 0:
            raise DomainError("a passive medium needs Im eps >= 0")
        object.__setattr__(self, "eps", e)

    def epsilon(self, w: complex) -> complex:
        return self.eps

    def chi_imag(self, u):
        if self.eps.imag != 0:
            raise DomainError("a complex constant eps is not real on the imaginary axis")
        return np.full_like(np.asarray(u, dtype=float), self.eps.real - 1.0)

    def epsilon_imag(self, u):
        return 1.0 + self.chi_imag(u)


@dataclass(frozen=True)
class PerfectConductor:
    """Perfect mirror. Has no numeric ``eps``; amplitudes use closed forms."""

    def epsilon(self, w: complex) -> complex:
        raise DomainError("PerfectConductor has no finite eps; use the closed-form amplitudes")

    def epsilon_imag(self, u):
        raise DomainError("PerfectConductor has no finite eps; use the closed-form amplitudes")

    chi_imag = epsilon_imag


DielectricModel = Union[Vacuum, Lorentzian, Drude, Constant, PerfectConductor]


@dataclass(frozen=True)
class PolarizabilityModel:
    """Single-resonance atom, ``alpha(w) = alpha0 omega0**2 / (omega0**2 - w**2)``."""

    alpha0: float
    omega0: float

    def __post_init__(self):
        object.__setattr__(self, "alpha0", _nonneg("alpha0", self.alpha0))
        w0 = float(self.omega0)
        if not w0 > 0:
            raise DomainError(f"omega0 must be > 0, got {w0}")
        object.__setattr__(self, "omega0", w0)

    def alpha(self, w: complex) -> complex:
        w = complex(w)
        den = self.omega0 ** 2 - w * w
        if den == 0:
            raise PoleError(f"atomic resonance hit at omega = {w}")
        return self.alpha0 * self.omega0 ** 2 / den

    def alpha_imag(self, u):
        u = np.asarray(u, dtype=float)
        return self.alpha0 * self.omega0 ** 2 / (self.omega0 ** 2 + u * u)


def eval_epsilon(model: DielectricModel, w: complex) -> complex:
    """Dielectric function at complex frequency ``w``.

    On the positive imaginary axis the result is real (and >= 1 for
    Lorentzian and Drude hosts).

    Raises
    ------
    PoleError
        At an undamped resonance.
    DomainError
        For :class:`PerfectConductor`.
    """
    e = complex(model.epsilon(w))
    w = complex(w)
    if w.real == 0 and w.imag > 0 and not isinstance(model, Constant):
        # exactly real on the imaginary axis, no rounding residue
        e = complex(float(model.epsilon_imag(w.imag)), 0.0)
    return e


def eval_alpha(model: PolarizabilityModel, w: complex) -> complex:
    """Atomic polarizability at complex frequency ``w``."""
    w = complex(w)
    if w.real == 0 and w.imag != 0:
        return complex(float(model.alpha_imag(w.imag)), 0.0)
    return model.alpha(w)


def sqrt_eps(eps: complex) -> complex:
    """Refractive index ``sqrt(eps)``.

    Principal branch (``Im n >= 0`` whenever ``Im eps >= 0``, ``n > 0`` for
    real positive ``eps``).  The cut is moved onto the negative imaginary
    ``eps`` axis so that ``n`` stays continuous for lossy metals continued
    below the real frequency axis.
    """
    eps = complex(eps)
    if eps.imag == 0:
        eps = complex(eps.real, 0.0)
    n = cmath.sqrt(eps)
    if eps.real < 0 and eps.imag < 0:
        n = -n
    return n
