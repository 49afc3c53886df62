"""Zero-point energy per channel, cutoff scans and the atom-in-cavity shift.

Energies are in units of ``hbar omega_ref``.  A channel ``(l, pol)``
contributes

    U_l = (2l + 1)/(2 pi) * int_0^inf du log|1 - s_b(iu) s_c(iu)|,

the ``2l + 1`` counting the degenerate ``m``.  The sum over ``l`` diverges, so
the cavity energy is only exposed as partial sums against the cutoff
(:func:`u0_scan`).  The shift from an atom at the centre touches only the
``l = 1`` TM channel and is finite (:func:`atom_shift`).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .media import PolarizabilityModel, Vacuum
from .quadrature import QuadratureSpec, QuadResult, integrate_semi_infinite
from .scattering import TE, TM, CavitySystem, Channel, atom_q_imag, imag_axis_terms

# sign scan for interior singularities, in units of 1/R
_SCAN_DECADES = (-4.0, 2.5)
_SCAN_PER_DECADE = 40
_BISECT_ITERS = 80


# --------------------------------------------------------------------------
# integrands on the imaginary axis
# --------------------------------------------------------------------------

def _ratio_z(u, system: CavitySystem, channel: Channel):
    """``z = Y/X`` (``s_b = z/(1+z)``), with ``d = log|Y/X|`` and the sign."""
    lx, sx, ly, sy = imag_axis_terms(u, system.R, system.wall, channel.l)
    k = 0 if channel.pol == TE else 1
    lx, sx, ly, sy = lx[:, -1, k], sx[:, -1, k], ly[:, -1, k], sy[:, -1, k]
    d = ly - lx
    sgn = sx * sy
    return d, sgn


def _log_abs_one_plus(d, sgn, coef=None):
    """``log|1 + c z|`` for ``z = sgn e^d`` and optional real factor ``c``."""
    if coef is not None:
        with np.errstate(divide="ignore"):
            d = d + np.log(np.abs(coef))
        sgn = sgn * np.sign(coef)
    out = np.zeros_like(d)
    small = d < -0.7
    mid = (~small) & (d <= 700.0)
    big = d > 700.0
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        z = sgn[small] * np.exp(d[small])
        out[small] = np.log1p(z)
        zm = sgn[mid] * np.exp(d[mid])
        out[mid] = np.log(np.abs(1.0 + zm))
        # |z| beyond the double range: log|z| + log|1 + 1/z|
        out[big] = d[big] + np.log1p(sgn[big] * np.exp(-d[big]))
    out[sgn == 0] = 0.0
    return out


def _atom_coef(u, atom: PolarizabilityModel):
    q = atom_q_imag(u, atom)
    with np.errstate(divide="ignore"):
        return q, -2.0 * q / (1.0 - q)


def log_mode_function(u, system: CavitySystem, channel: Channel) -> np.ndarray:
    """``log|1 - s_b(iu) s_c(iu)|`` on an array of ``u > 0``."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if isinstance(system.wall, Vacuum):
        return np.zeros_like(u)
    d, sgn = _ratio_z(u, system, channel)
    # 1 - s_b = 1/(1 + z)
    val = -_log_abs_one_plus(d, sgn)
    if system.atom is not None and system.atom.alpha0 > 0 and channel == Channel(1, TM):
        q, coef = _atom_coef(u, system.atom)
        with np.errstate(divide="ignore"):
            val = val + _log_abs_one_plus(d, sgn, coef)
    return val


def log_atom_ratio(u, system: CavitySystem) -> np.ndarray:
    """``log|(1 - s_b s_c)/(1 - s_b)|`` for the ``l = 1`` TM channel."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if system.atom is None or system.atom.alpha0 == 0 or isinstance(system.wall, Vacuum):
        return np.zeros_like(u)
    d, sgn = _ratio_z(u, system, Channel(1, TM))
    _, coef = _atom_coef(u, system.atom)
    return _log_abs_one_plus(d, sgn, coef)


def _sign_pieces(u, system: CavitySystem, channel: Channel, atom_ratio: bool):
    """Signs whose changes mark log singularities of the integrand."""
    d, sgn = _ratio_z(u, system, channel)
    with np.errstate(over="ignore", invalid="ignore"):
        z = sgn * np.exp(np.minimum(d, 700.0))
        # sign(1 + z) flips at zeros of X + Y and of X
        one_plus = np.where(d > 700.0, sgn, np.sign(1.0 + z))
    cols = []
    if not atom_ratio:
        cols.append(one_plus)
    atom = system.atom
    if atom is not None and atom.alpha0 > 0 and channel == Channel(1, TM):
        q, coef = _atom_coef(u, atom)
        with np.errstate(over="ignore", invalid="ignore"):
            inner = np.where(d > 700.0, sgn * np.sign(coef), np.sign(1.0 + coef * z))
        cols += [inner, np.sign(1.0 - q)]
    return np.stack(cols, axis=1) if cols else np.ones((len(u), 1))


def find_breakpoints(system: CavitySystem, channel: Channel, atom_ratio: bool = False) -> list[float]:
    """Interior points on the imaginary axis where ``log|...|`` is singular.

    A log-spaced sign scan over ``u R`` in ``[1e-4, 10^2.5 (1 + l/10)]`` with
    bisection refinement.
    """
    if isinstance(system.wall, Vacuum):
        return []
    lo, hi = _SCAN_DECADES
    hi += math.log10(1.0 + channel.l / 10.0)
    n = int((hi - lo) * _SCAN_PER_DECADE) + 1
    u = np.logspace(lo, hi, n) / system.R
    s = _sign_pieces(u, system, channel, atom_ratio)
    out = []
    for i in np.nonzero(np.any(s[1:] != s[:-1], axis=1))[0]:
        for col in np.nonzero(s[i + 1] != s[i])[0]:
            a, b = u[i], u[i + 1]
            sa = s[i, col]
            for _ in range(_BISECT_ITERS):
                m = math.sqrt(a * b)
                if not a < m < b:
                    break
                sm = _sign_pieces(np.array([m]), system, channel, atom_ratio)[0, col]
                if sm == sa:
                    a = m
                else:
                    b = m
            out.append(0.5 * (a + b))
    return sorted(set(out))


# --------------------------------------------------------------------------
# channel energies
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ChannelEnergy:
    channel: Channel
    value: float
    error: float
    converged: bool
    breakpoints: tuple = ()


def _spec_for(system: CavitySystem, spec: QuadratureSpec) -> QuadratureSpec:
    return spec.with_scale(1.0 / system.R)


def channel_energy_result(channel: Channel, system: CavitySystem,
                          spec: QuadratureSpec = QuadratureSpec()) -> ChannelEnergy:
    """Channel energy with its quadrature error estimate and convergence flag."""
    if isinstance(system.wall, Vacuum):
        return ChannelEnergy(channel, 0.0, 0.0, True)
    bps = find_breakpoints(system, channel)
    pref = (2 * channel.l + 1) / (2.0 * math.pi)
    res = integrate_semi_infinite(lambda u: log_mode_function(u, system, channel),
                                  _spec_for(system, spec), breakpoints=bps)
    return ChannelEnergy(channel, pref * res.value, pref * res.error, res.converged, tuple(bps))


def channel_energy(channel: Channel, system: CavitySystem, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Contribution of one ``(l, pol)`` channel, ``2l+1`` included, in ``hbar omega_ref``."""
    return channel_energy_result(channel, system, spec).value


def channels_upto(lmax: int) -> list[Channel]:
    """Channels in the fixed reduction order: ascending ``l``, TE before TM."""
    return [Channel(l, p) for l in range(1, lmax + 1) for p in (TE, TM)]


def channel_energies(system: CavitySystem, lmax: int, spec: QuadratureSpec = QuadratureSpec(),
                     threads: int = 1) -> list[ChannelEnergy]:
    """All channels up to ``lmax``; the order does not depend on ``threads``."""
    chans = channels_upto(lmax)
    if threads <= 1:
        return [channel_energy_result(c, system, spec) for c in chans]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda c: channel_energy_result(c, system, spec), chans))


# --------------------------------------------------------------------------
# cutoff scan
# --------------------------------------------------------------------------

@dataclass
class EnergyReport:
    """Partial energies against the angular-momentum cutoff.

    Attributes
    ----------
    per_channel : list of ChannelEnergy
        Ascending ``l``, TE before TM.
    cumulative_vs_lmax : list of (int, float)
        ``U_0(L)`` for ``L = 1..l_max``.
    fit : dict
        ``cubic`` (coefficients of ``a L^3 + b L^2 + c L + d``), ``per_term_exponent``,
        ``cumulative_exponent``, ``window``; ``None`` entries when skipped and
        ``degenerate`` True when the range is too short.
    cutoff : dict
        ``l_max`` and ``d_at`` (``None`` if ``l_max`` was given directly).
    converged : bool
    """

    per_channel: list
    cumulative_vs_lmax: list
    fit: dict
    cutoff: dict
    converged: bool = True
    per_term: list = field(default_factory=list)

    @property
    def total(self) -> float:
        return self.cumulative_vs_lmax[-1][1] if self.cumulative_vs_lmax else 0.0


def lmax_from_d_at(R: float, d_at: float) -> int:
    """Cutoff ``l_max = round(2 pi R / d_at)``."""
    if not d_at > 0:
        raise DomainError("d_at must be positive")
    return max(1, int(round(2.0 * math.pi * R / d_at)))


def _loglog_slope(x, y):
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    if x.size < 2 or np.any(y == 0):
        return None
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def fit_growth(per_term, cumulative, window: tuple[int, int]) -> dict:
    """Growth fits over ``L`` in ``window`` (inclusive).

    ``per_term[L-1]`` is the TE+TM contribution of order ``L``;
    ``cumulative[L-1]`` the partial sum up to ``L``.
    """
    lo, hi = window
    L = np.arange(1, len(cumulative) + 1)
    m = (L >= lo) & (L <= hi)
    out = {"window": (int(lo), int(hi)), "cubic": None, "per_term_exponent": None,
           "cumulative_exponent": None, "degenerate": False}
    cum = np.asarray(cumulative, dtype=float)
    if len(cumulative) < 8 or m.sum() < 4:
        out["degenerate"] = True
        return out
    if np.all(cum == 0):
        return out
    out["cubic"] = [float(c) for c in np.polyfit(L[m].astype(float), cum[m], 3)]
    out["per_term_exponent"] = _loglog_slope(L[m], np.asarray(per_term)[m])
    out["cumulative_exponent"] = _loglog_slope(L[m], cum[m])
    return out


def u0_scan(system: CavitySystem, l_max: Optional[int] = None, spec: QuadratureSpec = QuadratureSpec(),
            d_at: Optional[float] = None, threads: int = 1,
            fit_window: Optional[tuple[int, int]] = None) -> EnergyReport:
    """Partial sums of the cavity energy for ``L = 1..l_max`` and growth fits.

    Give either ``l_max`` or the atomic length ``d_at`` (then
    ``l_max = round(2 pi R / d_at)``).  The default fit window is the upper
    half of the range.
    """
    if (l_max is None) == (d_at is None):
        raise DomainError("give exactly one of l_max and d_at")
    if d_at is not None:
        l_max = lmax_from_d_at(system.R, d_at)
    l_max = int(l_max)
    if l_max < 2:
        raise DomainError("l_max must be >= 2")
    terms = channel_energies(system, l_max, spec, threads)
    per_l = [terms[2 * i].value + terms[2 * i + 1].value for i in range(l_max)]
    cum, acc = [], 0.0
    for L, v in enumerate(per_l, start=1):
        acc += v
        cum.append((L, acc))
    if fit_window is None:
        fit_window = (max(1, (l_max + 1) // 2), l_max)
    fit = fit_growth(per_l, [c[1] for c in cum], fit_window)
    return EnergyReport(terms, cum, fit, {"l_max": l_max, "d_at": d_at},
                        all(t.converged for t in terms), per_l)


# --------------------------------------------------------------------------
# atom shift
# --------------------------------------------------------------------------

def atom_shift_result(R: float, wall, atom: PolarizabilityModel,
                      spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Energy shift from an atom at the centre, with error estimate.

    ``dU = 3/(2 pi) int_0^inf du log|(1 - s_b s_c)/(1 - s_b)|`` on the
    ``l = 1`` TM channel; every other channel is unchanged by the atom.
    """
    system = CavitySystem(wall, R, atom)
    if atom.alpha0 == 0 or isinstance(wall, Vacuum):
        return QuadResult(0.0, 0.0, True, 0)
    ch = Channel(1, TM)
    bps = find_breakpoints(system, ch, atom_ratio=True)
    res = integrate_semi_infinite(lambda u: log_atom_ratio(u, system), _spec_for(system, spec),
                                  breakpoints=bps)
    pref = 3.0 / (2.0 * math.pi)
    return QuadResult(pref * res.value, pref * res.error, res.converged, res.n_eval)


def atom_shift(R: float, wall, atom: PolarizabilityModel, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Energy shift in ``hbar omega_ref`` (negative for a mirror-walled cavity)."""
    return float(atom_shift_result(R, wall, atom, spec).value)


__all__ = ["ChannelEnergy", "EnergyReport", "atom_shift", "atom_shift_result", "channel_energy",
           "channel_energy_result", "channel_energies", "channels_upto", "find_breakpoints",
           "fit_growth", "lmax_from_d_at", "log_atom_ratio", "log_mode_function", "u0_scan"]
