"""Wall and centre scattering amplitudes for one (l, polarization) channel.

The wall amplitude for a vacuum sphere of radius ``R`` in a host ``eps``
is assembled as

    s_b = -(h^o_{l-1}(x) - h^o_l(x) C) / (h^i_{l-1}(x) - h^i_l(x) C),

with ``x = omega R``, ``q_M = h^o_l(n x) / h^o_{l-1}(n x)`` and

    TE: C = n / q_M
    TM: C = 1 / (n q_M) + (eps - 1)/eps * l / x.

This is the ratio of the ``Q`` products (see :func:`q_factor`) after dividing
numerator and denominator by ``k_V h^o_l(n x)``.  Only ratios of Hankel
functions enter, so the exponential scale factors cancel analytically, and at
``eps = 1`` the numerator vanishes exactly.

On the positive imaginary axis all quantities are evaluated with real
modified Bessel functions (see :func:`imag_axis_terms`), so ``s_b(iu)`` is
real by construction.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import _backend
from .errors import DomainError, PoleError
from .media import (Constant, DielectricModel, PerfectConductor, PolarizabilityModel, Vacuum,
                    eval_alpha, eval_epsilon, sqrt_eps)
from .specfun import (OUTGOING, _kind, bessel_sequences, hankel_sequences, outgoing_sequence,
                      spherical_jn_scaled)

TE = "TE"
TM = "TM"
WALL = "wall"
CENTER = "center"

#: relative size of the denominator below which a result is flagged as ill-conditioned
COND_TOL = 1e-12


@dataclass(frozen=True, order=True)
class Channel:
    """Multipole channel. ``m`` enters only through the ``2l+1`` degeneracy."""

    l: int
    pol: str

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 1:
            raise DomainError(f"channel order must be an integer >= 1, got {self.l}")
        pol = str(self.pol).upper()
        if pol not in (TE, TM):
            raise DomainError(f"polarization must be TE or TM, got {self.pol!r}")
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "pol", pol)

    @property
    def degeneracy(self) -> int:
        return 2 * self.l + 1


@dataclass(frozen=True)
class ScatterAmplitude:
    """A scattering amplitude with its channel, location and frequency."""

    value: complex
    channel: Optional[Channel]
    where: str
    omega: complex
    ill_conditioned: bool = False

    def __complex__(self):
        return complex(self.value)


class ScaledValue(NamedTuple):
    """``mantissa * exp(offset)``."""

    mantissa: complex
    offset: float

    @property
    def value(self) -> complex:
        if self.mantissa == 0:
            return 0j
        return self.mantissa * math.exp(self.offset)


# --------------------------------------------------------------------------
# complex frequency
# --------------------------------------------------------------------------

def _h1_ratios(x: complex, lmax: int) -> np.ndarray:
    """``h^o_l(x) / h^o_{l-1}(x)`` for l = 1..lmax (index l).

    Upward recurrence on the ratio for ``Im x >= 0``.  Below the real axis
    ``h^(1)`` is minimal for ``l < |x|`` and the ratios come from the stable
    sequence instead.
    """
    q = np.empty(lmax + 1, dtype=complex)
    q[0] = np.nan
    if x.imag < 0:
        seq = outgoing_sequence(x, lmax)
        q[1:] = seq.mant[1:] / seq.mant[:-1] * np.exp(seq.offset[1:] - seq.offset[:-1])
        return q
    r = 1.0 / x - 1j
    q[1] = r
    for l in range(2, lmax + 1):
        r = (2 * l - 1) / x - 1.0 / r
        q[l] = r
    return q


def _omega_check(w: complex, R: float) -> complex:
    w = complex(w)
    if not R > 0:
        raise DomainError(f"cavity radius must be positive, got {R}")
    if w == 0:
        raise DomainError("scattering amplitudes are undefined at omega = 0")
    return w


def _on_imag_axis(w: complex) -> bool:
    return w.real == 0 and w.imag > 0


class WallParts(NamedTuple):
    """``N, D, J`` on a common scale: ``s_b = -N/D`` and ``1 - s_b s_c = (2J + N (s_c - 1))/D``.

    ``J`` is built from the regular ``j_l``, so the mode function keeps its
    relative accuracy where ``s_b`` is within rounding of 1.
    """

    N: complex
    D: complex
    J: complex
    ill_conditioned: bool


def _rescale(m: complex, off: float, ref: float) -> complex:
    if m == 0 or off == -math.inf:
        return 0j
    d = off - ref
    if d > 709.0:
        raise OverflowError("wall amplitude exceeds the double range")
    return m * math.exp(d) if d > -745.0 else 0j


def _parts(l: int, x: complex, C, ctx: str) -> WallParts:
    """Parts for ``h_{l-1} - h_l C``; ``C = None`` means the TE mirror (``C -> inf``)."""
    if x.imag >= 0:
        # the ingoing sequence is not needed above the real axis
        ho, hi, j = outgoing_sequence(x, l), None, spherical_jn_scaled(x, l)
    else:
        ho, hi, j = bessel_sequences(x, l)
    if C is None:
        ref = max(j.offset[l], ho.offset[l])
        N = _rescale(ho.mant[l], ho.offset[l], ref)
        J = _rescale(j.mant[l], j.offset[l], ref)
        D = 2.0 * J - N if hi is None else _rescale(hi.mant[l], hi.offset[l], ref)
        return WallParts(N, complex(D), J, False)
    # the ratio form makes N vanish exactly when the medium is vacuum
    qv = complex(_h1_ratios(x, l)[l])
    n_m, n_o = ho.mant[l] * (1.0 / qv - C), ho.offset[l]
    jp, jl, oj = j.pair(l)
    j_m = jp - jl * C
    if x.imag >= 0:
        # h^i = 2 j - h^o, so D = 2 J - N; the direct h^i form cancels for small x
        ref = max(oj, n_o)
        N, J = _rescale(n_m, n_o, ref), _rescale(j_m, oj, ref)
        D = 2.0 * J - N
        scale = max(abs(2.0 * J), abs(N))
    else:
        hip, hil, ref = hi.pair(l)
        D = hip - hil * C
        scale = max(abs(hip), abs(hil * C))
        N, J = _rescale(n_m, n_o, ref), _rescale(j_m, oj, ref)
    if N == 0:
        return WallParts(0j, 1.0 + 0j, 0.5 + 0j, False)
    if D == 0:
        raise PoleError(f"{ctx}: wall amplitude denominator vanishes at x = {x}")
    ill = abs(D) < COND_TOL * scale
    if ill:
        warnings.warn(f"{ctx}: near-resonant denominator at x = {x}", RuntimeWarning, stacklevel=4)
    return WallParts(N, D, J, ill)


def wall_parts(l: int, pol: str, w: complex, R: float, model: DielectricModel) -> WallParts:
    """Scaled pieces of the wall amplitude at complex frequency ``w``."""
    w = _omega_check(w, R)
    x = w * R
    ctx = f"s_b {pol} l={l}"
    if isinstance(model, PerfectConductor):
        if pol == TE:
            return _parts(l, x, None, ctx)
        return _parts(l, x, l / x, ctx)
    if isinstance(model, Vacuum):
        return WallParts(0j, 1.0 + 0j, 0.5 + 0j, False)
    eps = eval_epsilon(model, w)
    n = sqrt_eps(eps)
    qm = complex(_h1_ratios(n * x, l)[l])
    if pol == TE:
        C = n / qm
    else:
        C = 1.0 / (n * qm) + (eps - 1.0) / eps * l / x
    return _parts(l, x, C, ctx)


def _pec_l0(pol: str, x: complex) -> complex:
    ho, hi = hankel_sequences(x, 1)
    if pol == TE:
        v, lg = -ho.mant[0] / hi.mant[0], ho.offset[0] - hi.offset[0]
    else:
        def dh(sq):
            o = sq.offset[0]
            return sq.mant[0] / x - sq.mant[1] * math.exp(sq.offset[1] - o), o
        (do, o), (di, oi) = dh(ho), dh(hi)
        if di == 0:
            raise PoleError(f"PEC TM amplitude pole at x = {x}")
        v, lg = -do / di, o - oi
    return v * math.exp(lg) if lg > -745 else 0j


# --------------------------------------------------------------------------
# imaginary axis (real arithmetic)
# --------------------------------------------------------------------------

def imag_axis_terms(u, R: float, model: DielectricModel, lmax: int):
    """Log-scaled ``X, Y`` with ``s_b(iu) = Y / (X + Y)`` for l = 1..lmax.

    Returns four arrays ``(log|X|, sign X, log|Y|, sign Y)`` of shape
    ``(len(u), lmax, 2)``; the last axis is (TE, TM).  Also
    ``1 - s_b = X / (X + Y)``.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(~(u > 0)):
        raise DomainError("imaginary frequencies must be positive")
    t = u * R
    if isinstance(model, PerfectConductor):
        return _backend.wall_terms(t, None, None, int(lmax), True)
    chi = np.asarray(model.chi_imag(u), dtype=float)
    if np.any(chi <= -1.0):
        raise DomainError("eps(iu) must be positive on the imaginary axis")
    n = np.sqrt(1.0 + chi)
    return _backend.wall_terms(t, n, chi, int(lmax), False)


def _sb_from_terms(lx, sx, ly, sy):
    d = ly - lx
    with np.errstate(over="ignore", invalid="ignore"):
        z = sx * sy * np.exp(np.minimum(d, 700.0))
        sb = np.where(d > 700.0, 1.0 / (1.0 + sx * sy * np.exp(-d)), z / (1.0 + z))
    return np.where(sy == 0, 0.0, sb)


def s_b_imag(u, R: float, model: DielectricModel, lmax: int) -> np.ndarray:
    """Real wall amplitudes ``s_b(iu)``, shape ``(len(u), lmax, 2)``."""
    return _sb_from_terms(*imag_axis_terms(u, R, model, lmax))


# --------------------------------------------------------------------------
# public amplitudes
# --------------------------------------------------------------------------

def q_factor(A: str, Ap: str, d, dp, l: int, w: complex, R: float, eps: complex) -> ScaledValue:
    """``Q_l = k_{A'} h^d_l(k_A R) Dhat h^{d'}_l(k_{A'} R)`` in scaled form.

    Parameters
    ----------
    A, Ap : {'vacuum', 'medium'}
        Region of the function argument and of the prefactor/derivative argument.
    d, dp : {'outgoing', 'ingoing'}
    l : int
    w : complex
        Frequency.
    R : float
    eps : complex
        Host permittivity at ``w``.

    Returns
    -------
    ScaledValue
    """
    w = _omega_check(w, R)
    n = sqrt_eps(eps)
    k = {"vacuum": w, "v": w, "medium": n * w, "m": n * w}
    try:
        kA, kAp = k[A.lower()], k[Ap.lower()]
    except KeyError:
        raise ValueError("regions must be 'vacuum' or 'medium'") from None
    d, dp = _kind(d), _kind(dp)
    L = max(l, 1)
    xa, xap = kA * R, kAp * R
    ho, hi = hankel_sequences(xa, L)
    s1 = ho if d == OUTGOING else hi
    ho2, hi2 = hankel_sequences(xap, L)
    s2 = ho2 if dp == OUTGOING else hi2
    if l == 0:
        o2 = s2.offset[0]
        dh = s2.mant[0] / xap - s2.mant[1] * math.exp(s2.offset[1] - o2)
    else:
        p, c, o2 = s2.pair(l)
        dh = p - l / xap * c
    m = kAp * s1.mant[l] * dh
    return ScaledValue(complex(m), float(s1.offset[l] + o2))


def _imag_value(u: float, R: float, model, l: int, pol: str) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        v = float(s_b_imag(np.array([u]), R, model, l)[0, l - 1, 0 if pol == TE else 1])
    if not math.isfinite(v):
        raise PoleError(f"wall amplitude pole at omega = {u}i (l = {l}, {pol})")
    return v


def s_b_pec(l: int, pol: str, x: complex) -> ScatterAmplitude:
    """Perfect-mirror wall amplitude: TE ``-h^o/h^i``, TM ``-Dhat h^o / Dhat h^i``."""
    pol = str(pol).upper()
    if pol not in (TE, TM):
        raise DomainError(f"polarization must be TE or TM, got {pol!r}")
    x = complex(x)
    if x == 0:
        raise DomainError("PEC amplitude undefined at x = 0")
    if l < 0:
        raise DomainError("order must be non-negative")
    ch = Channel(l, pol) if l >= 1 else None
    if _on_imag_axis(x) and l >= 1:
        v = _imag_value(x.imag, 1.0, PerfectConductor(), l, pol)
        return ScatterAmplitude(complex(v, 0.0), ch, WALL, x)
    if l == 0:
        return ScatterAmplitude(_pec_l0(pol, x), ch, WALL, x)
    p = wall_parts(l, pol, x, 1.0, PerfectConductor())
    return ScatterAmplitude(-p.N / p.D, ch, WALL, x, p.ill_conditioned)


def _s_b(l: int, pol: str, w: complex, R: float, model: DielectricModel, method: str) -> ScatterAmplitude:
    ch = Channel(l, pol)
    w = _omega_check(w, R)
    if isinstance(model, PerfectConductor):
        a = s_b_pec(l, pol, w * R)
        return ScatterAmplitude(a.value, ch, WALL, w)
    if isinstance(model, Vacuum):
        return ScatterAmplitude(0j, ch, WALL, w)
    real_axis_ok = not (isinstance(model, Constant) and model.eps.imag != 0)
    if method == "auto" and _on_imag_axis(w) and real_axis_ok:
        v = _imag_value(w.imag, R, model, l, pol)
        return ScatterAmplitude(complex(v, 0.0), ch, WALL, w)
    p = wall_parts(l, pol, w, R, model)
    return ScatterAmplitude(-p.N / p.D if p.N != 0 else 0j, ch, WALL, w, p.ill_conditioned)


def s_b_te(l: int, w: complex, R: float, model: DielectricModel, method: str = "auto") -> ScatterAmplitude:
    """TE wall amplitude.

    Parameters
    ----------
    l : int
        Order, ``l >= 1``.
    w : complex
        Frequency (units of ``omega_ref``), non-zero.
    R : float
        Cavity radius (units of ``c/omega_ref``).
    model : DielectricModel
    method : {'auto', 'complex'}
        ``'auto'`` uses real modified Bessel functions on the positive
        imaginary axis; ``'complex'`` always uses complex Hankel functions.
    """
    return _s_b(l, TE, w, R, model, method)


def s_b_tm(l: int, w: complex, R: float, model: DielectricModel, method: str = "auto") -> ScatterAmplitude:
    """TM wall amplitude; arguments as :func:`s_b_te`."""
    return _s_b(l, TM, w, R, model, method)


def s_c_empty(channel: Optional[Channel] = None, w: complex = 0j) -> ScatterAmplitude:
    """Empty centre: every incoming wave leaves as an outgoing one, ``s_c = 1``."""
    return ScatterAmplitude(1.0 + 0j, channel, CENTER, complex(w))


def atom_q_imag(u, model: PolarizabilityModel):
    """``q(u) = (2/3) u^3 alpha(iu)`` so that ``s_c(iu) = (1 + q)/(1 - q)``."""
    u = np.asarray(u, dtype=float)
    return (2.0 / 3.0) * u ** 3 * model.alpha_imag(u)


def s_c_atom(w: complex, model: Optional[PolarizabilityModel], channel: Optional[Channel] = None) -> ScatterAmplitude:
    """Centre amplitude of a point dipole, ``(1 + (2/3) i k^3 alpha)/(1 - (2/3) i k^3 alpha)``.

    Only the ``l = 1`` TM channel couples to an electric dipole; any other
    ``channel`` returns :func:`s_c_empty`.
    """
    w = complex(w)
    if channel is None:
        channel = Channel(1, TM)
    if model is None or model.alpha0 == 0 or channel != Channel(1, TM):
        return s_c_empty(channel, w)
    if _on_imag_axis(w):
        q = float(atom_q_imag(w.imag, model))
        if q == 1.0:
            raise PoleError(f"atom amplitude pole at omega = {w}")
        return ScatterAmplitude(complex((1.0 + q) / (1.0 - q), 0.0), channel, CENTER, w)
    q = (2.0 / 3.0) * 1j * w ** 3 * eval_alpha(model, w)
    if q == 1:
        raise PoleError(f"atom amplitude pole at omega = {w}")
    return ScatterAmplitude((1.0 + q) / (1.0 - q), channel, CENTER, w)


@dataclass(frozen=True)
class CavitySystem:
    """Spherical vacuum cavity of radius ``R`` in ``wall``, optionally with an atom at the centre."""

    wall: DielectricModel
    R: float
    atom: Optional[PolarizabilityModel] = None

    def __post_init__(self):
        R = float(self.R)
        if not R > 0:
            raise DomainError(f"cavity radius must be positive, got {R}")
        object.__setattr__(self, "R", R)

    def s_b(self, channel: Channel, w: complex, method: str = "auto") -> ScatterAmplitude:
        return _s_b(channel.l, channel.pol, w, self.R, self.wall, method)

    def s_c(self, channel: Channel, w: complex) -> ScatterAmplitude:
        return s_c_atom(w, self.atom, channel)

    def mode_function(self, channel: Channel, w: complex) -> complex:
        """``1 - s_b s_c`` at complex frequency ``w``, free of cancellation where ``s_b s_c ~ 1``."""
        w = complex(w)
        sc = self.s_c(channel, w).value
        if _on_imag_axis(w) and not (isinstance(self.wall, Constant) and self.wall.eps.imag != 0):
            return 1.0 - self.s_b(channel, w).value * sc
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            p = wall_parts(channel.l, channel.pol, w, self.R, self.wall)
        if p.N == 0:
            return 1.0 + 0j
        return (2.0 * p.J + p.N * (sc - 1.0)) / p.D

    def without_atom(self) -> "CavitySystem":
        return CavitySystem(self.wall, self.R, None)

