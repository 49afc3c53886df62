"""Total scattering, normal modes, density of states and mode counting.

Everything here is built on the mode function ``f(w) = 1 - s_b(w) s_c(w)`` of
one channel: normal modes are its zeros, the change in the number of states
below ``w`` is ``-(1/pi) arg f(w)`` and zeros inside a contour are counted by
the winding of ``f``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ContourError, DomainError, PoleError, ResonanceError
from .scattering import CavitySystem, Channel

#: adjacent samples may differ in phase by at most this before the step is split
PHASE_STEP = math.pi / 2
MAX_DEPTH = 40
# below this fraction of the path the phase of f near a zero is rounding noise
MIN_WIDTH = 1e-10


def total_scattering(s: complex, delta: float, theta: float) -> complex:
    """Unimodular total amplitude ``(s + a e^{i theta}) / (1 + b e^{i theta})``.

    With ``a = e^{i delta}`` and ``b = conj(s) e^{i delta}``; ``|S| = 1`` for
    ``|s| <= 1``.
    """
    s = complex(s)
    if abs(s) > 1.0 + 1e-12:
        raise DomainError(f"|s| must be <= 1, got {abs(s)}")
    e = cmath.exp(1j * (delta + theta))
    den = 1.0 + s.conjugate() * e
    if den == 0:
        raise PoleError("total scattering denominator vanishes")
    return (s + e) / den


def mode_condition(s_b: complex, s_c: complex) -> complex:
    """``1 - s_b s_c``; zero at a normal mode."""
    return 1.0 - complex(s_b) * complex(s_c)


class DosSample(NamedTuple):
    omega: float
    rho: float


def _mode_fn(system: CavitySystem, channel: Channel) -> Callable[[complex], complex]:
    return lambda w: system.mode_function(channel, w)


def _phase(a: complex, b: complex) -> float:
    """``arg(b / a)`` in ``(-pi, pi]``."""
    return cmath.phase(b / a)


def dos(channel: Channel, omega: float, system: CavitySystem, h: float | None = None) -> DosSample:
    """Density of states of one channel (``m`` degeneracy not included).

    ``rho = -(1/pi) d/dw arg(1 - s_b s_c)`` by a central difference with
    step ``h`` (default ``1e-4 w``) and one Richardson halving.

    Raises
    ------
    ResonanceError
        If the mode function vanishes inside the stencil.
    """
    omega = float(omega)
    if not omega > 0:
        raise DomainError("dos needs omega > 0")
    h = 1e-4 * omega if h is None else float(h)
    f = _mode_fn(system, channel)

    def d(step):
        fp, fm = f(omega + step), f(omega - step)
        if fp == 0 or fm == 0 or not (np.isfinite(fp) and np.isfinite(fm)):
            raise ResonanceError(f"mode function vanishes near omega = {omega}")
        ph = _phase(fm, fp)
        if abs(ph) > PHASE_STEP:
            raise ResonanceError(f"phase jump {ph:.3g} across the stencil at omega = {omega}")
        return ph / (2 * step)

    d1, d2 = d(h), d(h / 2)
    deriv = (4 * d2 - d1) / 3
    return DosSample(omega, -deriv / math.pi)


def _accumulate(f, path, t0: float, t1: float, n0: int, on_jump=None):
    """Continuous phase change of ``f(path(t))`` for ``t`` from ``t0`` to ``t1``.

    Each step is split until the phase change is below ``PHASE_STEP``.  A step
    that still jumps at depth ``MAX_DEPTH`` crosses a zero
    (or pole) of ``f``; refinement also stops once a step is shorter than
    ``MIN_WIDTH`` of the path.  Such a step is passed to ``on_jump(t, dphi)``, which returns the
    phase to book for it, or raises.
    """
    ts = np.linspace(t0, t1, n0 + 1)
    span = abs(t1 - t0)
    vals = [f(path(t)) for t in ts]
    total = 0.0

    def seg(ta, fa, tb, fb, depth):
        nonlocal total
        if fa == 0 or fb == 0:
            raise ResonanceError(f"mode function vanishes at {path(ta if fa == 0 else tb)}")
        dphi = _phase(fa, fb)
        if abs(dphi) <= PHASE_STEP:
            total += dphi
            return
        if depth >= MAX_DEPTH or abs(tb - ta) <= MIN_WIDTH * span:
            if on_jump is None:
                raise ContourError(f"phase unwrap failed near {path(ta)}")
            total += on_jump(0.5 * (ta + tb), dphi)
            return
        tm = 0.5 * (ta + tb)
        fm = f(path(tm))
        seg(ta, fa, tm, fm, depth + 1)
        seg(tm, fm, tb, fb, depth + 1)

    for i in range(n0):
        seg(ts[i], vals[i], ts[i + 1], vals[i + 1], 0)
    return total


@dataclass(frozen=True)
class DosBin:
    """One bin of :func:`dos_binned`.

    ``delta_n`` is ``-(1/pi)`` times the phase change of ``1 - s_b s_c`` across
    the bin, point masses included.  ``n_modes`` counts the real-axis zeros of
    a lossless system inside the bin (each a unit point mass).
    """

    lo: float
    hi: float
    delta_n: float
    n_modes: int


def dos_binned(channel: Channel, interval: tuple[float, float], n_bins: int, system: CavitySystem,
               samples_per_bin: int = 16) -> list[DosBin]:
    """Mode counts per frequency bin from the unwrapped phase of ``1 - s_b s_c``.

    A real zero of the mode function (lossless resonance) shows up as a
    persistent phase jump of ``pi`` and is booked as one mode, as if it sat
    infinitesimally below the real axis.

    Raises
    ------
    ContourError
        If a persistent jump is not a simple zero (unwrap failure).
    """
    w1, w2 = map(float, interval)
    if not (0 < w1 < w2):
        raise DomainError("need 0 < omega_1 < omega_2")
    if n_bins < 1:
        raise DomainError("n_bins must be >= 1")
    f = _mode_fn(system, channel)
    edges = np.linspace(w1, w2, n_bins + 1)
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        zeros = [0]

        def jump(t, dphi):
            if abs(abs(dphi) - math.pi) > 1e-3:
                raise ContourError(f"phase unwrap failed near omega = {t}")
            zeros[0] += 1
            return -math.pi

        dphi = _accumulate(f, lambda t: t, lo, hi, samples_per_bin, jump)
        out.append(DosBin(float(lo), float(hi), -dphi / math.pi, zeros[0]))
    return out


def count_modes(channel: Channel, rect: tuple[float, float, float, float], system: CavitySystem,
                samples_per_edge: int = 32, max_nudges: int = 6) -> int:
    """Zeros minus poles of ``1 - s_b s_c`` inside a rectangle of the complex ``w`` plane.

    Parameters
    ----------
    rect : (re_min, re_max, im_min, im_max)
    samples_per_edge : int
        Initial samples per edge before adaptive refinement.
    max_nudges : int
        If the contour runs through a zero it is enlarged slightly and retried.

    Raises
    ------
    ContourError
        When the contour still hits a zero after ``max_nudges`` attempts, or the
        winding is not close to an integer.
    """
    x0, x1, y0, y1 = map(float, rect)
    if not (x1 > x0 and y1 > y0):
        raise ContourError("degenerate rectangle")
    f = _mode_fn(system, channel)
    size = max(x1 - x0, y1 - y0)
    for attempt in range(max_nudges + 1):
        e = 1e-3 * size * attempt * (1 if attempt % 2 else -0.5)
        a, b, c, d = x0 - e, x1 + e, y0 - e, y1 + e
        corners = [complex(a, c), complex(b, c), complex(b, d), complex(a, d)]
        try:
            total = 0.0
            for k in range(4):
                p, q = corners[k], corners[(k + 1) % 4]
                total += _accumulate(f, lambda t, p=p, q=q: p + (q - p) * t, 0.0, 1.0, samples_per_edge)
        except (ContourError, ResonanceError, PoleError, ZeroDivisionError):
            continue
        w = total / (2 * math.pi)
        n = round(w)
        if abs(w - n) > 1e-6:
            raise ContourError(f"winding {w} is not an integer")
        return int(n)
    raise ContourError("contour passes through a zero or pole of the mode function")
