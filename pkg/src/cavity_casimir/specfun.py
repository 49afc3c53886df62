"""Spherical Hankel functions and the D-hat operator at real and complex argument.

Conventions
-----------
Time dependence ``exp(-i omega t)`` is assumed throughout, so ``h_l^(1)`` is
the *outgoing* wave and ``h_l^(2)`` the *ingoing* one.

Values are carried in a scaled form ``mantissa * exp(offset)`` with a real
``offset``.  Products of a decaying and a growing function (for example
``h^(1)(ix) * h^(2)(ix)``) stay representable this way even when the factors
over- or underflow a double.

Stability
---------
* The Hankel function that decays in the half-plane of ``x`` (``h^(1)`` for
  ``Im x >= 0``) is built by upward recurrence; it is dominant in ``l``.
* ``j_l`` is minimal in ``l`` and is built by backward (Miller) ratio
  recurrence, normalised to the closed form of ``j_0`` or ``j_1``.
* The other Hankel function is ``2 j_l - h_l``.  Upward recurrence on it is
  unstable once ``Im x`` is large (``h^(2)(iT)`` picks up the modified ``i_l``
  component, which upward recurrence destroys).

On the positive imaginary axis the real modified functions are used directly
(see :func:`modified_sequences`).
"""
from __future__ import annotations

import cmath
import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError

#: default largest supported order; raise with :func:`set_lmax_supported`.
LMAX_SUPPORTED = 256

_LOG_MAX = math.log(np.finfo(float).max)

OUTGOING = "outgoing"
INGOING = "ingoing"
_KIND_ALIASES = {
    "outgoing": OUTGOING, "o": OUTGOING, 1: OUTGOING, "1": OUTGOING,
    "ingoing": INGOING, "i": INGOING, 2: INGOING, "2": INGOING,
}


def set_lmax_supported(lmax: int) -> None:
    """Raise (or lower) the largest order accepted by the public functions."""
    global LMAX_SUPPORTED
    if lmax < 1:
        raise ValueError("lmax must be >= 1")
    LMAX_SUPPORTED = int(lmax)


def _kind(kind) -> str:
    try:
        return _KIND_ALIASES[kind]
    except (KeyError, TypeError):
        raise ValueError(f"unknown Hankel kind {kind!r}; use 'outgoing' or 'ingoing'") from None


def _check_order(l: int) -> None:
    if l < 0:
        raise DomainError(f"order l must be non-negative, got {l}")
    if l > LMAX_SUPPORTED:
        raise DomainError(f"order l={l} exceeds supported lmax={LMAX_SUPPORTED}")


class BesselPair(NamedTuple):
    """Function value ``f`` and its derivative ``df`` with respect to the argument."""

    f: complex
    df: complex


class ScaledPair(NamedTuple):
    """``(f, df)`` whose true values are ``f * exp(offset)`` and ``df * exp(offset)``."""

    f: complex
    df: complex
    offset: float

    def unscaled(self) -> BesselPair:
        return BesselPair(_unscale(self.f, self.offset), _unscale(self.df, self.offset))


class ScaledSequence(NamedTuple):
    """Orders ``0..lmax`` of one function family, ``value[l] = mant[l] * exp(offset[l])``."""

    mant: np.ndarray
    offset: np.ndarray

    def pair(self, l: int) -> tuple[complex, complex, float]:
        """Return ``(f_{l-1}, f_l, offset)`` sharing one offset."""
        o0, o1 = self.offset[l - 1], self.offset[l]
        o = max(o0, o1)
        prev = self.mant[l - 1] * math.exp(o0 - o) if o0 > -math.inf else 0j
        cur = self.mant[l] * math.exp(o1 - o) if o1 > -math.inf else 0j
        return complex(prev), complex(cur), float(o)


def _unscale(m: complex, offset: float) -> complex:
    if m == 0:
        return 0j
    lg = math.log(abs(m)) + offset
    if lg > _LOG_MAX:
        raise OverflowError(f"magnitude exp({lg:.1f}) exceeds the double range")
    if lg < -745.2:
        return 0j
    # split the exponential so that m * exp(offset) cannot overflow midway
    return (m / abs(m)) * math.exp(lg)


# --------------------------------------------------------------------------
# complex argument
# --------------------------------------------------------------------------

def _h1_upward(x: complex, lmax: int) -> ScaledSequence:
    """Outgoing Hankel functions by upward ratio recurrence.

    Stable for ``Im x >= 0`` only.  Below the real axis ``h^(2)`` decays and
    ``h^(1)`` turns minimal for ``l < |x|``; use :func:`outgoing_sequence`.
    """
    mant = np.empty(lmax + 1, dtype=complex)
    off = np.empty(lmax + 1)
    # h_0 = -i exp(ix)/x
    off[0] = -x.imag - math.log(abs(x))
    mant[0] = -1j * cmath.exp(1j * x.real) * (abs(x) / x)
    q = 1.0 / x - 1j  # h_1 / h_0
    for l in range(1, lmax + 1):
        if l > 1:
            q = (2 * l - 1) / x - 1.0 / q
        aq = abs(q)
        mant[l] = mant[l - 1] * (q / aq)
        off[l] = off[l - 1] + math.log(aq)
    return ScaledSequence(mant, off)


def _scaled_sin_cos(x: complex) -> tuple[complex, complex, float]:
    """``sin x`` and ``cos x`` as mantissas sharing the offset ``|Im x|``."""
    t = abs(x.imag)
    if t < 300.0:
        e = math.exp(-t)
        return cmath.sin(x) * e, cmath.cos(x) * e, t
    ep = cmath.exp(1j * x.real) * math.exp(-x.imag - t)
    em = cmath.exp(-1j * x.real) * math.exp(x.imag - t)
    return (ep - em) / 2j, (ep + em) / 2, t


def _miller_start(x: complex, lmax: int) -> int:
    ax = abs(x)
    return lmax + 20 + int(math.ceil(ax)) + int(math.ceil(10.0 * ax ** (1.0 / 3.0)))


def spherical_jn_scaled(x: complex, lmax: int) -> ScaledSequence:
    """Regular spherical Bessel functions ``j_0..j_lmax`` by Miller's algorithm.

    Backward ratio recurrence from a start order beyond both ``lmax`` and
    ``|x|``, normalised to whichever of the closed forms ``j_0``, ``j_1`` is
    larger in magnitude.
    """
    x = complex(x)
    if x == 0:
        raise DomainError("spherical Bessel functions evaluated at x = 0")
    n_start = _miller_start(x, max(lmax, 1))
    ratios = np.empty(max(lmax, 1) + 1, dtype=complex)  # ratios[k] = j_k / j_{k-1}
    r = 0j
    for k in range(n_start, 0, -1):
        d = (2 * k + 1) / x - r
        if d == 0:
            d = 1e-300
        r = 1.0 / d
        if k <= max(lmax, 1):
            ratios[k] = r

    s, c, t = _scaled_sin_cos(x)
    j0 = s / x
    if abs(x) < 0.1:
        x2 = x * x
        j1 = x / 3.0 * (1 - x2 / 10.0 * (1 - x2 / 28.0 * (1 - x2 / 54.0))) * math.exp(-t)
    else:
        j1 = s / (x * x) - c / x

    mant = np.empty(lmax + 1, dtype=complex)
    off = np.empty(lmax + 1)
    if abs(j0) >= abs(j1):
        base_l, base = 0, j0
    else:
        base_l, base = 1, j1
    ab = abs(base)
    mant[min(base_l, lmax)] = base / ab
    off[min(base_l, lmax)] = t + math.log(ab)
    if base_l == 1:
        a0 = abs(j0)
        mant[0] = j0 / a0 if a0 else 0j
        off[0] = t + math.log(a0) if a0 else -math.inf
    for l in range(base_l + 1, lmax + 1):
        r = ratios[l]
        ar = abs(r)
        mant[l] = mant[l - 1] * (r / ar)
        off[l] = off[l - 1] + math.log(ar)
    return ScaledSequence(mant, off)


def _combine(m1: complex, o1: float, c1: float, m2: complex, o2: float, c2: float) -> tuple[complex, float]:
    """``c1*m1*e^o1 + c2*m2*e^o2`` as (mantissa, offset)."""
    o = max(o1, o2)
    if o == -math.inf:
        return 0j, -math.inf
    v = c1 * m1 * math.exp(o1 - o) + c2 * m2 * math.exp(o2 - o)
    av = abs(v)
    if av == 0:
        return 0j, -math.inf
    return v / av, o + math.log(av)


def bessel_sequences(x: complex, lmax: int) -> tuple[ScaledSequence, ScaledSequence, ScaledSequence]:
    """Scaled ``h^(1)_l``, ``h^(2)_l`` and ``j_l`` for ``l = 0..lmax``."""
    x = complex(x)
    if x == 0:
        raise DomainError("spherical Bessel functions are singular at x = 0")
    lmax = max(int(lmax), 1)
    if x.imag < 0:
        # h^(2)(x) = conj(h^(1)(conj x)) for the lower half plane
        h1c, h2c, jc = bessel_sequences(x.conjugate(), lmax)
        return (ScaledSequence(np.conj(h2c.mant), h2c.offset.copy()),
                ScaledSequence(np.conj(h1c.mant), h1c.offset.copy()),
                ScaledSequence(np.conj(jc.mant), jc.offset.copy()))
    h1 = _h1_upward(x, lmax)
    j = spherical_jn_scaled(x, lmax)
    m2 = np.empty(lmax + 1, dtype=complex)
    o2 = np.empty(lmax + 1)
    for l in range(lmax + 1):
        m2[l], o2[l] = _combine(j.mant[l], j.offset[l], 2.0, h1.mant[l], h1.offset[l], -1.0)
    return h1, ScaledSequence(m2, o2), j


def outgoing_sequence(x: complex, lmax: int) -> ScaledSequence:
    """Scaled ``h^(1)_l`` for ``l = 0..lmax`` by the stable route for either half plane."""
    x = complex(x)
    if x.imag >= 0:
        return _h1_upward(x, max(int(lmax), 1))
    return bessel_sequences(x, lmax)[0]


def hankel_sequences(x: complex, lmax: int, need_ingoing: bool = True) -> tuple[ScaledSequence, ScaledSequence | None]:
    """Scaled outgoing and ingoing Hankel sequences ``l = 0..lmax``.

    With ``need_ingoing=False`` only the outgoing family is built, by upward
    recurrence alone when ``Im x >= 0``; that skips Miller's algorithm, which
    matters for very large arguments such as ``k_M R`` in the high-index limit.
    """
    x = complex(x)
    if x == 0:
        raise DomainError("spherical Hankel functions are singular at x = 0")
    if not need_ingoing:
        return outgoing_sequence(x, lmax), None
    h1, h2, _ = bessel_sequences(x, lmax)
    return h1, h2


def _pair_from_sequence(seq: ScaledSequence, l: int, x: complex) -> ScaledPair:
    if l == 0:
        o = seq.offset[0]
        h1 = seq.mant[1] * math.exp(seq.offset[1] - o)
        return ScaledPair(complex(seq.mant[0]), complex(-h1), float(o))
    prev, cur, o = seq.pair(l)
    return ScaledPair(cur, prev - (l + 1) / x * cur, o)


def hankel_scaled(kind, l: int, x: complex) -> ScaledPair:
    """Scaled ``h_l(x)`` and ``h_l'(x)`` for outgoing/ingoing ``kind``."""
    kind = _kind(kind)
    _check_order(l)
    x = complex(x)
    if x == 0:
        raise DomainError("spherical Hankel functions are singular at x = 0")
    ho, hi = hankel_sequences(x, max(l, 1), need_ingoing=(kind == INGOING))
    seq = ho if kind == OUTGOING else hi
    return _pair_from_sequence(seq, l, x)


def hankel(kind, l: int, x: complex) -> BesselPair:
    """Spherical Hankel function of the first (outgoing) or second (ingoing) kind.

    Parameters
    ----------
    kind : {'outgoing', 'ingoing'}
        ``'outgoing'`` is ``h_l^(1)``, ``'ingoing'`` is ``h_l^(2)``.
    l : int
        Order, ``0 <= l <= LMAX_SUPPORTED``.
    x : complex
        Argument, non-zero.

    Returns
    -------
    BesselPair
        ``(h_l(x), h_l'(x))``.

    Raises
    ------
    DomainError
        For ``x == 0``.
    OverflowError
        If the value is not representable as a double.
    """
    return hankel_scaled(kind, l, x).unscaled()


def dhat(g: BesselPair, x: complex) -> complex:
    """``g'(x) + g(x)/x``, i.e. ``(x g)'/x``."""
    if x == 0:
        raise DomainError("D-hat operator evaluated at x = 0")
    return g.df + g.f / x


# --------------------------------------------------------------------------
# positive imaginary axis, x = i t
# --------------------------------------------------------------------------

def modified_sequences(t, lmax: int):
    """Real building blocks of the Hankel functions at ``x = i t``, ``t > 0``.

    With ``a_l(t) = (2/pi) k_l(t)`` (decaying in ``t``) and ``i_l(t)`` the
    regular modified spherical Bessel function,

    ``h_l^(1)(i t) = -i^(-l) a_l(t)``  and  ``h_l^(2)(i t) = i^l (2 i_l(t) + (-1)^l a_l(t))``.

    Parameters
    ----------
    t : array_like
        Positive reals.
    lmax : int

    Returns
    -------
    r : ndarray, shape (n, lmax + 1)
        ``a_{l-1}/a_l`` (column 0 unused).
    log_a : ndarray, shape (n, lmax + 1)
        ``log a_l``.
    p : ndarray, shape (n, lmax + 1)
        ``i_l/i_{l-1}`` (column 0 unused).
    log_i : ndarray, shape (n, lmax + 1)
        ``log i_l``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~(t > 0)):
        raise DomainError("modified spherical Bessel functions need t > 0")
    n = t.size
    L = max(int(lmax), 1)
    r = np.empty((n, L + 1))
    log_a = np.empty((n, L + 1))
    p = np.empty((n, L + 1))
    log_i = np.empty((n, L + 1))
    r[:, 0] = np.nan
    p[:, 0] = np.nan

    log_a[:, 0] = -t - np.log(t)
    rr = t / (1.0 + t)
    for l in range(1, L + 1):
        if l > 1:
            rr = 1.0 / ((2 * l - 1) / t + rr)
        r[:, l] = rr
        log_a[:, l] = log_a[:, l - 1] - np.log(rr)

    log_i[:, 0] = t + np.log(-np.expm1(-2.0 * t)) - np.log(2.0 * t)
    big = t > _upward_threshold(L)
    if np.any(big):
        tb = t[big]
        # i_l dominated regime: upward on the ratio is accurate here
        pp = 1.0 / np.tanh(tb) - 1.0 / tb
        p[big, 1] = pp
        for l in range(2, L + 1):
            pp = 1.0 / pp - (2 * l - 1) / tb
            p[big, l] = pp
    small = ~big
    if np.any(small):
        ts = t[small]
        n_start = int(math.ceil(math.sqrt(L * L + 40.0 * ts.max()))) + 20
        pp = np.zeros_like(ts)
        ps = np.empty((ts.size, L + 1))
        for k in range(n_start, 0, -1):
            pp = 1.0 / ((2 * k + 1) / ts + pp)
            if k <= L:
                ps[:, k] = pp
        p[small, 1:] = ps[:, 1:]
    log_i[:, 1:] = log_i[:, :1] + np.cumsum(np.log(p[:, 1:]), axis=1)
    return r, log_a, p, log_i


def _upward_threshold(lmax: int) -> float:
    return max(30.0, 0.25 * lmax * lmax)


def hankel_imag_axis(kind, l: int, xu: float) -> ScaledPair:
    """Scaled ``h_l(i xu)`` and ``h_l'(i xu)`` (derivative with respect to the argument)."""
    kind = _kind(kind)
    _check_order(l)
    xu = float(xu)
    if not xu > 0:
        raise DomainError(f"imaginary-axis argument must be positive, got {xu}")
    L = max(l, 1)
    r, log_a, p, log_i = modified_sequences(np.array([xu]), L)
    r, log_a, p, log_i = r[0], log_a[0], p[0], log_i[0]
    t = xu
    if kind == OUTGOING:
        # h = -i^-l a_l ; dh/dx = -i d/dt h(it) = i^(1-l) a_l'
        off = log_a[l]
        if l == 0:
            da = -(1.0 + 1.0 / t)
        else:
            da = -r[l] - (l + 1) / t
        return ScaledPair(-(1j ** (-l)), (1j ** (1 - l)) * da, float(off))
    # g_l = 2 i_l + (-1)^l a_l, value i^l g_l, derivative -i^(l+1) g_l'
    off = max(log_i[l] + math.log(2.0), log_a[l])
    gi = 2.0 * math.exp(log_i[l] - off)
    ga = (-1) ** l * math.exp(log_a[l] - off)
    g = gi + ga
    if l == 0:
        dg = _dg0(t, gi, ga)
    else:
        gprev = gi / p[l] + (-1) ** (l - 1) * math.exp(log_a[l] - off) * r[l]
        dg = gprev - (l + 1) / t * g
    return ScaledPair((1j ** l) * g, -(1j ** (l + 1)) * dg, float(off))


def _dg0(t: float, gi: float, ga: float) -> float:
    # i_0' = i_1 = i_0 (coth t - 1/t), a_0' = -a_0 (1 + 1/t)
    coth = 1.0 / math.tanh(t)
    return gi * (coth - 1.0 / t) - ga * (1.0 + 1.0 / t)
