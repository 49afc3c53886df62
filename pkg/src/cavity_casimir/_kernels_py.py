"""Pure numpy implementation of the imaginary-axis wall kernel.

Same interface as the compiled ``_kernels`` module; selected automatically
when the extension is not built.
"""
import math

import numpy as np

from .specfun import modified_sequences

_LOG2 = math.log(2.0)


def _ratio_r(t, lmax):
    # a_{l-1}/a_l for l = 1..lmax, shape (n, lmax)
    out = np.empty((t.size, lmax))
    r = t / (1.0 + t)
    out[:, 0] = r
    for l in range(2, lmax + 1):
        r = 1.0 / ((2 * l - 1) / t + r)
        out[:, l - 1] = r
    return out


def wall_terms(t, n, chi, lmax, pec):
    """Log-scaled pieces of the wall amplitude on the imaginary axis.

    With ``s_b(iu) = Y / (X + Y)`` for the vacuum argument ``t = u R``, this
    returns ``log|X|, sign X, log|Y|, sign Y``.

    Parameters
    ----------
    t : ndarray
        ``u R``, positive.
    n, chi : ndarray
        ``sqrt(eps(iu))`` and ``eps(iu) - 1``; ignored when ``pec``.
    lmax : int
    pec : bool
        Perfect-mirror closed forms.

    Returns
    -------
    tuple of four ndarrays, shape (len(t), lmax, 2)
        Orders ``l = 1..lmax``; last axis is (TE, TM).
    """
    t = np.ascontiguousarray(t, dtype=float)
    npt = t.size
    r, log_a, p, log_i = modified_sequences(t, lmax)
    r, log_a, p, log_i = r[:, 1:lmax + 1], log_a[:, 1:lmax + 1], p[:, 1:lmax + 1], log_i[:, 1:lmax + 1]
    ls = np.arange(1, lmax + 1, dtype=float)[None, :]
    tt = t[:, None]
    inv_p = 1.0 / p

    num_i = np.empty((npt, lmax, 2))
    num_a = np.empty((npt, lmax, 2))
    if pec:
        num_i[..., 0] = 1.0
        num_a[..., 0] = 1.0
        c = ls / tt
        num_i[..., 1] = inv_p - c
        num_a[..., 1] = -r - c
    else:
        n = np.asarray(n, dtype=float)[:, None]
        chi = np.asarray(chi, dtype=float)[:, None]
        rm = _ratio_r(t * n[:, 0], lmax)
        c = -n * rm
        num_i[..., 0] = inv_p - c
        num_a[..., 0] = -r - c
        c = (ls / tt) * (chi / (1.0 + chi)) - rm / n
        num_i[..., 1] = inv_p - c
        num_a[..., 1] = -r - c

    with np.errstate(divide="ignore"):
        log_x = _LOG2 + log_i[..., None] + np.log(np.abs(num_i))
        log_y = log_a[..., None] + np.log(np.abs(num_a))
    sgn_x = np.sign(num_i)
    parity = np.where(np.arange(1, lmax + 1) % 2 == 0, 1.0, -1.0)[None, :, None]
    sgn_y = parity * np.sign(num_a)
    return log_x, sgn_x, log_y, sgn_y
