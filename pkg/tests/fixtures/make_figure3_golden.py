"""Regenerate figure3_golden.csv with mpmath at 50 digits.

The reference builds 1 - s_b^TM(iu) directly from mpmath's modified Bessel
functions, sharing no code with the package.  Run from the repository root::

    python3 tests/fixtures/make_figure3_golden.py
"""
from pathlib import Path

import mpmath as mp
import numpy as np

mp.mp.dps = 50

OMEGA_P = mp.mpf(1)
OMEGA_0 = mp.mpf(1)
GAMMA = mp.mpf("0.01")
R = mp.mpf(1)
L_MAX = 8
U_GRID = np.logspace(-3.0, np.log10(30.0), 61)


def eps_imag(u):
    return 1 + OMEGA_P ** 2 / (OMEGA_0 ** 2 + u ** 2 + GAMMA * u)


def i_l(l, t):
    return mp.sqrt(mp.pi / (2 * t)) * mp.besseli(l + mp.mpf(1) / 2, t)


def a_l(l, t):
    # (2/pi) k_l(t)
    return mp.sqrt(mp.pi / (2 * t)) * mp.besselk(l + mp.mpf(1) / 2, t) * 2 / mp.pi


def one_minus_sb_tm(l, u):
    n = mp.sqrt(eps_imag(u))
    tv, tm = u * R, u * R * n
    rho = (-a_l(l - 1, tm) - l * a_l(l, tm) / tm) / a_l(l, tm)
    beta = rho / n
    g = lambda m: 2 * i_l(m, tv) + (-1) ** m * a_l(m, tv)
    den = g(l - 1) - g(l) * (l / tv + beta)
    num = i_l(l - 1, tv) - i_l(l, tv) * (l / tv + beta)
    return 2 * num / den


def main():
    out = Path(__file__).with_name("figure3_golden.csv")
    lines = ["l,u[omega_ref],u_l[dimensionless]"]
    for l in range(1, L_MAX + 1):
        for u in U_GRID:
            v = mp.log(abs(one_minus_sb_tm(l, mp.mpf(float(u))))) / (2 * mp.pi)
            lines.append("%d,%.17g,%.17g" % (l, u, float(v)))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
