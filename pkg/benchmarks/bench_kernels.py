"""Time the compiled and numpy implementations of ``wall_terms``.

    python3 benchmarks/bench_kernels.py --n 2000 --lmax 64 --repeat 5
"""
import argparse
import time

import numpy as np

from cavity_casimir import _kernels_py
from cavity_casimir.media import Lorentzian

try:
    from cavity_casimir import _kernels as _compiled
except ImportError:
    _compiled = None


def _inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    t = 10 ** rng.uniform(-4, 3, n)
    chi = Lorentzian(1.0, 1.0, 0.01).chi_imag(t)
    return t, np.sqrt(1 + chi), chi


def _best(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=2000, help="number of imaginary frequencies")
    p.add_argument("--lmax", type=int, default=64)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    t, n, chi = _inputs(args.n)
    print(f"n={args.n} lmax={args.lmax} (best of {args.repeat})")
    for label, pec in (("dielectric", False), ("pec", True)):
        call = (t, None if pec else n, None if pec else chi, args.lmax, pec)
        t_py = _best(_kernels_py.wall_terms, call, args.repeat)
        line = f"{label:>10}  numpy {t_py * 1e3:9.2f} ms"
        if _compiled is not None:
            t_cy = _best(_compiled.wall_terms, call, args.repeat)
            line += f"  cython {t_cy * 1e3:9.2f} ms  speedup {t_py / t_cy:6.1f}x"
        else:
            line += "  cython unavailable"
        print(line)


if __name__ == "__main__":
    main()
