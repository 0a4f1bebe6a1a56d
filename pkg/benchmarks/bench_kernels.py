"""Compare the compiled and numpy displacement kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Reports the time per call
for both backends on representative (alpha, zeta, n_max) points plus the
largest elementwise disagreement, then the wall time of one full t_LB curve
per backend.
"""
import argparse
import math
import os
import subprocess
import sys
import timeit

import numpy as np

from qslbound import _kernels_py

try:
    from qslbound import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

CASES = [
    # (label, alpha, zeta, rows)
    ("weak", 0.08, 0.05, 1),
    ("weak n_max=10", 0.08, 0.05, 11),
    ("intermediate", 0.75, 0.6, 6),
    ("strong", 3.7, 5.2, 6),
    ("strong n_max=10", -3.1, 7.4, 11),
]


def _bench(fn, *args, number):
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=5)) / number


def kernel_table(number: int):
    print(f"{'case':<18}{'rows':>5}{'python us':>12}{'cython us':>12}{'speedup':>9}{'max diff':>11}")
    for label, a, z, rows in CASES:
        c = np.array([1.0 / math.sqrt(math.factorial(n)) for n in range(rows)])
        V = np.stack([c, np.arange(rows) * c], axis=1).astype(complex)
        args = (a, z, rows, V, 200, 1e-14)
        tp = _bench(_kernels_py.displacement_apply, *args, number=number)
        if _kernels_c is None:
            print(f"{label:<18}{rows:>5}{tp * 1e6:>12.1f}{'n/a':>12}")
            continue
        tc = _bench(_kernels_c.displacement_apply, *args, number=number)
        rp = _kernels_py.displacement_apply(*args)
        rc = _kernels_c.displacement_apply(*args)
        diff = max(float(np.abs(x - y).max()) for x, y in zip(rp[:3], rc[:3]))
        print(f"{label:<18}{rows:>5}{tp * 1e6:>12.1f}{tc * 1e6:>12.1f}{tp / tc:>9.1f}{diff:>11.1e}")


def curve_timing(eta: float, n_max: int):
    code = (
        "import time, numpy as np;"
        "from qslbound import qsl_series, ModelParams, BACKEND;"
        "t0 = time.perf_counter();"
        f"qsl_series(np.linspace(0, 20, 401), ModelParams(eta={eta}, n_max={n_max}));"
        "print(BACKEND, round(time.perf_counter() - t0, 2))"
    )
    for pure in ("", "1"):
        env = dict(os.environ, QSLBOUND_PURE=pure)
        out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                             capture_output=True, text=True).stdout.split()
        print(f"curve eta={eta} n_max={n_max}: backend {out[0]:<7} {out[1]} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--number", type=int, default=200)
    ap.add_argument("--no-curve", action="store_true")
    args = ap.parse_args()
    kernel_table(args.number)
    if not args.no_curve:
        curve_timing(5.0, 10)


if __name__ == "__main__":
    main()
