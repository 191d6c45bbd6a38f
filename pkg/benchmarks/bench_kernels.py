"""Compare the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Prints the best wall time of each kernel on each backend, the speed-up, and
whether the two outputs are bitwise identical.
"""

import argparse
import time

import numpy as np

from qbarrier._backend import compiled_kernels, python_kernels

CASES = [
    ("laguerre_seq n=2000", "laguerre_seq", (2000, 3.0, 0.7, 1.0)),
    ("laguerre_seq scaled n=2000", "laguerre_seq", (2000, 0.0, -4.2, 0.9)),
    ("laguerre_table 64 x 1000", "laguerre_table", (1000, np.arange(64, dtype=float), 0.25)),
    ("laguerre_table 600 x 10000", "laguerre_table", (10000, np.arange(600, dtype=float), 0.0625)),
    ("log_factorial_dd 1e5", "log_factorial_dd", (100_000,)),
    ("bessel_seq x=50", "bessel_seq", (80, 50.0)),
    ("bessel_seq x=1e4", "bessel_seq", (200, 1.0e4)),
]


def best_time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ns = ap.parse_args(argv)
    ck = compiled_kernels()
    if ck is None:
        print("compiled extension not built; nothing to compare")
        return 1
    print(f"{'kernel':<30}{'cython [s]':>12}{'python [s]':>12}{'speed-up':>10}  bitwise")
    for label, name, args in CASES:
        tc, oc = best_time(getattr(ck, name), args, ns.repeat)
        tp, op = best_time(getattr(python_kernels, name), args, ns.repeat)
        print(f"{label:<30}{tc:>12.4g}{tp:>12.4g}{tp / tc:>10.1f}  {same(oc, op)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
