"""Compare the compiled convolution kernel against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 64,256,1024] [--reps 50]
"""

import argparse
import time

import numpy as np

from kisinlab._kernels import _pure
from kisinlab.series import _red_rows_array
from kisinlab import gf

try:
    from kisinlab import _speedups
except ImportError:
    _speedups = None


def bench(fn, a, b, nout, p, red, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(a, b, nout, p, red)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="64,256,1024")
    parser.add_argument("--reps", type=int, default=50)
    parser.add_argument("--p", type=int, default=13)
    parser.add_argument("--m", type=int, default=2)
    args = parser.parse_args()

    field = gf(args.p, args.m)
    red = _red_rows_array(field)
    rng = np.random.default_rng(0)
    print(f"field F_{field.order}, reps={args.reps} (best-of)")
    print(f"{'N':>6}  {'pure (ms)':>10}  {'compiled (ms)':>13}  {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        a = rng.integers(0, field.p, size=(n, field.m)).astype(np.int64)
        b = rng.integers(0, field.p, size=(n, field.m)).astype(np.int64)
        t_pure = bench(_pure.series_mul, a, b, n, field.p, red, args.reps)
        if _speedups is None:
            print(f"{n:>6}  {t_pure * 1e3:>10.3f}  {'(not built)':>13}  {'-':>8}")
            continue
        t_fast = bench(_speedups.series_mul, a, b, n, field.p, red, args.reps)
        got = np.asarray(_speedups.series_mul(a, b, n, field.p, red))
        want = _pure.series_mul(a, b, n, field.p, red)
        assert np.array_equal(got, want), "backends disagree"
        print(f"{n:>6}  {t_pure * 1e3:>10.3f}  {t_fast * 1e3:>13.3f}  "
              f"{t_pure / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
