"""Compare the compiled and numpy resampling kernels.

    python benchmarks/bench_kernels.py [--boot 1000] [--repeat 5]

For each design and scheme, times ``bootstrap_replicates`` with both
backends, checks that they return identical arrays and prints the speed-up.
"""

import argparse
import time

import numpy as np

from labprec import _fallback
from labprec.resampling import Scheme

try:
    from labprec import _kernels
except ImportError:  # extension not built
    _kernels = None

DESIGNS = ((3, 3), (5, 5), (12, 4), (10, 10), (50, 50))


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--boot", type=int, default=1000)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if _kernels is None:
        raise SystemExit("compiled kernels not built; run `pip install -e . --no-build-isolation` first")

    rng = np.random.default_rng(0)
    print(f"{'k':>3} {'n':>3} {'scheme':<10} {'cython ms':>10} {'numpy ms':>10} {'speed-up':>9}  identical")
    for k, n in DESIGNS:
        y = rng.normal(size=(k, n))
        for scheme in Scheme:
            t_c, a = best_of(lambda: _kernels.bootstrap_replicates(y, scheme.code, 7, 0, args.boot), args.repeat)
            t_p, b = best_of(lambda: _fallback.bootstrap_replicates(y, scheme.code, 7, 0, args.boot), args.repeat)
            same = np.array_equal(a, b)
            print(f"{k:>3} {n:>3} {scheme.value:<10} {1e3 * t_c:>10.2f} {1e3 * t_p:>10.2f} {t_p / t_c:>8.1f}x  {same}")


if __name__ == "__main__":
    main()
