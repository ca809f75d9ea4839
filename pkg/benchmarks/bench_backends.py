#!/usr/bin/env python3
"""Benchmark the compiled backend against the NumPy fallback.

Times the two hot kernels (rejection sampling and fused prefix strip
maxima) plus one end-to-end CLT replicate, and verifies on the side that
both backends return identical bits for the benchmark inputs.

Usage:
    python benchmarks/bench_backends.py [--n 1000000] [--k 251189] [--loops 3]
"""

import argparse
import time

import numpy as np

from stripfront._backend import available_backends
from stripfront.model import Frontier


def _time(fn, loops):
    best = float("inf")
    for _ in range(loops):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1_000_000, help="points per call")
    ap.add_argument("--k", type=int, default=251_189, help="strip count")
    ap.add_argument("--loops", type=int, default=3, help="timing repetitions")
    args = ap.parse_args()

    backends = available_backends()
    if len(backends) < 2:
        print(f"only {list(backends)} available; nothing to compare")
    frontier = Frontier.cosine(1.0, 0.3)
    code, params, maxh = frontier.backend_args()
    key = 0x5EED
    prefixes = np.array([args.n // 2, args.n], dtype=np.int64)

    results = {}
    timings = {}
    for name, mod in backends.items():
        t_pts = _time(lambda: mod.uniform_points(code, params, maxh, args.n, key),
                      args.loops)
        t_fused = _time(lambda: mod.prefix_strip_maxima(code, params, maxh,
                                                        args.k, prefixes, key),
                        args.loops)
        xs, ys = mod.uniform_points(code, params, maxh, args.n, key)
        t_smax = _time(lambda: mod.strip_maxima_points(xs, ys, args.k),
                       args.loops)
        timings[name] = (t_pts, t_fused, t_smax)
        results[name] = (xs, ys,
                         mod.prefix_strip_maxima(code, params, maxh, args.k,
                                                 prefixes, key))

    header = f"{'backend':<10} {'uniform_points':>15} {'prefix_maxima':>15} {'strip_maxima':>15}"
    print(header)
    print("-" * len(header))
    for name, (t1, t2, t3) in timings.items():
        print(f"{name:<10} {t1 * 1e3:>13.1f}ms {t2 * 1e3:>13.1f}ms {t3 * 1e3:>13.1f}ms")
    if len(timings) == 2:
        tn = timings["numpy"]
        tc = timings["cython"]
        print(f"{'speedup':<10} " +
              " ".join(f"{tn[i] / tc[i]:>14.1f}x" for i in range(3)))
        same = all(np.array_equal(results["numpy"][i], results["cython"][i])
                   for i in range(3))
        print(f"outputs identical across backends: {same}")


if __name__ == "__main__":
    main()
