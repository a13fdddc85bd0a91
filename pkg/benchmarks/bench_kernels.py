#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--n 20000] [--d 64] [--k 32] [--budget 500]
"""

import argparse
import time

import numpy as np

from coreselect.kernels import _numpy

try:
    from coreselect.kernels import _core
except ImportError:
    _core = None


def timeit(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=20000)
    parser.add_argument("--d", type=int, default=64)
    parser.add_argument("--k", type=int, default=32)
    parser.add_argument("--budget", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    x = rng.normal(size=(args.n, args.d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    centroids = rng.normal(size=(args.k, args.d))

    backends = [("numpy", _numpy)]
    if _core is not None:
        backends.append(("cython", _core))
    else:
        print("compiled extension not built; benchmarking numpy only")

    print(f"n={args.n} d={args.d} k={args.k} budget={args.budget}\n")
    print(f"{'kernel':<22}{'backend':<10}{'best (s)':>10}")

    results = {}
    for name, mod in backends:
        t, (labels, _) = timeit(mod.nearest_centroids, x, centroids)
        print(f"{'nearest_centroids':<22}{name:<10}{t:>10.4f}")
        results[("assign", name)] = labels
    for name, mod in backends:
        t, sel = timeit(mod.greedy_select, x, 0, args.budget)
        print(f"{'greedy_select':<22}{name:<10}{t:>10.4f}")
        results[("greedy", name)] = sel

    if _core is not None:
        same_assign = np.array_equal(results[("assign", "numpy")],
                                     results[("assign", "cython")])
        same_greedy = np.array_equal(results[("greedy", "numpy")],
                                     results[("greedy", "cython")])
        print(f"\nbackends agree: assign={same_assign} greedy={same_greedy}")


if __name__ == "__main__":
    main()
