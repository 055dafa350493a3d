#!/usr/bin/env python3
"""Compare the compiled packing kernel against the pure-Python fallback.

Two workloads:

* raw: seeded random packing queries straight into each kernel
  (cacheless, measures the search itself),
* solve: a full lower-game solve with the chosen kernel injected into
  a fresh feasibility oracle (measures end-to-end impact).

Usage: python3 benchmarks/bench_kernels.py [--m 2] [--g 7] [--queries 4000]
"""

import argparse
import random
import sys
import time

from binstretch import _pykernel
from binstretch.core import Config
from binstretch.feasibility import FeasibilityOracle
from binstretch.lower_game import LowerGameSolver

try:
    from binstretch import _speedups
except ImportError:
    _speedups = None


def random_queries(count, seed=20260810):
    """Near-critical queries: total mass kept within m*cap so the search
    has to branch instead of bailing out on the mass shortcut."""
    rng = random.Random(seed)
    queries = []
    for _ in range(count):
        m = rng.randint(2, 4)
        cap = rng.randint(6, 16)
        n = rng.randint(6, 14)
        sizes = sorted((rng.randint(1, cap) for _ in range(n)), reverse=True)
        while sum(sizes) > m * cap and sizes:
            sizes.pop(0)
        queries.append((tuple(sizes), m, cap))
    return queries


def bench_raw(kernel, queries):
    started = time.perf_counter()
    feasible = 0
    for sizes, m, cap in queries:
        if kernel.pack_bins(sizes, m, cap) is not None:
            feasible += 1
    return time.perf_counter() - started, feasible


def bench_solve(kernel, m, g):
    oracle = FeasibilityOracle(kernel=kernel)
    solver = LowerGameSolver(Config(m, g), oracle=oracle)
    started = time.perf_counter()
    score = solver.solve(prune=True)
    return time.perf_counter() - started, score


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--g", type=int, default=7)
    parser.add_argument("--queries", type=int, default=4000)
    args = parser.parse_args(argv)

    backends = [("python", _pykernel)]
    if _speedups is not None:
        backends.append(("cython", _speedups))
    else:
        print("compiled kernel not built; benchmarking the fallback only",
              file=sys.stderr)

    queries = random_queries(args.queries)
    print(f"{'backend':<8} {'raw queries':>14} {'solve lower':>14}  value")
    raw_times = {}
    solve_times = {}
    for name, kernel in backends:
        raw_t, feasible = bench_raw(kernel, queries)
        solve_t, score = bench_solve(kernel, args.m, args.g)
        raw_times[name] = raw_t
        solve_times[name] = solve_t
        print(f"{name:<8} {raw_t:>12.3f} s {solve_t:>12.3f} s  {score} "
              f"({feasible}/{len(queries)} feasible)")
    if len(backends) == 2:
        print(f"speedup: raw x{raw_times['python'] / raw_times['cython']:.1f}, "
              f"solve x{solve_times['python'] / solve_times['cython']:.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
