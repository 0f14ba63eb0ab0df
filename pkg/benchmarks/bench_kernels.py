#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy/Python fallback.

Workloads mirror the hot paths of a real run: inverse-CDF parent sampling
over realization blocks, batched tree statistics, and pairwise parent-match
counting. Run after `pip install -e .`:

    python benchmarks/bench_kernels.py [--sizes 20,100] [--realizations 100]
"""

import argparse
import time

import numpy as np

from recast._kernels import _pure

try:
    from recast._kernels import _core
except ImportError:
    _core = None


def build_workload(size, realizations, rng):
    rows, offsets = [], [0]
    for i in range(1, size):
        p = rng.random(i)
        p /= p.sum()
        rows.append(np.cumsum(p))
        offsets.append(offsets[-1] + i)
    cdf = np.concatenate(rows)
    offs = np.asarray(offsets, dtype=np.int64)
    u = rng.random((realizations, size - 1))
    parents = _pure.sample_parents(cdf, offs, u)
    flat = np.ascontiguousarray(parents, dtype=np.int32).reshape(-1)
    tree_offs = np.arange(0, (realizations + 1) * (size - 1), size - 1, dtype=np.int64)
    return cdf, offs, u, parents, flat, tree_offs


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="20,100", help="cascade sizes, comma separated")
    parser.add_argument("--realizations", type=int, default=100)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _core is None:
        print("compiled extension not built; showing fallback timings only")
    rng = np.random.default_rng(0)

    header = f"{'workload':<38}{'pure':>12}{'cython':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for size in [int(s) for s in args.sizes.split(",")]:
        cdf, offs, u, parents, flat, tree_offs = build_workload(size, args.realizations, rng)
        workloads = [
            (f"sample_parents n={size} R={args.realizations}",
             lambda impl: impl.sample_parents(cdf, offs, u)),
            (f"tree_stats     n={size} R={args.realizations}",
             lambda impl: impl.tree_stats(flat, tree_offs)),
            (f"pairwise       n={size} R={args.realizations}",
             lambda impl: impl.pairwise_matches(parents)),
        ]
        for name, call in workloads:
            t_pure = timeit(lambda: call(_pure), args.repeats)
            if _core is not None:
                t_core = timeit(lambda: call(_core), args.repeats)
                print(f"{name:<38}{t_pure * 1e3:>10.2f}ms{t_core * 1e3:>10.2f}ms{t_pure / t_core:>9.1f}x")
            else:
                print(f"{name:<38}{t_pure * 1e3:>10.2f}ms{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
