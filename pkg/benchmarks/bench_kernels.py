#!/usr/bin/env python3
"""Benchmark the compiled ARMA-recursion kernels against the pure fallback.

Sizes mirror the package's real workloads: one long path (closed-form
autocovariance checks), a wide batch of short paths (correlation-matrix
Monte Carlo), and a replication-study batch.

Usage: python benchmarks/bench_kernels.py [repeats]
"""

from __future__ import annotations

import sys
import time

import numpy as np

from itsa._kernels import _pykernels

try:
    from itsa._kernels import _ckernels
except ImportError:
    _ckernels = None

PHI, THETA = 0.6, 0.25

CASES = [
    ("single path, 1e6 steps", "single", (1_000_000,)),
    ("batch 100k paths x 550 steps", "batch", (100_000, 550)),
    ("batch 1k paths x 539 steps", "batch", (1_000, 539)),
]


def run_case(impl, mode, shape, data):
    if mode == "single":
        return impl.arma_recursion(data["innov1"], PHI, THETA, 0.1, -0.2)
    return impl.arma_recursion_batch(
        data["innov2"], PHI, THETA, data["e0"], data["a0"]
    )


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> int:
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    rng = np.random.default_rng(0)
    print(f"{'case':<32} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for label, mode, shape in CASES:
        if mode == "single":
            data = {"innov1": rng.standard_normal(shape[0])}
        else:
            data = {
                "innov2": rng.standard_normal(shape),
                "e0": rng.standard_normal(shape[0]),
                "a0": rng.standard_normal(shape[0]),
            }
        t_py = best_of(lambda: run_case(_pykernels, mode, shape, data), repeats)
        if _ckernels is None:
            print(f"{label:<32} {t_py * 1e3:>10.1f}ms {'n/a':>12} {'n/a':>9}")
            continue
        t_c = best_of(lambda: run_case(_ckernels, mode, shape, data), repeats)
        out_py = np.asarray(run_case(_pykernels, mode, shape, data))
        out_c = np.asarray(run_case(_ckernels, mode, shape, data))
        agree = np.max(np.abs(out_py - out_c))
        print(
            f"{label:<32} {t_py * 1e3:>10.1f}ms {t_c * 1e3:>10.1f}ms "
            f"{t_py / t_c:>8.1f}x   (max |diff| {agree:.1e})"
        )
    if _ckernels is None:
        print("\ncompiled backend not built; showing fallback timings only")
    return 0


if __name__ == "__main__":
    sys.exit(main())
