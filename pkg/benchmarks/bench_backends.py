#!/usr/bin/env python3
"""Benchmark the compiled Monte Carlo kernel against the numpy fallback.

Both backends must produce identical success counts from identical
seeds (that equality is asserted here on every row), so the only
difference worth measuring is throughput.

Usage: python benchmarks/bench_backends.py [--trials 200000] [--seed 0]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from swh import _mc_fallback
from swh.montecarlo import compiled_available

try:
    from swh import _mc_kernel
except ImportError:
    _mc_kernel = None

CONFIGS = [
    # (n_total, k, beta-as-b_cutoff factory input)
    (40, 2),
    (200, 2),
    (2000, 2),
    (3000, 3),
]


def bench(module, n_total, k, b_cutoff, trials, seed):
    bitgen = np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(0,)))
    start = time.perf_counter()
    successes, _ = module.run_replica_swh(bitgen, n_total, k, b_cutoff, trials)
    return successes, time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'config':>14}  {'python':>10}  {'compiled':>10}  {'speedup':>8}  note")
    for n_total, k in CONFIGS:
        l_selection = n_total // k
        b_cutoff = -(-63 * l_selection // 100)  # ceil(0.63 * L)
        trials = max(1000, args.trials // max(1, n_total // 200))

        py_successes, py_time = bench(_mc_fallback, n_total, k, b_cutoff, trials, args.seed)
        label = f"N={n_total},K={k}"
        py_rate = trials / py_time

        if compiled_available():
            c_successes, c_time = bench(_mc_kernel, n_total, k, b_cutoff, trials, args.seed)
            assert c_successes == py_successes, "backends disagree, this is a bug"
            print(
                f"{label:>14}  {py_rate:>8.0f}/s  {trials / c_time:>8.0f}/s"
                f"  {py_time / c_time:>7.1f}x  {trials} trials, equal counts"
            )
        else:
            print(f"{label:>14}  {py_rate:>8.0f}/s  {'n/a':>10}  {'n/a':>8}  extension not built")


if __name__ == "__main__":
    main()
