"""Seeded Monte Carlo estimation of the SwH success probability.

Determinism contract: trials are split into fixed-size replicas of
``REPLICA_TRIALS`` (the last one takes the remainder), and replica i
draws from PCG64 seeded with SeedSequence(seed, spawn_key=(i,)).  The
partition is a function of the trial count alone, results are reduced
by integer addition, and both backends consume the bit stream
identically, so a given (seed, trials, config) produces bit-identical
output regardless of worker count or backend.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _mc_fallback
from .core import ProblemConfig
from .exact import optimal_cutoff

try:
    from . import _mc_kernel
except ImportError:
    _mc_kernel = None

REPLICA_TRIALS = 1 << 15

WORKERS_ENV = "SWH_WORKERS"
BACKEND_ENV = "SWH_BACKEND"


def compiled_available() -> bool:
    return _mc_kernel is not None


def active_backend() -> str:
    """Backend actually in use: 'compiled' unless missing or overridden.

    Set SWH_BACKEND=python (or =compiled) to force a choice.
    """
    requested = os.environ.get(BACKEND_ENV, "auto").lower()
    if requested in ("auto", ""):
        return "compiled" if compiled_available() else "python"
    if requested == "compiled":
        if not compiled_available():
            raise RuntimeError("SWH_BACKEND=compiled but the extension is not built")
        return "compiled"
    if requested == "python":
        return "python"
    raise ValueError(f"unrecognized {BACKEND_ENV}={requested!r} (use auto, compiled or python)")


def _backend_module(name: str):
    return _mc_kernel if name == "compiled" else _mc_fallback


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    if raw:
        workers = int(raw)
        if workers < 1:
            raise ValueError(f"{WORKERS_ENV} must be at least 1, got {workers}")
        return workers
    return 1


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo mean with its binomial standard error."""

    mean: float
    std_error: float
    trials: int
    seed: int
    config: ProblemConfig
    successes: int

    def wilson_interval(self, z: float = 1.96) -> tuple[float, float]:
        """Score interval; preferable to mean +- z*se for extreme means."""
        n = self.trials
        center = (self.successes + z * z / 2.0) / (n + z * z)
        half = (
            z
            * math.sqrt(self.successes * (n - self.successes) / n + z * z / 4.0)
            / (n + z * z)
        )
        return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class JHistogram:
    """Empirical distribution of the threshold-beater count J."""

    counts: dict[int, int]
    trials: int
    seed: int
    config: ProblemConfig

    def frequency(self, j: int) -> float:
        return self.counts.get(j, 0) / self.trials


def _partition(trials: int) -> list[int]:
    sizes = [REPLICA_TRIALS] * (trials // REPLICA_TRIALS)
    if trials % REPLICA_TRIALS:
        sizes.append(trials % REPLICA_TRIALS)
    return sizes


def _replica_bitgen(seed: int, index: int) -> np.random.PCG64:
    return np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _run_swh_replica(task):
    backend, seed, index, size, n_total, k, b_cutoff = task
    module = _backend_module(backend)
    successes, j_counts = module.run_replica_swh(
        _replica_bitgen(seed, index), n_total, k, b_cutoff, size
    )
    return successes, j_counts


def _run_cutoff_replica(task):
    backend, seed, index, size, n_total, cutoff = task
    module = _backend_module(backend)
    return module.run_replica_cutoff(_replica_bitgen(seed, index), n_total, cutoff, size)


def _map_replicas(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _validate_trials_seed(trials: int, seed: int):
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")


def simulate_r(
    config: ProblemConfig, trials: int, seed: int, workers: int | None = None
) -> Estimate:
    """Estimate the strategy success probability over random orderings.

    Runs the SwH strategy for K >= 2; for K = 1 it runs the optimal
    secretary cutoff rule on the whole sequence.
    """
    _validate_trials_seed(trials, seed)
    workers = default_workers() if workers is None else workers
    backend = active_backend()

    sizes = _partition(trials)
    if config.k == 1:
        t_star = optimal_cutoff(config.n_total).t_star
        tasks = [
            (backend, seed, i, size, config.n_total, t_star) for i, size in enumerate(sizes)
        ]
        successes = sum(_map_replicas(_run_cutoff_replica, tasks, workers))
    else:
        tasks = [
            (backend, seed, i, size, config.n_total, config.k, config.b_cutoff)
            for i, size in enumerate(sizes)
        ]
        successes = sum(s for s, _ in _map_replicas(_run_swh_replica, tasks, workers))

    mean = successes / trials
    return Estimate(
        mean=mean,
        std_error=math.sqrt(mean * (1.0 - mean) / trials),
        trials=trials,
        seed=seed,
        config=config,
        successes=successes,
    )


def empirical_j(
    config: ProblemConfig, trials: int, seed: int, workers: int | None = None
) -> JHistogram:
    """Histogram of the threshold-beater count J over random orderings."""
    if config.k < 2:
        raise ValueError("J is defined only for k >= 2 (there is no history threshold at k=1)")
    _validate_trials_seed(trials, seed)
    workers = default_workers() if workers is None else workers
    backend = active_backend()

    sizes = _partition(trials)
    tasks = [
        (backend, seed, i, size, config.n_total, config.k, config.b_cutoff)
        for i, size in enumerate(sizes)
    ]
    totals = np.zeros(config.l_selection + 1, dtype=np.int64)
    for _, j_counts in _map_replicas(_run_swh_replica, tasks, workers):
        totals += j_counts
    counts = {j: int(c) for j, c in enumerate(totals) if c}
    return JHistogram(counts=counts, trials=trials, seed=seed, config=config)


def bernstein_tail_bound(n_total: int, k: int, t: int) -> float:
    """Upper bound on P[J >= t] from Bernstein's inequality for
    sampling without replacement.

    J >= t exactly when at least t of the t+K-1 top ranks land in the
    selection sequence, a mean-(t+K-1)/K count of draws without
    replacement.  With eps = (t - (t+K-1)/K)/L and sigma^2 = (t+K-1)/N
    the bound is exp(-L eps^2 / (2 sigma^2 + (2/3) eps)).  When eps <= 0
    the deviation is not positive and the bound is the vacuous 1.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if n_total % k != 0:
        raise ValueError(f"k must divide n_total ({k} does not divide {n_total})")
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    l_selection = n_total // k
    eps = (t - (t + k - 1) / k) / l_selection
    if eps <= 0:
        return 1.0
    sigma_sq = (t + k - 1) / n_total
    bound = math.exp(-l_selection * eps * eps / (2.0 * sigma_sq + (2.0 / 3.0) * eps))
    return min(1.0, bound)
