"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as
they complete.  The Monte Carlo criteria (6 and 8) take a few minutes.
"""

from __future__ import annotations

import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from swh.asymptotic import p_limit, q_value, tail_integral, tail_integral_quadrature
from swh.core import ProblemConfig
from swh.exact import (
    brute_force_r,
    exact_pj,
    exact_r,
    exact_r_float,
    exact_success_given_j,
    optimal_cutoff,
)
from swh.montecarlo import bernstein_tail_bound, empirical_j, simulate_r

GRID_CONFIGS = [(4, 2), (6, 2), (6, 3), (8, 2), (8, 4), (9, 3), (10, 2), (12, 3), (12, 4)]
GRID_BETAS = ["0.1", "0.25", "0.5", "0.63", "0.9"]


def report(number: int, passed: bool, detail: str):
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number:>2}: {status}  {detail}")
    assert passed, f"criterion {number}: {detail}"


class timed:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_1_reference_q_table():
    expected = {2: 0.47, 3: 0.51, 10: 0.55}
    with timed() as clock:
        values = {k: q_value(k, 0.63, 1e-6).value for k in expected}
    ok = all(abs(values[k] - expected[k]) <= 0.005 for k in expected) and clock.elapsed < 1.0
    report(
        1,
        ok,
        f"Q(2/3/10, 0.63) = {values[2]:.4f}/{values[3]:.4f}/{values[10]:.4f} "
        f"vs 0.47/0.51/0.55 +-0.005 in {clock.elapsed:.3f}s",
    )


def test_criterion_2_classical_limit():
    n = 10**4
    with timed() as clock:
        optimum = optimal_cutoff(n)
    p_gap = abs(float(optimum.p_success) - math.exp(-1))
    t_gap = abs(optimum.t_star / n - math.exp(-1))
    ok = p_gap <= 2e-4 and t_gap <= 1e-3 and clock.elapsed < 1.0
    report(
        2,
        ok,
        f"optimal_cutoff(1e4): |p-1/e|={p_gap:.2e} (<=2e-4), "
        f"|t*/n-1/e|={t_gap:.2e} (<=1e-3) in {clock.elapsed:.3f}s",
    )


def test_criterion_3_oracle_equivalence():
    mismatches = []
    with timed() as clock:
        for n, k in GRID_CONFIGS:
            for beta in GRID_BETAS:
                if brute_force_r(n, k, beta) != exact_r(n, k, beta):
                    mismatches.append((n, k, beta))
    ok = not mismatches and clock.elapsed < 60.0
    report(
        3,
        ok,
        f"brute force == closed form on {len(GRID_CONFIGS) * len(GRID_BETAS)} configs "
        f"in {clock.elapsed:.1f}s" + (f"; mismatches {mismatches}" if mismatches else ""),
    )


def test_criterion_4_hand_verified_anchor():
    value = exact_r(4, 2, "0.5")
    pj = [exact_pj(4, 2, j) for j in range(3)]
    given = [exact_success_given_j(2, 1, j) for j in range(3)]
    ok = (
        value == Fraction(2, 3)
        and pj == [Fraction(1, 6), Fraction(2, 6), Fraction(3, 6)]
        and given == [Fraction(1, 2), Fraction(1), Fraction(1, 2)]
    )
    report(4, ok, f"R(4,2,0.5) = {value} with components {pj} and {given}")


def test_criterion_5_finite_to_limit():
    with timed() as clock:
        details = []
        ok = True
        for k in (2, 3):
            limit = q_value(k, 0.63, 1e-9).value
            errors = [
                abs(exact_r_float(k * l, k, "0.63") - limit) for l in (10, 100, 1000, 5000)
            ]
            ok &= errors[-1] <= 0.01
            ok &= all(later <= earlier + 1e-4 for earlier, later in zip(errors, errors[1:]))
            details.append(f"K={k}: " + "->".join(f"{e:.2e}" for e in errors))
    ok &= clock.elapsed < 120.0
    report(5, ok, f"|R(KL,K)-Q(K)| over L=10..5000: {'; '.join(details)} in {clock.elapsed:.1f}s")


def test_criterion_6_monte_carlo_consistency():
    config = ProblemConfig(n_total=200, k=2, beta="0.63")
    reference = float(exact_r(200, 2, "0.63"))
    with timed() as clock:
        misses = 0
        for seed in range(50):
            estimate = simulate_r(config, 1_000_000, seed=seed, workers=2)
            if abs(estimate.mean - reference) > 4 * estimate.std_error:
                misses += 1
    ok = misses <= 2
    report(
        6,
        ok,
        f"simulate_r(200,2,0.63) within 4 sigma of {reference:.6f} for {50 - misses}/50 seeds "
        f"(need >=48) in {clock.elapsed:.0f}s",
    )


def test_criterion_7_probability_mass():
    exact_ok = all(
        sum(exact_pj(n, k, j) for j in range(n // k + 1)) == 1 for n, k in GRID_CONFIGS
    )
    limit_ok = True
    for k in (2, 3, 10):
        mass, j = 0.0, 0
        while mass < 1 - 1e-12 and j < 10_000:
            mass += p_limit(k, j)
            j += 1
        limit_ok &= mass >= 1 - 1e-12
    report(
        7,
        exact_ok and limit_ok,
        "sum_j exact_pj == 1 exactly on the criterion-3 grid; "
        "p_limit partial sums reach 1-1e-12 for K in {2,3,10}",
    )


def test_criterion_8_tail_bound_domination():
    n, k = 2000, 2
    trials = 1_000_000
    with timed() as clock:
        histogram = empirical_j(ProblemConfig(n_total=n, k=k, beta="0.63"), trials, seed=1, workers=2)
        ok = True
        details = []
        for c in (2, 4, 8):
            t = c * k * k
            tail = sum(count for j, count in histogram.counts.items() if j >= t) / trials
            sigma = math.sqrt(max(tail * (1 - tail), 1e-12) / trials)
            bound = bernstein_tail_bound(n, k, t)
            ok &= bound >= tail - 4 * sigma
            details.append(f"t={t}: bound {bound:.3e} >= tail {tail:.3e}")
    report(8, ok, "; ".join(details) + f" in {clock.elapsed:.0f}s")


def test_criterion_9_quadrature_series_crosscheck():
    tol = 1e-10
    worst = 0.0
    for tenths in range(1, 10):
        beta = tenths / 10
        for j in range(1, 21):
            gap = abs(tail_integral(beta, j, tol).value - tail_integral_quadrature(beta, j, tol))
            worst = max(worst, gap)
    report(9, worst <= 10 * tol, f"max series-vs-quadrature gap {worst:.2e} (<= {10 * tol:.0e})")


def test_criterion_10_cli_determinism():
    base = [
        sys.executable, "-m", "swh.cli", "simulate",
        "--n", "20", "--k", "2", "--beta", "0.63",
        "--trials", "200000", "--seed", "42", "--format", "json",
    ]

    def results_block(extra=()):
        proc = subprocess.run(base + list(extra), capture_output=True, text=True, timeout=300)
        assert proc.returncode == 0, proc.stderr
        return json.loads(proc.stdout)["results"]

    first = json.dumps(results_block())
    second = json.dumps(results_block())
    workers_one = results_block(["--workers", "1"])
    workers_two = results_block(["--workers", "2"])
    ok = first == second and workers_one[0]["mean"] == workers_two[0]["mean"]
    report(
        10,
        ok,
        "repeated run byte-identical results; workers 1 vs 2 agree on mean "
        f"({workers_one[0]['mean']})",
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
