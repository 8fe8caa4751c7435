"""Exact finite-size success probabilities in rational arithmetic.

Covers the classical secretary optimum, the closed-form pieces of the
SwH success probability R(N, K), a float fast path for large N, and an
exhaustive enumeration oracle for small N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .core import BetaLike, ProblemConfig, RankSequence, as_beta, run_swh_strategy

# enumeration cost is C(N, N-L) * (N/K)! cases; 12 keeps the oracle under a minute
BRUTE_FORCE_MAX_N = 12


@dataclass(frozen=True)
class SecretaryOptimum:
    n: int
    t_star: int
    p_success: Fraction


def _pairwise_sum(terms: list[Fraction]) -> Fraction:
    """Sum by repeated pairing.

    Keeps the big-integer operands balanced, which is dramatically
    faster than left-to-right accumulation when thousands of fractions
    with unrelated denominators are involved.
    """
    if not terms:
        return Fraction(0)
    while len(terms) > 1:
        paired = [terms[i] + terms[i + 1] for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            paired.append(terms[-1])
        terms = paired
    return terms[0]


def _harmonic_range(lo: int, hi: int) -> Fraction:
    """Sum of 1/m for lo <= m < hi."""
    return _pairwise_sum([Fraction(1, m) for m in range(lo, hi)])


def secretary_success(n: int, t: int) -> Fraction:
    """Success probability of the cutoff rule with window t on n items.

    Equals (t/n) * sum_{i=t+1}^{n} 1/(i-1) for t >= 1, and 1/n for t = 0
    (an empty window means the first item is always selected).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= t < n:
        raise ValueError(f"cutoff t must satisfy 0 <= t < n, got t={t}, n={n}")
    if t == 0:
        return Fraction(1, n)
    return Fraction(t, n) * _harmonic_range(t, n)


def optimal_cutoff(n: int) -> SecretaryOptimum:
    """Best cutoff for the classical secretary problem on n items.

    The success probability is unimodal in t: it rises while the
    harmonic tail S(t+1) = sum_{m=t+1}^{n-1} 1/m exceeds 1 and falls
    once it drops below.  t* is therefore the smallest t with
    S(t+1) <= 1, which also realizes the tie-break toward smaller t.
    A float scan locates the crossing; candidates too close to call in
    doubles are confirmed in exact arithmetic.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n == 1:
        return SecretaryOptimum(n=1, t_star=0, p_success=Fraction(1))

    tails = [0.0] * (n + 1)  # tails[t] = sum_{m=t}^{n-1} 1/m, float
    for m in range(n - 1, 0, -1):
        tails[m] = tails[m + 1] + 1.0 / m

    t_star = n - 1
    for t in range(0, n):
        approx = tails[t + 1]
        if abs(approx - 1.0) < 1e-9:
            if _harmonic_range(t + 1, n) <= 1:
                t_star = t
                break
        elif approx <= 1.0:
            t_star = t
            break
    return SecretaryOptimum(n=n, t_star=t_star, p_success=secretary_success(n, t_star))


def _validate_swh_shape(n_total: int, k: int):
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if n_total % k != 0:
        raise ValueError(f"k must divide n_total ({k} does not divide {n_total})")
    l_selection = n_total // k
    if n_total - l_selection < k:
        raise ValueError(f"history of size {n_total - l_selection} cannot define a k={k} threshold")
    return l_selection


def exact_pj(n_total: int, k: int, j: int) -> Fraction:
    """Probability that exactly j selection items beat the history threshold.

    Closed form: C(j+K-1, K-1) * prod_{l<K} (N-L-l)/(N-l) * prod_{l<j} (L-l)/(N-K-l).
    Zero for j > L (there are only L selection items).
    """
    l_selection = _validate_swh_shape(n_total, k)
    if j < 0:
        raise ValueError(f"j must be nonnegative, got {j}")
    if j > l_selection:
        return Fraction(0)
    value = Fraction(math.comb(j + k - 1, k - 1))
    for l in range(k):
        value *= Fraction(n_total - l_selection - l, n_total - l)
    for l in range(j):
        value *= Fraction(l_selection - l, n_total - k - l)
    return value


def exact_success_given_j(l_selection: int, b_cutoff: int, j: int) -> Fraction:
    """Success probability of the strategy given j items beat the threshold.

    For j = 0 nothing passes phase 1 and the run reduces to the cutoff
    rule with window B on L items.  For j >= 1 the selection maximum at
    position r is caught either in phase 1 (r <= B) or in phase 2,
    where the extra factor B/(r-1) demands that the best of the first
    r-1 items fall inside the window:

        (1/L) * sum_{r=1}^{L-j+1} (B/(r-1))^[r>B] * prod_{l=0}^{j-2} (1 - (r-1)/(L-1-l))

    The sum stops at r = L-j+1 since beyond it the remaining j-1
    competitors cannot all sit after position r.
    """
    if not 1 <= b_cutoff <= l_selection:
        raise ValueError(f"need 1 <= B <= L, got B={b_cutoff}, L={l_selection}")
    if not 0 <= j <= l_selection:
        raise ValueError(f"j must satisfy 0 <= j <= L, got j={j}, L={l_selection}")

    if j == 0:
        # sum_{i=B+1}^{L} 1/(i-1) == sum_{m=B}^{L-1} 1/m; empty when B = L
        return Fraction(b_cutoff, l_selection) * _harmonic_range(b_cutoff, l_selection)

    terms = []
    competitors_after = Fraction(1)  # prod_{l=0}^{j-2} (L-r-l)/(L-1-l), starts at r=1
    for r in range(1, l_selection - j + 2):
        term = competitors_after
        if r > b_cutoff:
            term *= Fraction(b_cutoff, r - 1)
        terms.append(term)
        if r <= l_selection - j:
            competitors_after *= Fraction(l_selection - r - j + 1, l_selection - r)
    return _pairwise_sum(terms) / l_selection


def exact_r(n_total: int, k: int, beta: BetaLike) -> Fraction:
    """Exact success probability R(N, K) of the SwH strategy.

    K = 1 is the plain secretary problem: the optimal cutoff is used
    and beta is ignored.  For K >= 2 the answer is the full mixture
    sum_j P[J=j] * P[success | J=j] in rational arithmetic.
    """
    if k == 1:
        return optimal_cutoff(n_total).p_success
    config = ProblemConfig(n_total=n_total, k=k, beta=as_beta(beta))
    return _pairwise_sum(
        [
            exact_pj(n_total, k, j) * exact_success_given_j(config.l_selection, config.b_cutoff, j)
            for j in range(config.l_selection + 1)
        ]
    )


def exact_r_float(n_total: int, k: int, beta: BetaLike, mass_cutoff: float = 1e-15) -> float:
    """Float fast path for R(N, K), for sizes where rationals get large.

    Both factors of each mixture term are built by ratio recurrences
    whose factors lie in (0, 1], so nothing can overflow.  The j sum is
    truncated once the residual weight drops below ``mass_cutoff``
    (each conditional success term is at most 1, so the truncation
    error is bounded by the residual weight).
    """
    if k == 1:
        return float(optimal_cutoff(n_total).p_success)
    config = ProblemConfig(n_total=n_total, k=k, beta=as_beta(beta))
    n, l, b = n_total, config.l_selection, config.b_cutoff

    success_j0 = (b / l) * math.fsum(1.0 / m for m in range(b, l))

    weight = 1.0  # P[J=j], via C(j+K-1,K-1) ratio and the product recurrence
    for i in range(k):
        weight *= (n - l - i) / (n - i)
    total = weight * success_j0
    mass = weight

    j = 1
    while j <= l and mass < 1.0 - mass_cutoff:
        weight *= ((j + k - 1) / j) * ((l - j + 1) / (n - k - j + 1))
        inner = 0.0
        competitors_after = 1.0
        for r in range(1, l - j + 2):
            inner += competitors_after * (b / (r - 1) if r > b else 1.0)
            if r <= l - j:
                competitors_after *= (l - r - j + 1) / (l - r)
        total += weight * (inner / l)
        mass += weight
        j += 1
    return total


def brute_force_r(n_total: int, k: int, beta: BetaLike) -> Fraction:
    """Success probability by exhausting every equally likely configuration.

    Enumerates all C(N, N-L) history sets crossed with all L! selection
    orders and runs the strategy on each, so it is independent of the
    closed-form route through exact_pj / exact_success_given_j.
    """
    if n_total > BRUTE_FORCE_MAX_N:
        raise ValueError(
            f"brute force enumerates C(N,N-L)*L! cases and is capped at N={BRUTE_FORCE_MAX_N}, "
            f"got N={n_total}"
        )
    config = ProblemConfig(n_total=n_total, k=k, beta=as_beta(beta))
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")

    ranks = range(1, n_total + 1)
    successes = 0
    cases = 0
    for history in combinations(ranks, config.split_point):
        in_history = set(history)
        rest = [r for r in ranks if r not in in_history]
        for selection_order in permutations(rest):
            seq = RankSequence(order=history + selection_order, split_point=config.split_point)
            trace = run_swh_strategy(config, seq)
            successes += trace.success
            cases += 1
    return Fraction(successes, cases)
