"""Large-L limits of the SwH success probability.

Evaluates the limiting weight p(j) of the threshold-beater count, the
limiting conditional success q(j), and their mixture Q(K, beta) as a
series with a rigorous truncation bound.  An adaptive Simpson
integrator is kept alongside the series form of the tail integral as an
independent cross-check, and a golden-section optimizer locates the
best beta per K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

# K = 1 is the classical secretary problem; its limiting success probability
# is the constant 1/e rather than a series.
SECRETARY_LIMIT = math.exp(-1)

_MAX_SERIES_TERMS = 200_000


class ConvergenceError(RuntimeError):
    """A series or quadrature failed to reach its tolerance within its cap."""


@dataclass(frozen=True)
class SeriesValue:
    """A numerically evaluated series with an explicit truncation bound."""

    value: float
    terms_used: int
    residual_bound: float
    tolerance: float


@dataclass(frozen=True)
class BetaOptimum:
    k: int
    beta_star: float
    q_star: float
    method_note: str


def p_limit(k: int, j: int) -> float:
    """Limiting probability that j selection items beat the threshold.

    Equals C(j+K-1, K-1) * (1-1/K)^K * K^(-j), the negative binomial
    law.  Built by ratio updates so large j cannot overflow.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if j < 0:
        raise ValueError(f"j must be nonnegative, got {j}")
    value = (1.0 - 1.0 / k) ** k
    for i in range(1, j + 1):
        value *= (i + k - 1) / (i * k)
    return value


def q_zero(beta: float) -> float:
    """Limiting success probability when nothing beats the threshold.

    The run degenerates to the cutoff rule, whose limit is beta*log(1/beta).
    """
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie strictly between 0 and 1, got {beta}")
    return beta * math.log(1.0 / beta)


def tail_integral(beta: float, j: int, tol: float = 1e-12) -> SeriesValue:
    """Integral of (1-x)^(j-1)/x over [beta, 1], without the beta prefactor.

    Substituting u = 1-x expands the integrand geometrically, giving
    sum_{m>=0} (1-beta)^(j+m)/(j+m).  Truncation after M terms leaves a
    residual below (1-beta)^(j+M) / ((j+M)*beta), which is driven under
    ``tol`` before returning.
    """
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie strictly between 0 and 1, got {beta}")
    if j < 1:
        raise ValueError(f"j must be at least 1, got {j}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    u = 1.0 - beta
    power = u**j
    terms = []
    m = 0
    while True:
        terms.append(power / (j + m))
        m += 1
        power *= u
        residual = power / ((j + m) * beta)
        if residual <= tol:
            break
        if m >= _MAX_SERIES_TERMS:
            raise ConvergenceError(
                f"tail integral did not reach tol={tol} within {m} terms "
                f"(beta={beta}, j={j}, residual bound {residual:.3e})"
            )
    return SeriesValue(value=math.fsum(terms), terms_used=m, residual_bound=residual, tolerance=tol)


def q_limit(beta: float, j: int, tol: float = 1e-12) -> float:
    """Limiting success probability given j items beat the threshold.

    j = 0 reduces to q_zero; otherwise
    (1-(1-beta)^j)/j + beta * integral_beta^1 (1-x)^(j-1)/x dx.
    """
    if j == 0:
        return q_zero(beta)
    return (1.0 - (1.0 - beta) ** j) / j + beta * tail_integral(beta, j, tol).value


def q_value(k: int, beta: float, tol: float = 1e-6) -> SeriesValue:
    """The limiting SwH success probability Q(K, beta).

    Sums p(j)*q(j) in ascending j until the accumulated weight reaches
    1 - tol.  Since every q(j) lies in [0, 1], the discarded tail is at
    most the residual weight, which is reported as the bound.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k} (K=1 is the constant 1/e)")
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie strictly between 0 and 1, got {beta}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    inner_tol = min(tol * 1e-3, 1e-12)
    weight = (1.0 - 1.0 / k) ** k
    terms = []
    mass = 0.0
    j = 0
    while mass < 1.0 - tol:
        if j > _MAX_SERIES_TERMS:
            raise ConvergenceError(
                f"Q series did not accumulate weight 1-{tol} within {j} terms (K={k}, beta={beta})"
            )
        terms.append(weight * q_limit(beta, j, inner_tol))
        mass += weight
        j += 1
        weight *= (j + k - 1) / (j * k)
    return SeriesValue(
        value=math.fsum(terms), terms_used=j, residual_bound=max(1.0 - mass, 0.0), tolerance=tol
    )


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10) -> float:
    """Composite Simpson quadrature, doubling intervals until the
    Richardson error estimate falls under tol; the extrapolated value
    is returned."""
    if a == b:
        return 0.0
    n = 4
    fa, fb = f(a), f(b)

    def composite(intervals: int) -> float:
        h = (b - a) / intervals
        odd = sum(f(a + i * h) for i in range(1, intervals, 2))
        even = sum(f(a + i * h) for i in range(2, intervals, 2))
        return h / 3.0 * (fa + fb + 4.0 * odd + 2.0 * even)

    previous = composite(n)
    while True:
        n *= 2
        current = composite(n)
        error_estimate = (current - previous) / 15.0
        if abs(error_estimate) <= tol:
            return current + error_estimate
        if n >= 1 << 22:
            raise ConvergenceError(f"quadrature stalled at {n} intervals (estimate {error_estimate:.3e})")
        previous = current


def tail_integral_quadrature(beta: float, j: int, tol: float = 1e-10) -> float:
    """Cross-check route for tail_integral, by direct quadrature."""
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie strictly between 0 and 1, got {beta}")
    if j < 1:
        raise ValueError(f"j must be at least 1, got {j}")
    return adaptive_simpson(lambda x: (1.0 - x) ** (j - 1) / x, beta, 1.0, tol)


def optimize_beta(k: int, tol: float = 1e-6) -> BetaOptimum:
    """Best beta in [0.01, 0.99] for Q(K, beta).

    Golden-section search assumes unimodality, so a uniform grid at
    step 1e-3 double-checks it; if the grid finds something better by
    more than tol, the grid point wins and the note records both.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    lo, hi = 0.01, 0.99
    series_tol = min(tol * 1e-2, 1e-9)

    def objective(beta: float) -> float:
        return q_value(k, beta, series_tol).value

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = objective(x1), objective(x2)
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = objective(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = objective(x2)
    beta_search = (a + b) / 2.0
    q_search = objective(beta_search)

    steps = round((hi - lo) / 1e-3)
    grid = [lo + i * 1e-3 for i in range(steps + 1)]
    q_grid_best, beta_grid_best = max((objective(g), g) for g in grid)

    note = f"golden-section on [{lo}, {hi}] to width {tol}, checked against 1e-3 grid"
    if q_grid_best > q_search + tol:
        return BetaOptimum(
            k=k,
            beta_star=beta_grid_best,
            q_star=q_grid_best,
            method_note=note + f"; grid won ({q_grid_best:.9f} > {q_search:.9f} at search point)",
        )
    return BetaOptimum(k=k, beta_star=beta_search, q_star=q_search, method_note=note)
