"""Selecting-with-history (SwH) stopping strategy toolkit.

The SwH problem hands the player a passively observed history, the
first N(1-1/K) of N randomly ordered numbers, then asks for the
maximum of the remaining selection sequence of L = N/K numbers under
secretary rules (immediate, irrevocable picks).  The strategy studied
here accepts, within the first B = ceil(beta*L) selection items, the
first one beating the K-th largest history value, and afterwards falls
back to the first record of the selection sequence.

Three independent routes to its success probability are provided:
exact rational arithmetic (``exact``), the infinite-series limit
(``asymptotic``) and seeded Monte Carlo (``montecarlo``), plus a CLI
(``swh``) exposing each.
"""

from .asymptotic import (
    SECRETARY_LIMIT,
    BetaOptimum,
    ConvergenceError,
    SeriesValue,
    optimize_beta,
    p_limit,
    q_limit,
    q_value,
    q_zero,
    tail_integral,
    tail_integral_quadrature,
)
from .core import (
    Phase,
    ProblemConfig,
    RankSequence,
    StrategyTrace,
    as_beta,
    kth_largest,
    run_cutoff_strategy,
    run_swh_strategy,
)
from .exact import (
    SecretaryOptimum,
    brute_force_r,
    exact_pj,
    exact_r,
    exact_r_float,
    exact_success_given_j,
    optimal_cutoff,
    secretary_success,
)
from .montecarlo import (
    Estimate,
    JHistogram,
    active_backend,
    bernstein_tail_bound,
    compiled_available,
    empirical_j,
    simulate_r,
)

__version__ = "0.1.0"

__all__ = [
    "SECRETARY_LIMIT",
    "BetaOptimum",
    "ConvergenceError",
    "Estimate",
    "JHistogram",
    "Phase",
    "ProblemConfig",
    "RankSequence",
    "SecretaryOptimum",
    "SeriesValue",
    "StrategyTrace",
    "active_backend",
    "as_beta",
    "bernstein_tail_bound",
    "brute_force_r",
    "compiled_available",
    "empirical_j",
    "exact_pj",
    "exact_r",
    "exact_r_float",
    "exact_success_given_j",
    "kth_largest",
    "optimal_cutoff",
    "optimize_beta",
    "p_limit",
    "q_limit",
    "q_value",
    "q_zero",
    "run_cutoff_strategy",
    "run_swh_strategy",
    "secretary_success",
    "simulate_r",
    "tail_integral",
    "tail_integral_quadrature",
]
