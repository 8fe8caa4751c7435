"""Domain types and executable semantics of the selecting-with-history
(SwH) strategy and the classical cutoff rule.

Everything operates on ranks 1..N where rank 1 is the largest value.
Raw values are converted to ranks on ingestion and ties are rejected,
so strategy outcomes depend only on the rank order of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

BetaLike = Union[Fraction, float, str]


class Phase(str, Enum):
    PHASE1 = "phase1"
    PHASE2 = "phase2"
    NONE = "none"


def as_beta(value: BetaLike) -> Fraction:
    """Coerce a threshold fraction to an exact rational in (0, 1).

    Floats are read through their shortest decimal repr, so ``0.63``
    means exactly 63/100.  This matters because the cutoff B = ceil(beta*L)
    must use the decimal value: with binary floats, 0.63 * 100 rounds up
    to 64 instead of 63.
    """
    if isinstance(value, Fraction):
        beta = value
    elif isinstance(value, float):
        beta = Fraction(str(value))
    elif isinstance(value, str):
        beta = Fraction(value)
    else:
        raise TypeError(f"beta must be a Fraction, float or str, got {type(value).__name__}")
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie strictly between 0 and 1, got {value}")
    return beta


@dataclass(frozen=True)
class ProblemConfig:
    """An SwH instance: N numbers, history of N(1-1/K), selection of L = N/K.

    ``b_cutoff`` is the phase-1 window B = ceil(beta * L).
    """

    n_total: int
    k: int
    beta: Fraction
    l_selection: int = field(init=False)
    b_cutoff: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "beta", as_beta(self.beta))
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if self.n_total < 1:
            raise ValueError(f"n_total must be positive, got {self.n_total}")
        if self.n_total % self.k != 0:
            raise ValueError(f"k must divide n_total ({self.k} does not divide {self.n_total})")
        l_selection = self.n_total // self.k
        if self.k >= 2 and self.n_total - l_selection < self.k:
            raise ValueError(
                f"history of size {self.n_total - l_selection} is too small to define "
                f"the {self.k}-th largest value"
            )
        b_cutoff = math.ceil(self.beta * l_selection)
        object.__setattr__(self, "l_selection", l_selection)
        object.__setattr__(self, "b_cutoff", b_cutoff)

    @property
    def split_point(self) -> int:
        return self.n_total - self.l_selection


@dataclass(frozen=True)
class RankSequence:
    """A permutation of ranks 1..N split into history and selection parts.

    Positions 1..split_point hold the history, the rest the selection
    sequence.  Rank 1 denotes the largest value.
    """

    order: tuple[int, ...]
    split_point: int

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        n = len(self.order)
        if sorted(self.order) != list(range(1, n + 1)):
            raise ValueError("order must be a permutation of 1..N (distinct ranks)")
        if not 0 <= self.split_point < n:
            raise ValueError(f"split_point {self.split_point} out of range for N={n}")

    @classmethod
    def from_values(cls, values: Sequence, split_point: int) -> "RankSequence":
        """Convert raw values to ranks (1 = largest).  Ties are rejected."""
        if len(set(values)) != len(values):
            raise ValueError("values must be distinct, ties have no rank order")
        by_desc = sorted(range(len(values)), key=lambda i: values[i], reverse=True)
        ranks = [0] * len(values)
        for rank0, idx in enumerate(by_desc):
            ranks[idx] = rank0 + 1
        return cls(order=tuple(ranks), split_point=split_point)

    @property
    def history(self) -> tuple[int, ...]:
        return self.order[: self.split_point]

    @property
    def selection(self) -> tuple[int, ...]:
        return self.order[self.split_point :]


@dataclass(frozen=True)
class StrategyTrace:
    """Full record of one strategy run.

    ``selected_position`` is 1-based within the selection sequence.
    ``theta_prime_rank`` is None when phase 2 was never evaluated.
    ``j_count`` is the number of selection items beating the history
    threshold (0 for the plain cutoff rule, which has no history).
    """

    theta_rank: int | None
    theta_prime_rank: int | None
    j_count: int
    selected_position: int | None
    phase: Phase
    success: bool


def kth_largest(values: Sequence, k: int):
    """Return the k-th largest element of ``values``."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > len(values):
        raise ValueError(f"k={k} exceeds the {len(values)} available values")
    return sorted(values, reverse=True)[k - 1]


def run_swh_strategy(config: ProblemConfig, seq: RankSequence) -> StrategyTrace:
    """Execute the two-phase SwH strategy on one rank sequence.

    Phase 1 scans the first B selection items and takes the first one
    beating theta, the K-th largest history value.  If none appears,
    phase 2 takes the first record of the selection sequence after
    position B (the first item beating theta', the max of the first B).
    Success means the selected item is the selection-sequence maximum.
    """
    if config.k < 2:
        raise ValueError("the SwH strategy needs k >= 2 (use run_cutoff_strategy for k=1)")
    if len(seq.order) != config.n_total:
        raise ValueError(
            f"sequence length {len(seq.order)} does not match n_total={config.n_total}"
        )
    if seq.split_point != config.split_point:
        raise ValueError(
            f"split_point {seq.split_point} does not match config ({config.split_point})"
        )

    history = seq.history
    selection = seq.selection
    b = config.b_cutoff

    # rank semantics invert comparisons: smaller rank number = larger value
    theta = sorted(history)[config.k - 1]
    j_count = sum(1 for r in selection if r < theta)
    max_position = selection.index(min(selection)) + 1

    for pos0 in range(b):
        if selection[pos0] < theta:
            return StrategyTrace(
                theta_rank=theta,
                theta_prime_rank=None,
                j_count=j_count,
                selected_position=pos0 + 1,
                phase=Phase.PHASE1,
                success=pos0 + 1 == max_position,
            )

    theta_prime = min(selection[:b])
    for pos0 in range(b, config.l_selection):
        if selection[pos0] < theta_prime:
            # first record after B; theta_prime is the running max until then
            return StrategyTrace(
                theta_rank=theta,
                theta_prime_rank=theta_prime,
                j_count=j_count,
                selected_position=pos0 + 1,
                phase=Phase.PHASE2,
                success=pos0 + 1 == max_position,
            )

    return StrategyTrace(
        theta_rank=theta,
        theta_prime_rank=theta_prime,
        j_count=j_count,
        selected_position=None,
        phase=Phase.NONE,
        success=False,
    )


def run_cutoff_strategy(sequence: Sequence, cutoff: int) -> StrategyTrace:
    """Run the classical cutoff rule: observe the first ``cutoff`` values,
    then select the first later value exceeding all of them.

    With cutoff 0 the first value is always selected.  The returned
    trace uses the phase-2 fields (the cutoff window plays the role of
    the first-B window), with positions 1-based in the full sequence.
    """
    if not 0 <= cutoff < len(sequence):
        raise ValueError(f"cutoff must satisfy 0 <= cutoff < {len(sequence)}, got {cutoff}")
    ranks = RankSequence.from_values(sequence, split_point=0).order

    max_position = ranks.index(1) + 1
    window_best = min(ranks[:cutoff]) if cutoff > 0 else None

    running = window_best if window_best is not None else len(ranks) + 1
    for pos0 in range(cutoff, len(ranks)):
        if ranks[pos0] < running:
            return StrategyTrace(
                theta_rank=None,
                theta_prime_rank=window_best,
                j_count=0,
                selected_position=pos0 + 1,
                phase=Phase.PHASE2,
                success=pos0 + 1 == max_position,
            )

    return StrategyTrace(
        theta_rank=None,
        theta_prime_rank=window_best,
        j_count=0,
        selected_position=None,
        phase=Phase.NONE,
        success=False,
    )
