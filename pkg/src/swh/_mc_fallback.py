"""Monte Carlo backend without the compiled extension.

Permutations are drawn one row at a time with ``Generator.shuffle`` (the
same bounded draws the compiled kernel makes, so both backends produce
identical results from identical bit generator states) and the strategy
scan is vectorized over batches of rows.
"""

from __future__ import annotations

import numpy as np

# rows per batch are sized to keep work arrays around this many elements
_BATCH_ELEMENTS = 1 << 22


def _batched_permutations(rng: np.random.Generator, n_total: int, trials: int):
    rows_per_batch = max(1, _BATCH_ELEMENTS // n_total)
    identity = np.arange(1, n_total + 1, dtype=np.int32)
    done = 0
    while done < trials:
        count = min(rows_per_batch, trials - done)
        batch = np.tile(identity, (count, 1))
        for row in batch:
            rng.shuffle(row)
        yield batch
        done += count


def run_replica_swh(bit_generator, n_total: int, k: int, b_cutoff: int, trials: int):
    """Run `trials` strategy executions, returning (successes, j_counts)."""
    rng = np.random.Generator(bit_generator)
    l_selection = n_total // k
    split = n_total - l_selection

    successes = 0
    j_counts = np.zeros(l_selection + 1, dtype=np.int64)
    for batch in _batched_permutations(rng, n_total, trials):
        history = batch[:, :split]
        selection = batch[:, split:]

        theta = np.partition(history, k - 1, axis=1)[:, k - 1]
        j_counts += np.bincount(theta - k, minlength=l_selection + 1)

        max_pos = selection.argmin(axis=1)

        beats_theta = selection[:, :b_cutoff] < theta[:, None]
        phase1_hit = beats_theta.any(axis=1)
        phase1_pos = beats_theta.argmax(axis=1)

        # phase 2 takes the first record after B; a record at p beats the
        # prefix minimum rank over positions < p
        prefix_min = np.minimum.accumulate(selection, axis=1)
        records = selection[:, b_cutoff:] < prefix_min[:, b_cutoff - 1 : -1]
        phase2_hit = records.any(axis=1)
        phase2_pos = b_cutoff + records.argmax(axis=1)

        success = np.where(
            phase1_hit, phase1_pos == max_pos, phase2_hit & (phase2_pos == max_pos)
        )
        successes += int(success.sum())
    return successes, j_counts


def run_replica_cutoff(bit_generator, n_total: int, cutoff: int, trials: int):
    """Cutoff rule on a full random sequence; returns the success count."""
    rng = np.random.Generator(bit_generator)

    successes = 0
    for batch in _batched_permutations(rng, n_total, trials):
        max_pos = batch.argmin(axis=1)
        if cutoff == 0:
            successes += int((max_pos == 0).sum())
            continue
        prefix_min = np.minimum.accumulate(batch, axis=1)
        records = batch[:, cutoff:] < prefix_min[:, cutoff - 1 : -1]
        hit = records.any(axis=1)
        pos = cutoff + records.argmax(axis=1)
        successes += int((hit & (pos == max_pos)).sum())
    return successes
