# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernel.

Each replica shuffles ranks 1..N in place with Fisher-Yates, drawing
bounded integers from the caller's bit generator with the same masked
rejection scheme numpy's Generator.shuffle uses.  Given the same
PCG64 state, this module and the numpy fallback therefore see
bit-identical permutations, so results never depend on the backend.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.stdint cimport int32_t, int64_t, uint32_t, uint64_t
from libc.string cimport memcpy
from numpy.random cimport bitgen_t


cdef inline uint64_t bounded_draw(bitgen_t *state, uint64_t bound) noexcept nogil:
    # masked rejection; draw order matches numpy's shuffle exactly
    cdef uint64_t mask, value
    if bound == 0:
        return 0
    mask = bound
    mask |= mask >> 1
    mask |= mask >> 2
    mask |= mask >> 4
    mask |= mask >> 8
    mask |= mask >> 16
    mask |= mask >> 32
    if bound <= <uint64_t>0xFFFFFFFFUL:
        while True:
            value = state.next_uint32(state.state) & mask
            if value <= bound:
                return value
    else:
        while True:
            value = state.next_uint64(state.state) & mask
            if value <= bound:
                return value


cdef bitgen_t *extract_bitgen(bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("expected a numpy BitGenerator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


cdef inline void fisher_yates(bitgen_t *state, int32_t *perm, const int32_t *identity,
                              Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef int32_t tmp
    memcpy(perm, identity, n * sizeof(int32_t))
    for i in range(n - 1, 0, -1):
        j = <Py_ssize_t>bounded_draw(state, <uint64_t>i)
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp


def run_replica_swh(bit_generator, Py_ssize_t n_total, Py_ssize_t k,
                    Py_ssize_t b_cutoff, Py_ssize_t trials):
    """Run `trials` strategy executions, returning (successes, j_counts)."""
    cdef bitgen_t *state = extract_bitgen(bit_generator)
    cdef Py_ssize_t l_selection = n_total // k
    cdef Py_ssize_t split = n_total - l_selection

    identity_arr = np.arange(1, n_total + 1, dtype=np.int32)
    perm_arr = np.empty(n_total, dtype=np.int32)
    j_counts_arr = np.zeros(l_selection + 1, dtype=np.int64)
    kbest_arr = np.empty(k, dtype=np.int32)

    cdef const int32_t[::1] identity = identity_arr
    cdef int32_t[::1] perm = perm_arr
    cdef int64_t[::1] j_counts = j_counts_arr
    cdef int32_t[::1] kbest = kbest_arr

    cdef int64_t successes = 0
    cdef Py_ssize_t t, i, p, slot, max_pos, selected
    cdef int32_t theta, cur, best, value
    cdef int32_t sentinel = <int32_t>(n_total + 1)

    with bit_generator.lock, nogil:
        for t in range(trials):
            fisher_yates(state, &perm[0], &identity[0], n_total)

            # theta = k-th largest history value = k-th smallest rank there
            for i in range(k):
                kbest[i] = sentinel
            for i in range(split):
                value = perm[i]
                if value < kbest[k - 1]:
                    slot = k - 1
                    while slot > 0 and kbest[slot - 1] > value:
                        kbest[slot] = kbest[slot - 1]
                        slot -= 1
                    kbest[slot] = value
            theta = kbest[k - 1]
            # ranks 1..theta-1 hold k-1 history items, the rest are beaters
            j_counts[theta - k] += 1

            best = sentinel
            max_pos = -1
            for p in range(l_selection):
                if perm[split + p] < best:
                    best = perm[split + p]
                    max_pos = p

            selected = -1
            for p in range(b_cutoff):
                if perm[split + p] < theta:
                    selected = p
                    break
            if selected < 0:
                cur = sentinel
                for p in range(b_cutoff):
                    if perm[split + p] < cur:
                        cur = perm[split + p]
                for p in range(b_cutoff, l_selection):
                    if perm[split + p] < cur:
                        selected = p
                        break
            if selected == max_pos:
                successes += 1

    return int(successes), j_counts_arr


def run_replica_cutoff(bit_generator, Py_ssize_t n_total, Py_ssize_t cutoff,
                       Py_ssize_t trials):
    """Cutoff rule on a full random sequence; returns the success count."""
    cdef bitgen_t *state = extract_bitgen(bit_generator)

    identity_arr = np.arange(1, n_total + 1, dtype=np.int32)
    perm_arr = np.empty(n_total, dtype=np.int32)
    cdef const int32_t[::1] identity = identity_arr
    cdef int32_t[::1] perm = perm_arr

    cdef int64_t successes = 0
    cdef Py_ssize_t t, p, max_pos, selected
    cdef int32_t cur, best
    cdef int32_t sentinel = <int32_t>(n_total + 1)

    with bit_generator.lock, nogil:
        for t in range(trials):
            fisher_yates(state, &perm[0], &identity[0], n_total)

            best = sentinel
            max_pos = -1
            for p in range(n_total):
                if perm[p] < best:
                    best = perm[p]
                    max_pos = p

            cur = sentinel
            for p in range(cutoff):
                if perm[p] < cur:
                    cur = perm[p]
            selected = -1
            for p in range(cutoff, n_total):
                if perm[p] < cur:
                    selected = p
                    break
            if selected == max_pos:
                successes += 1

    return int(successes)
