"""numba versions of the pair-counting kernels. Same signatures as ``_numpy``."""

from __future__ import annotations

import numba
import numpy as np
from numba import njit, prange

# skip the TBB probe, which warns on older TBB installs
numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]

NAME = "numba"

# lamp modes
CYCLIC, INTEGER, TABLE = 0, 1, 2


@njit(inline="always")
def _mul(x, y, mode, q, table):
    if mode == CYCLIC:
        return (x + y) % q
    if mode == INTEGER:
        return x + y
    return table[x, y]


@njit(inline="always")
def _inv(x, mode, q, table_inv):
    if mode == CYCLIC:
        return (q - x) % q
    if mode == INTEGER:
        return -x
    return table_inv[x]


@njit(inline="always")
def _commute(la, ka, lb, kb, lo, hi, mode, q, table):
    for i in range(lo, hi + 1):
        if _mul(la[i], lb[i - ka], mode, q, table) != _mul(lb[i], la[i - kb], mode, q, table):
            return False
    return True


@njit(parallel=True, cache=True)
def count_pairs(lamps, shifts, rows, lo, hi, mode, q, table):
    """Ordered commuting pairs among ``rows`` (symmetric halving)."""
    n = rows.shape[0]
    per_row = np.zeros(n, dtype=np.int64)
    for s in prange(n):
        a = rows[s]
        la = lamps[a]
        ka = shifts[a]
        c = 0
        for t in range(s + 1, n):
            b = rows[t]
            if _commute(la, ka, lamps[b], shifts[b], lo, hi, mode, q, table):
                c += 1
        per_row[s] = c
    return n + 2 * per_row.sum()


@njit(parallel=True, cache=True)
def commute_row(lamps, shifts, a, lo, hi, mode, q, table):
    n = lamps.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    la = lamps[a]
    ka = shifts[a]
    for b in prange(n):
        out[b] = _commute(la, ka, lamps[b], shifts[b], lo, hi, mode, q, table)
    return out


@njit(inline="always")
def _row_hash(row, shift, weights, wlo, whi, shift_weight):
    h = shift * shift_weight
    for j in range(wlo, whi + 1):
        h += row[j] * weights[j]
    return h


@njit(cache=True)
def row_hashes(lamps, shifts, weights, wlo, whi, shift_weight):
    n = lamps.shape[0]
    out = np.empty(n, dtype=np.int64)
    for a in range(n):
        out[a] = _row_hash(lamps[a], shifts[a], weights, wlo, whi, shift_weight)
    return out


@njit(parallel=True, cache=True)
def count_solved(lamps, shifts, arows, targets, lo, hi, wlo, whi, mode, q, table, table_inv,
                 weights, shift_weight, sorted_hashes, order):
    """For each non-base row a and each target shift s, solve for the unique
    b with shift s commuting with a, then count it if b is a ball row.

    The commuting condition at position i reads
    f_a(i) f_b(i - k_a) = f_b(i) f_a(i - s), so f_b(i) is fixed by f_b(i - k_a):
    sweep upward when k_a > 0 and downward when k_a < 0.
    """
    n = arows.shape[0]
    width = lamps.shape[1]
    per_row = np.zeros(n, dtype=np.int64)
    for r in prange(n):
        a = arows[r]
        la = lamps[a]
        ka = shifts[a]
        cand = np.zeros(width, dtype=lamps.dtype)
        c = 0
        for ti in range(targets.shape[0]):
            s = targets[ti]
            cand[:] = 0
            if ka > 0:
                for j in range(wlo, whi + 1):
                    v = _mul(la[j], cand[j - ka], mode, q, table)
                    cand[j] = _mul(v, _inv(la[j - s], mode, q, table_inv), mode, q, table)
            else:
                for j in range(whi, wlo - 1, -1):
                    v = _mul(la[j], cand[j - ka], mode, q, table)
                    cand[j] = _mul(v, _inv(la[j - s], mode, q, table_inv), mode, q, table)
            # the sweep only enforced the condition inside the window
            if not _commute(la, ka, cand, s, lo, hi, mode, q, table):
                continue
            h = _row_hash(cand, s, weights, wlo, whi, shift_weight)
            pos = np.searchsorted(sorted_hashes, h)
            while pos < sorted_hashes.shape[0] and sorted_hashes[pos] == h:
                b = order[pos]
                if shifts[b] == s:
                    same = True
                    for j in range(wlo, whi + 1):
                        if lamps[b, j] != cand[j]:
                            same = False
                            break
                    if same:
                        c += 1
                        break
                pos += 1
        per_row[r] = c
    return per_row.sum()


def set_threads(n: int) -> None:
    numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))
