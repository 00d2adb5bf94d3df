"""Pure-numpy fallback kernels. Vectorised over one side of each pair."""

from __future__ import annotations

import numpy as np

NAME = "numpy"

CYCLIC, INTEGER, TABLE = 0, 1, 2


def _mul(x, y, mode, q, table):
    if mode == CYCLIC:
        return (x + y) % q
    if mode == INTEGER:
        return x + y
    return table[x, y]


def _inv(x, mode, q, table_inv):
    if mode == CYCLIC:
        return (q - x) % q
    if mode == INTEGER:
        return -x
    return table_inv[x]


def _commute_many(la, ka, lbs, kbs, lo, hi, mode, q, table):
    """Does row ``la`` (shift ka) commute with each row of ``lbs``?"""
    cols = np.arange(lo, hi + 1)
    lhs = _mul(la[cols][None, :], lbs[:, cols - ka], mode, q, table)
    rhs = _mul(lbs[:, cols], la[cols[None, :] - kbs[:, None]], mode, q, table)
    return (lhs == rhs).all(axis=1)


def _commute_rows(las, kas, lbs, kbs, lo, hi, mode, q, table):
    """Row-wise: does ``las[r]`` commute with ``lbs[r]``?"""
    cols = np.arange(lo, hi + 1)[None, :]
    idx = np.arange(las.shape[0])[:, None]
    lhs = _mul(las[idx, cols], lbs[idx, cols - kas[:, None]], mode, q, table)
    rhs = _mul(lbs[idx, cols], las[idx, cols - kbs[:, None]], mode, q, table)
    return (lhs == rhs).all(axis=1)


def count_pairs(lamps, shifts, rows, lo, hi, mode, q, table):
    sub = lamps[rows]
    ks = shifts[rows]
    n = rows.shape[0]
    total = 0
    for s in range(n - 1):
        total += int(_commute_many(sub[s], ks[s], sub[s + 1:], ks[s + 1:], lo, hi, mode, q, table).sum())
    return n + 2 * total


def commute_row(lamps, shifts, a, lo, hi, mode, q, table):
    return _commute_many(lamps[a], shifts[a], lamps, shifts, lo, hi, mode, q, table)


def row_hashes(lamps, shifts, weights, wlo, whi, shift_weight):
    # arithmetic mod 2**64, matching the wrapping int64 loop in the numba kernel
    u = np.uint64
    h = shifts.astype(u) * u(shift_weight) + lamps[:, wlo:whi + 1].astype(u) @ weights[wlo:whi + 1].astype(u)
    return h.view(np.int64)


def count_solved(lamps, shifts, arows, targets, lo, hi, wlo, whi, mode, q, table, table_inv,
                 weights, shift_weight, sorted_hashes, order, chunk=4096):
    width = lamps.shape[1]
    pairs_a = np.repeat(arows, targets.shape[0])
    pairs_s = np.tile(targets, arows.shape[0])
    unique_hashes = not np.any(np.diff(sorted_hashes) == 0)
    total = 0
    for start in range(0, pairs_a.shape[0], chunk):
        a = pairs_a[start:start + chunk]
        s = pairs_s[start:start + chunk]
        la = lamps[a]
        ka = shifts[a]
        m = a.shape[0]
        cand = np.zeros((m, width), dtype=lamps.dtype)
        idx = np.arange(m)
        for sign, cols in ((1, range(wlo, whi + 1)), (-1, range(whi, wlo - 1, -1))):
            sel = idx[(ka > 0) if sign > 0 else (ka < 0)]
            if sel.size == 0:
                continue
            for j in cols:
                v = _mul(la[sel, j], cand[sel, j - ka[sel]], mode, q, table)
                cand[sel, j] = _mul(v, _inv(la[sel, j - s[sel]], mode, q, table_inv), mode, q, table)
        ok = _commute_rows(la, ka, cand, s, lo, hi, mode, q, table)
        cand, s = cand[ok], s[ok]
        h = row_hashes(cand, s, weights, wlo, whi, shift_weight)
        pos = np.searchsorted(sorted_hashes, h)
        if unique_hashes:
            p = np.minimum(pos, sorted_hashes.shape[0] - 1)
            b = order[p]
            hit = (sorted_hashes[p] == h) & (shifts[b] == s)
            hit &= (lamps[b, wlo:whi + 1] == cand[:, wlo:whi + 1]).all(axis=1)
            total += int(hit.sum())
            continue
        for r in range(h.shape[0]):
            p = pos[r]
            while p < sorted_hashes.shape[0] and sorted_hashes[p] == h[r]:
                b = order[p]
                if shifts[b] == s[r] and np.array_equal(lamps[b, wlo:whi + 1], cand[r, wlo:whi + 1]):
                    total += 1
                    break
                p += 1
    return total


def set_threads(n: int) -> None:
    pass
