"""Loop kernels compiled with numba; same contracts as ``_numpy``."""

import numpy as np
from numba import njit

_opts = dict(cache=True, nogil=True)


@njit(**_opts)
def _parity(x):
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return np.uint8(x & np.uint64(1))


@njit(**_opts)
def parity64(x):
    out = np.empty(x.size, dtype=np.uint8)
    flat = x.ravel()
    for i in range(flat.size):
        out[i] = _parity(flat[i])
    return out.reshape(x.shape)


@njit(**_opts)
def row_parity(rows, v):
    m, w = rows.shape
    out = np.zeros(m, dtype=np.uint8)
    for i in range(m):
        acc = np.uint64(0)
        for j in range(w):
            acc ^= rows[i, j] & v[j]
        out[i] = _parity(acc)
    return out


@njit(**_opts)
def _bit(row, col):
    return (row[col >> 6] >> np.uint64(col & 63)) & np.uint64(1)


@njit(**_opts)
def _echelon(R, ncols, full):
    m, w = R.shape
    pivots = np.empty(min(m, ncols), dtype=np.int64)
    r = 0
    for col in range(ncols):
        if r == m:
            break
        p = -1
        for i in range(r, m):
            if _bit(R[i], col):
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(w):
                t = R[r, j]
                R[r, j] = R[p, j]
                R[p, j] = t
        start = 0 if full else r + 1
        for i in range(start, m):
            if i != r and _bit(R[i], col):
                for j in range(w):
                    R[i, j] ^= R[r, j]
        pivots[r] = col
        r += 1
    return r, pivots[:r]


@njit(**_opts)
def rank(rows, ncols):
    R = rows.copy()
    r, _ = _echelon(R, ncols, False)
    return r


@njit(**_opts)
def rref(rows, ncols):
    R = rows.copy()
    r, pivots = _echelon(R, ncols, True)
    return R[:r].copy(), pivots.copy()


@njit(**_opts)
def scan_until_rank(rows, orthogonal, ncols, target_rank):
    m, w = rows.shape
    selected = np.zeros(m, dtype=np.bool_)
    cap = min(m, ncols)
    basis = np.zeros((cap, w), dtype=np.uint64)
    lead = np.zeros(cap, dtype=np.int64)
    x = np.empty(w, dtype=np.uint64)
    nb = 0
    for i in range(m):
        if nb >= target_rank:
            return selected, i
        if not orthogonal[i]:
            continue
        selected[i] = True
        for j in range(w):
            x[j] = rows[i, j]
        for b in range(nb):
            if _bit(x, lead[b]):
                for j in range(w):
                    x[j] ^= basis[b, j]
        for j in range(w):
            if x[j] != 0:
                v = x[j]
                bit = 0
                while not ((v >> np.uint64(bit)) & np.uint64(1)):
                    bit += 1
                for jj in range(w):
                    basis[nb, jj] = x[jj]
                lead[nb] = j * 64 + bit
                nb += 1
                break
    return selected, m


@njit(**_opts)
def bitflip_decode(check_ptr, check_idx, n, y, max_iters, threshold):
    word = y.astype(np.uint8)
    m = check_ptr.size - 1
    deg = np.zeros(n, dtype=np.int64)
    for e in range(check_idx.size):
        deg[check_idx[e]] += 1
    s = np.zeros(m, dtype=np.uint8)
    failed = np.zeros(n, dtype=np.int64)
    flips = 0
    it = 0
    while True:
        any_fail = False
        for i in range(m):
            acc = np.uint8(0)
            for e in range(check_ptr[i], check_ptr[i + 1]):
                acc ^= word[check_idx[e]]
            s[i] = acc
            if acc:
                any_fail = True
        if not any_fail:
            return word, True, it, flips
        if it >= max_iters:
            return word, False, it, flips
        failed[:] = 0
        for i in range(m):
            if s[i]:
                for e in range(check_ptr[i], check_ptr[i + 1]):
                    failed[check_idx[e]] += 1
        nflip = 0
        for j in range(n):
            if failed[j] > threshold * deg[j]:
                word[j] ^= np.uint8(1)
                nflip += 1
        it += 1
        if nflip == 0:
            return word, False, it, flips
        flips += nflip


@njit(**_opts)
def count_candidates(zero_rows, one_rows, n):
    total = 0
    for x in range(1 << n):
        ux = np.uint64(x)
        ok = True
        for h in zero_rows:
            if _parity(ux & h):
                ok = False
                break
        if ok:
            for h in one_rows:
                if not _parity(ux & h):
                    ok = False
                    break
        if ok:
            total += 1
    return total
