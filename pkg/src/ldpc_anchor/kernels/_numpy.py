"""Vectorised numpy implementations of the hot GF(2) kernels.

Every function here has a loop-based twin in ``_numba``; both take and
return the same array types so they can be swapped freely.
"""

import numpy as np

_ONE = np.uint64(1)
_SHIFTS = tuple(np.uint64(s) for s in (32, 16, 8, 4, 2, 1))


def parity64(x):
    """Parity of each uint64 in ``x`` (XOR fold)."""
    x = np.array(x, dtype=np.uint64, copy=True)
    for s in _SHIFTS:
        x ^= x >> s
    return (x & _ONE).astype(np.uint8)


def row_parity(rows, v):
    """``rows @ v`` over GF(2) for packed rows (m, w) and packed vector (w,)."""
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    acc = np.bitwise_xor.reduce(rows & v[None, :], axis=1)
    return parity64(acc)


def _column_bits(rows, col):
    word, bit = divmod(col, 64)
    return ((rows[:, word] >> np.uint64(bit)) & _ONE).astype(bool)


def rank(rows, ncols):
    R = rows.copy()
    m = R.shape[0]
    r = 0
    for col in range(ncols):
        if r == m:
            break
        hits = np.flatnonzero(_column_bits(R[r:], col))
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        below = r + 1 + np.flatnonzero(_column_bits(R[r + 1:], col))
        R[below] ^= R[r]
        r += 1
    return r


def rref(rows, ncols):
    R = rows.copy()
    m = R.shape[0]
    pivots = []
    r = 0
    for col in range(ncols):
        if r == m:
            break
        hits = np.flatnonzero(_column_bits(R[r:], col))
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        mask = _column_bits(R, col)
        mask[r] = False
        R[mask] ^= R[r]
        pivots.append(col)
        r += 1
    return R[:r], np.array(pivots, dtype=np.int64)


def scan_until_rank(rows, orthogonal, ncols, target_rank):
    """Append orthogonal rows in order until the running rank hits ``target_rank``.

    Returns ``(selected_mask, n_scanned)``.
    """
    m, w = rows.shape
    selected = np.zeros(m, dtype=np.bool_)
    basis = np.zeros((min(m, ncols), w), dtype=np.uint64)
    lead = np.zeros(min(m, ncols), dtype=np.int64)
    nb = 0
    for i in range(m):
        if nb >= target_rank:
            return selected, i
        if not orthogonal[i]:
            continue
        selected[i] = True
        x = rows[i].copy()
        for j in range(nb):
            word, bit = divmod(int(lead[j]), 64)
            if (int(x[word]) >> bit) & 1:
                x ^= basis[j]
        nz = np.flatnonzero(x)
        if nz.size:
            word = int(nz[0])
            val = int(x[word])
            bit = (val & -val).bit_length() - 1
            basis[nb] = x
            lead[nb] = word * 64 + bit
            nb += 1
    return selected, m


def bitflip_decode(check_ptr, check_idx, n, y, max_iters, threshold):
    """Parallel bit flipping on a CSR check list.

    Returns ``(word, converged, iterations, flips)``.
    """
    word = y.astype(np.uint8, copy=True)
    deg = np.bincount(check_idx, minlength=n)
    starts = check_ptr[:-1]
    sizes = np.diff(check_ptr)
    nonempty = sizes > 0
    limit = threshold * deg
    flips = 0
    it = 0
    while True:
        s = np.zeros(sizes.size, dtype=np.uint8)
        if check_idx.size:
            s[nonempty] = np.bitwise_xor.reduceat(word[check_idx], starts[nonempty])
        if not s.any():
            return word, True, it, flips
        if it >= max_iters:
            return word, False, it, flips
        failed = np.bincount(check_idx, weights=np.repeat(s, sizes), minlength=n)
        flip = failed > limit
        nflip = int(np.count_nonzero(flip))
        it += 1
        if nflip == 0:
            return word, False, it, flips
        word[flip] ^= 1
        flips += nflip


_CHUNK = 1 << 16


def count_candidates(zero_rows, one_rows, n):
    """Brute-force count of x in F_2^n with parity(zero_rows & x) = 0 and parity(one_rows & x) = 1.

    Rows are single-word packed (n <= 64).
    """
    total = 0
    for start in range(0, 1 << n, _CHUNK):
        xs = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.uint64)
        ok = np.ones(xs.size, dtype=bool)
        for h in zero_rows:
            ok &= parity64(xs & h) == 0
        for h in one_rows:
            ok &= parity64(xs & h) == 1
        total += int(np.count_nonzero(ok))
    return total
