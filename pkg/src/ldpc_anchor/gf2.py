"""Exact linear algebra over GF(2).

Vectors are plain ``numpy.uint8`` arrays of zeros and ones. Matrices are
:class:`BitMatrix` objects that keep their rows bit-packed into ``uint64``
words (column ``j`` lives in word ``j // 64`` at bit ``j % 64``). All
operations are pure; a :class:`BitMatrix` never changes after construction.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import kernels

WORD = 64


def as_bits(v, length: int | None = None) -> np.ndarray:
    """Coerce ``v`` to a read-only 1-D ``uint8`` array of zeros and ones."""
    a = np.asarray(v)
    if a.ndim != 1:
        raise ValueError(f"bit vector must be 1-D, got shape {a.shape}")
    if a.size and not np.isin(a, (0, 1)).all():
        raise ValueError("bit vector entries must be 0 or 1")
    a = a.astype(np.uint8)
    if length is not None and a.size != length:
        raise ValueError(f"expected a vector of length {length}, got {a.size}")
    a.setflags(write=False)
    return a


def weight(v) -> int:
    return int(np.count_nonzero(np.asarray(v)))


def _nwords(ncols: int) -> int:
    return max(1, -(-ncols // WORD))


def pack(bits: np.ndarray) -> np.ndarray:
    """Pack a (m, n) or (n,) 0/1 array into uint64 words, little-endian in column index."""
    bits = np.asarray(bits, dtype=np.uint8)
    squeeze = bits.ndim == 1
    if squeeze:
        bits = bits[None, :]
    m, n = bits.shape
    w = _nwords(n)
    padded = np.zeros((m, w * WORD), dtype=np.uint8)
    padded[:, :n] = bits
    as_bytes = np.packbits(padded.reshape(m, w * 8, 8), axis=2, bitorder="little")
    words = as_bytes.reshape(m, w * 8).view("<u8").astype(np.uint64)
    return words[0] if squeeze else words


def unpack(words: np.ndarray, ncols: int) -> np.ndarray:
    words = np.asarray(words, dtype=np.uint64)
    squeeze = words.ndim == 1
    if squeeze:
        words = words[None, :]
    m, w = words.shape
    as_bytes = words.astype("<u8").view(np.uint8).reshape(m, w * 8)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :ncols]
    return bits[0] if squeeze else bits


class BitMatrix:
    """Immutable binary matrix with bit-packed rows.

    Build one with :meth:`from_dense` or :meth:`from_supports`; the raw
    constructor takes already-packed words.
    """

    __slots__ = ("_words", "_ncols", "_rank")

    def __init__(self, words: np.ndarray, ncols: int):
        if ncols < 1:
            raise ValueError("a BitMatrix needs at least one column")
        words = np.array(words, dtype=np.uint64, copy=True).reshape(-1, _nwords(ncols))
        tail = ncols % WORD
        if tail and words.size and (words[:, -1] >> np.uint64(tail)).any():
            raise ValueError("packed words carry bits beyond ncols")
        words.setflags(write=False)
        self._words = words
        self._ncols = int(ncols)
        self._rank = None

    @classmethod
    def from_dense(cls, bits, ncols: int | None = None) -> BitMatrix:
        a = np.asarray(bits)
        if a.ndim == 1 and a.size == 0 and ncols is not None:
            a = a.reshape(0, ncols)
        if a.ndim != 2:
            raise ValueError(f"dense matrix must be 2-D, got shape {a.shape}")
        if a.size and not np.isin(a, (0, 1)).all():
            raise ValueError("matrix entries must be 0 or 1")
        return cls(pack(a.astype(np.uint8)), a.shape[1])

    @classmethod
    def from_supports(cls, supports: Iterable[Sequence[int]], ncols: int) -> BitMatrix:
        """Rows given as lists of column indices holding a one."""
        supports = list(supports)
        dense = np.zeros((len(supports), ncols), dtype=np.uint8)
        for i, cols in enumerate(supports):
            cols = np.asarray(cols, dtype=np.int64)
            if cols.size and (cols.min() < 0 or cols.max() >= ncols):
                raise ValueError(f"row {i} has a column index outside [0, {ncols})")
            dense[i, cols] = 1
        return cls.from_dense(dense)

    @classmethod
    def empty(cls, ncols: int) -> BitMatrix:
        return cls(np.zeros((0, _nwords(ncols)), dtype=np.uint64), ncols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @property
    def words(self) -> np.ndarray:
        return self._words

    @property
    def nrows(self) -> int:
        return self._words.shape[0]

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self._ncols

    def dense(self) -> np.ndarray:
        return unpack(self._words, self._ncols)

    def row(self, i: int) -> np.ndarray:
        return unpack(self._words[i], self._ncols)

    def supports(self) -> list[list[int]]:
        d = self.dense()
        return [np.flatnonzero(r).tolist() for r in d]

    def row_weights(self) -> np.ndarray:
        return self.dense().sum(axis=1, dtype=np.int64)

    def column_weights(self) -> np.ndarray:
        return self.dense().sum(axis=0, dtype=np.int64)

    def take(self, indices) -> BitMatrix:
        idx = np.asarray(indices, dtype=np.int64)
        return BitMatrix(self._words[idx], self._ncols)

    def vstack(self, other: BitMatrix) -> BitMatrix:
        if other.ncols != self._ncols:
            raise ValueError(f"column mismatch: {self._ncols} vs {other.ncols}")
        return BitMatrix(np.vstack([self._words, other._words]), self._ncols)

    def append_column(self, values) -> BitMatrix:
        """Return ``[self | values]`` with one extra trailing column."""
        values = np.broadcast_to(np.asarray(values, dtype=np.uint8), (self.nrows,))
        d = np.hstack([self.dense(), values[:, None]])
        return BitMatrix.from_dense(d) if self.nrows else BitMatrix.empty(self._ncols + 1)

    def rank(self) -> int:
        if self._rank is None:
            self._rank = rank(self)
        return self._rank

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self._ncols == other._ncols and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self._ncols, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self._ncols})"


def rank(M: BitMatrix) -> int:
    """Dimension of the row space of ``M`` over GF(2)."""
    if M.nrows == 0:
        return 0
    return int(kernels.rank(M.words, M.ncols))


def rref(M: BitMatrix) -> tuple[BitMatrix, np.ndarray]:
    """Reduced row echelon form (non-zero rows only) and pivot columns."""
    if M.nrows == 0:
        return BitMatrix.empty(M.ncols), np.zeros(0, dtype=np.int64)
    R, piv = kernels.rref(M.words, M.ncols)
    return BitMatrix(R, M.ncols), np.asarray(piv, dtype=np.int64)


def kernel_basis(M: BitMatrix) -> list[np.ndarray]:
    """Basis of the right kernel ``{v : M v^T = 0}``.

    One vector per free column of the reduced echelon form, so the result
    has ``ncols - rank(M)`` entries. ``M`` itself is untouched.
    """
    R, pivots = rref(M)
    n = M.ncols
    Rd = R.dense()
    free = np.setdiff1d(np.arange(n), pivots)
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        if pivots.size:
            v[pivots] = Rd[:, f]
        basis.append(as_bits(v))
    return basis


def syndrome(M: BitMatrix, v) -> np.ndarray:
    """``M v^T`` over GF(2)."""
    v = as_bits(v)
    if v.size != M.ncols:
        raise ValueError(f"vector length {v.size} does not match {M.ncols} columns")
    return np.asarray(kernels.row_parity(M.words, pack(v)), dtype=np.uint8)


def is_orthogonal(h, r) -> bool:
    h = as_bits(h)
    r = as_bits(r)
    if h.size != r.size:
        raise ValueError(f"length mismatch: {h.size} vs {r.size}")
    return int(np.count_nonzero(h & r)) % 2 == 0


def bits_to_hex(v) -> str:
    """Lowercase hex of ``v`` read as an integer whose MSB is coordinate 0."""
    v = as_bits(v)
    value = 0
    for b in v.tolist():
        value = (value << 1) | b
    return format(value, f"0{max(1, -(-v.size // 4))}x")


def hex_to_bits(text: str, n: int) -> np.ndarray:
    """Inverse of :func:`bits_to_hex`; rejects strings that do not fit in ``n`` bits."""
    t = text.strip().lower()
    if t.startswith("0x"):
        t = t[2:]
    if not t or any(c not in "0123456789abcdef" for c in t):
        raise ValueError(f"malformed hex string {text!r}")
    value = int(t, 16)
    if value >> n:
        raise ValueError(f"hex value {text!r} does not fit in {n} bits")
    return as_bits([(value >> (n - 1 - i)) & 1 for i in range(n)])
