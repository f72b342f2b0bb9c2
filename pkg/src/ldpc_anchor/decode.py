"""Hard-decision bit-flipping decoder over every row of a decoding matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .gf2 import BitMatrix, as_bits

DEFAULT_MAX_ITERS = 50


@dataclass(frozen=True)
class DecodeOutcome:
    word: np.ndarray
    converged: bool
    iterations: int
    flips: int


class BitFlipDecoder:
    """Parallel bit flipping with a majority threshold.

    Each iteration evaluates all checks, counts the failed checks touching
    each position and flips every position whose count is strictly greater
    than ``threshold`` times the number of checks covering it. With the
    default ``threshold=0.5`` ties never flip.
    """

    def __init__(self, H: BitMatrix, max_iters: int = DEFAULT_MAX_ITERS, threshold: float = 0.5):
        if max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        self.H = H
        self.max_iters = int(max_iters)
        self.threshold = float(threshold)
        supports = H.supports()
        self._ptr = np.zeros(H.nrows + 1, dtype=np.int64)
        self._ptr[1:] = np.cumsum([len(s) for s in supports])
        self._idx = np.array([c for s in supports for c in s], dtype=np.int64)

    @property
    def n(self) -> int:
        return self.H.ncols

    def decode(self, y) -> DecodeOutcome:
        y = as_bits(y)
        if y.size != self.n:
            raise ValueError(f"word length {y.size} does not match {self.n} columns")
        word, ok, it, flips = kernels.bitflip_decode(
            self._ptr, self._idx, self.n, y, self.max_iters, self.threshold
        )
        return DecodeOutcome(as_bits(np.asarray(word)), bool(ok), int(it), int(flips))


def bit_flip_decode(H: BitMatrix, y, max_iters: int = DEFAULT_MAX_ITERS, threshold: float = 0.5) -> DecodeOutcome:
    return BitFlipDecoder(H, max_iters, threshold).decode(y)


def majority_radius(H: BitMatrix) -> int:
    """Number of errors parallel majority flipping is guaranteed to fix in one pass.

    With ``gamma_j`` checks on position ``j`` and at most ``lam`` checks
    shared by any two positions, ``t`` errors are corrected whenever
    ``t * lam <= gamma_j / 2`` for every ``j``.
    """
    d = H.dense().astype(np.int64)
    gamma = d.sum(axis=0)
    if gamma.size == 0 or gamma.min() == 0:
        return 0
    co = d.T @ d
    np.fill_diagonal(co, 0)
    lam = int(co.max()) if co.size else 0
    if lam == 0:
        return H.ncols
    return int(gamma.min() // (2 * lam))
