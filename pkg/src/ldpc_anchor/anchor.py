"""Build a decoding matrix whose code contains a given word.

The rows of a base matrix that are orthogonal to ``r`` form the decoding
matrix of a code containing ``r``; the remaining rows are kept as the
rejected part because they still say something about ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .geometry import BaseMatrixBundle
from .gf2 import BitMatrix, as_bits, rank, syndrome


@dataclass(frozen=True)
class AnchorResult:
    """Partition of a base matrix into rows orthogonal / not orthogonal to ``r``.

    ``k`` is ``n - rank(selected)`` regardless of how many rows were
    selected. ``unscanned_indices`` is only non-empty for the early-stop
    variant, and ``reached`` tells whether its target dimension was hit.
    """

    r: np.ndarray
    selected: BitMatrix
    rejected: BitMatrix
    selected_indices: np.ndarray
    rejected_indices: np.ndarray
    base_rank: int
    unscanned_indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    reached: bool = True
    rank_selected: int = -1

    def __post_init__(self):
        if self.rank_selected < 0:
            object.__setattr__(self, "rank_selected", rank(self.selected))

    @property
    def n(self) -> int:
        return self.selected.ncols

    @property
    def k(self) -> int:
        return self.n - self.rank_selected

    @property
    def deficit(self) -> int:
        return self.base_rank - self.rank_selected

    def summary(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "nrows_selected": self.selected.nrows,
            "nrows_rejected": self.rejected.nrows,
            "nrows_unscanned": int(self.unscanned_indices.size),
            "rank_selected": self.rank_selected,
            "rank_base": self.base_rank,
            "deficit": self.deficit,
            "reached": self.reached,
        }


def _orthogonal_mask(bundle: BaseMatrixBundle, r) -> tuple[np.ndarray, np.ndarray]:
    r = as_bits(r)
    if r.size != bundle.n:
        raise ValueError(f"response length {r.size} does not match {bundle.n} columns")
    return r, syndrome(bundle.matrix, r) == 0


def _result(bundle, r, sel_idx, rej_idx, **kw) -> AnchorResult:
    M = bundle.matrix
    return AnchorResult(
        r=r,
        selected=M.take(sel_idx),
        rejected=M.take(rej_idx),
        selected_indices=sel_idx,
        rejected_indices=rej_idx,
        base_rank=bundle.rank_cache,
        **kw,
    )


def select_orthogonal(bundle: BaseMatrixBundle, r) -> AnchorResult:
    """Keep every row ``h`` of the base matrix with ``h . r = 0``, in order."""
    r, ortho = _orthogonal_mask(bundle, r)
    sel = np.flatnonzero(ortho).astype(np.int64)
    rej = np.flatnonzero(~ortho).astype(np.int64)
    return _result(bundle, r, sel, rej)


def select_until_rank(bundle: BaseMatrixBundle, r, k_target: int) -> AnchorResult:
    """Like :func:`select_orthogonal` but stop once the code dimension reaches ``k_target``.

    If the full scan cannot bring the dimension down to ``k_target`` the
    result equals the full selection with ``reached=False``.
    """
    n = bundle.n
    if not 0 <= k_target <= n:
        raise ValueError(f"k_target must lie in [0, {n}], got {k_target}")
    r, ortho = _orthogonal_mask(bundle, r)
    M = bundle.matrix
    if M.nrows:
        mask, scanned = kernels.scan_until_rank(M.words, ortho, n, n - k_target)
        mask = np.asarray(mask, dtype=bool)
        scanned = int(scanned)
    else:
        mask, scanned = np.zeros(0, dtype=bool), 0
    sel = np.flatnonzero(mask).astype(np.int64)
    rej = np.flatnonzero(~ortho[:scanned]).astype(np.int64)
    unscanned = np.arange(scanned, M.nrows, dtype=np.int64)
    rank_sel = rank(M.take(sel))
    return _result(bundle, r, sel, rej, unscanned_indices=unscanned,
                   reached=n - rank_sel == k_target, rank_selected=rank_sel)


def construction_success(res: AnchorResult, bundle: BaseMatrixBundle | None = None) -> bool:
    """True when the selection lost at most one dimension of the base row space."""
    base = bundle.rank_cache if bundle is not None else res.base_rank
    return res.rank_selected >= base - 1


def row_space_intersection_dim(bundle: BaseMatrixBundle, r) -> int:
    """``dim(RS(base) ∩ r^⊥)``, computed directly from the base rank and ``r``.

    It equals ``rank(base)`` when ``r`` is orthogonal to the whole row space
    and ``rank(base) - 1`` otherwise.
    """
    r = as_bits(r)
    orth_all = not np.any(syndrome(bundle.matrix, r))
    return bundle.rank_cache if orth_all else bundle.rank_cache - 1
