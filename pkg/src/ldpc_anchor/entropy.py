"""Attacker uncertainty about an anchored word.

An attacker who knows the base matrix and which rows were kept learns two
things about ``r``: it is orthogonal to every kept row and non-orthogonal
to every rejected row. Both constraints are linear in ``[r, 1]``:

    [ kept     | 0 ]
    [ rejected | 1 ] [r, 1]^T = 0

so the number of candidates is ``2 ** (n - rank(augmented))`` and
``n - rank(augmented)`` bits is a lower bound on the attacker's
uncertainty for uniformly distributed ``r``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .anchor import AnchorResult, construction_success
from .geometry import BaseMatrixBundle
from .gf2 import BitMatrix, rank, weight

MAX_ENUMERATION_N = 24


@dataclass(frozen=True)
class EntropyCertificate:
    n: int
    k: int
    rank_h_tilde: int
    rank_h_prime: int
    lower_bound: int
    upper_bound: int
    success: bool
    degenerate: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bound_vacuous"] = not self.success
        return d

    @classmethod
    def from_dict(cls, d: dict) -> EntropyCertificate:
        keys = ("n", "k", "rank_h_tilde", "rank_h_prime", "lower_bound", "upper_bound", "success", "degenerate")
        return cls(**{k: d[k] for k in keys if k in d})


def build_h_prime(res: AnchorResult) -> BitMatrix:
    """Kept rows padded with a 0, rejected rows padded with a 1."""
    top = res.selected.append_column(0)
    bottom = res.rejected.append_column(1)
    return top.vstack(bottom)


def certify(res: AnchorResult) -> EntropyCertificate:
    rank_hp = rank(build_h_prime(res))
    w = weight(res.r)
    return EntropyCertificate(
        n=res.n,
        k=res.k,
        rank_h_tilde=res.rank_selected,
        rank_h_prime=rank_hp,
        lower_bound=res.n - rank_hp,
        upper_bound=res.k,
        success=construction_success(res),
        degenerate=w in (0, res.n),
    )


class EnumerationTooLarge(ValueError):
    pass


def enumerate_candidate_set(res: AnchorResult) -> int:
    """Exact number of words satisfying every kept and rejected row constraint.

    Enumerates all of F_2^n, so ``n`` is capped at :data:`MAX_ENUMERATION_N`.
    """
    n = res.n
    if n > MAX_ENUMERATION_N:
        raise EnumerationTooLarge(f"n = {n} exceeds the enumeration limit of {MAX_ENUMERATION_N}")
    zero_rows = np.ascontiguousarray(res.selected.words[:, 0])
    one_rows = np.ascontiguousarray(res.rejected.words[:, 0])
    return int(kernels.count_candidates(zero_rows, one_rows, n))


@dataclass(frozen=True)
class RankBoundCheck:
    """Outcome of checking ``rank(H') <= rank(kept) + 2``.

    ``vacuous`` is set when the selection was not successful, in which case
    the bound is not claimed and ``holds`` is reported as True.
    """

    holds: bool
    vacuous: bool
    rank_h_tilde: int
    rank_h_prime: int

    def __bool__(self) -> bool:
        return self.holds


def rank_bound_check(res: AnchorResult, bundle: BaseMatrixBundle | None = None) -> RankBoundCheck:
    rank_hp = rank(build_h_prime(res))
    if not construction_success(res, bundle):
        return RankBoundCheck(True, True, res.rank_selected, rank_hp)
    return RankBoundCheck(rank_hp <= res.rank_selected + 2, False, res.rank_selected, rank_hp)
