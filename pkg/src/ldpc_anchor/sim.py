"""Monte-Carlo experiments over uniformly random anchored words.

Trial ``i`` of an experiment with master seed ``seed`` draws everything it
needs from ``numpy.random.default_rng([seed, i])``, so any trial can be
replayed on its own and trials can run in any order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .anchor import construction_success, select_orthogonal
from .decode import DEFAULT_MAX_ITERS, BitFlipDecoder, majority_radius
from .entropy import build_h_prime
from .geometry import BaseMatrixBundle
from .gf2 import as_bits, kernel_basis, rank
from .puf import ReproductionError, derive_rng

DEFAULT_SEED = 20180611
ROWCOUNT_TRIALS = 10_000
RANK_TRIALS = 1_000


def _run(fn, trials: int, workers: int):
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers <= 1:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def trial_response(n: int, seed: int, index: int) -> np.ndarray:
    return as_bits(derive_rng(seed, index).integers(0, 2, size=n, dtype=np.uint8))


def binomial_cdf(N: int, p: Fraction = Fraction(1, 2)) -> np.ndarray:
    """Exact Binomial(N, p) CDF at 0..N, accumulated in rationals."""
    p = Fraction(p)
    q = 1 - p
    cum = Fraction(0)
    out = np.empty(N + 1)
    for x in range(N + 1):
        cum += math.comb(N, x) * p**x * q ** (N - x)
        out[x] = float(cum)
    return out


def empirical_cdf(samples) -> list[tuple[int, float]]:
    """``(value, fraction of samples <= value)`` for every distinct value."""
    values, counts = np.unique(np.asarray(samples, dtype=np.int64), return_counts=True)
    cum = np.cumsum(counts) / counts.sum()
    return [(int(v), float(c)) for v, c in zip(values, cum)]


def ks_distance(samples, N: int, p: Fraction = Fraction(1, 2)) -> float:
    """Sup distance between the empirical CDF and Binomial(N, p) over integer support."""
    samples = np.asarray(samples, dtype=np.int64)
    counts = np.bincount(samples, minlength=N + 1)[: N + 1]
    emp = np.cumsum(counts) / samples.size
    return float(np.max(np.abs(emp - binomial_cdf(N, p))))


def _base_info(bundle: BaseMatrixBundle) -> dict:
    return {"n": bundle.n, "nrows_base": bundle.nrows, "rank_base": bundle.rank_cache}


@dataclass
class RowCountReport:
    trials: int
    seed: int
    n: int
    nrows_base: int
    rank_base: int
    mean: float
    variance: float
    mean_se: float
    variance_se: float
    expected_mean: float
    expected_variance: float
    ks_distance: float
    cdf: list
    nrows_selected: list = field(repr=False)
    k: list = field(repr=False)
    rank_selected: list = field(repr=False)

    kind = "rowcount"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind
        d["version"] = __version__
        return d

    def cdf_table(self) -> str:
        return "".join(f"{v} {c:.10f}\n" for v, c in self.cdf)


def row_count_experiment(bundle: BaseMatrixBundle, trials: int = ROWCOUNT_TRIALS,
                         seed: int = DEFAULT_SEED, workers: int = 1) -> RowCountReport:
    """Distribution of the number of kept rows for uniform ``r``."""

    def one(i):
        res = select_orthogonal(bundle, trial_response(bundle.n, seed, i))
        return res.selected.nrows, res.rank_selected, res.k

    recs = np.array(_run(one, trials, workers), dtype=np.int64).reshape(-1, 3)
    counts = recs[:, 0]
    N = bundle.nrows
    var = float(np.var(counts, ddof=1)) if trials > 1 else 0.0
    return RowCountReport(
        trials=trials,
        seed=seed,
        **_base_info(bundle),
        mean=float(np.mean(counts)),
        variance=var,
        mean_se=math.sqrt(var / trials),
        variance_se=var * math.sqrt(2.0 / (trials - 1)) if trials > 1 else 0.0,
        expected_mean=N / 2,
        expected_variance=N / 4,
        ks_distance=ks_distance(counts, N),
        cdf=empirical_cdf(counts),
        nrows_selected=counts.tolist(),
        k=recs[:, 2].tolist(),
        rank_selected=recs[:, 1].tolist(),
    )


@dataclass(frozen=True)
class AnchorTrial:
    index: int
    nrows_selected: int
    rank_selected: int
    k: int
    rank_h_prime: int
    lower_bound: int
    success: bool

    @property
    def deficit_gap(self) -> int:
        return self.k - self.lower_bound


def anchor_trials(bundle: BaseMatrixBundle, trials: int = RANK_TRIALS,
                  seed: int = DEFAULT_SEED, workers: int = 1) -> list[AnchorTrial]:
    """Select, rank and certify one uniform ``r`` per trial."""

    def one(i):
        res = select_orthogonal(bundle, trial_response(bundle.n, seed, i))
        rank_hp = rank(build_h_prime(res))
        return AnchorTrial(i, res.selected.nrows, res.rank_selected, res.k, rank_hp,
                           res.n - rank_hp, construction_success(res, bundle))

    return _run(one, trials, workers)


def _hist(values) -> dict:
    vals, counts = np.unique(np.asarray(list(values), dtype=np.int64), return_counts=True)
    return {str(int(v)): int(c) for v, c in zip(vals, counts)}


def success_report(bundle, records: list[AnchorTrial], seed: int) -> dict:
    deficits = [bundle.rank_cache - t.rank_selected for t in records]
    n_ok = sum(t.success for t in records)
    return {
        "kind": "success",
        "version": __version__,
        "trials": len(records),
        "seed": seed,
        **_base_info(bundle),
        "success_rate": n_ok / len(records),
        "deficit_histogram": _hist(deficits),
        "deficit_01_fraction": sum(d in (0, 1) for d in deficits) / len(records),
        "k": [t.k for t in records],
        "rank_selected": [t.rank_selected for t in records],
        "nrows_selected": [t.nrows_selected for t in records],
    }


def entropy_report(bundle, records: list[AnchorTrial], seed: int) -> dict:
    ok = [t for t in records if t.success]
    in_bounds = sum(t.k - 2 <= t.lower_bound <= t.k for t in ok)
    rank_ok = sum(t.rank_h_prime <= t.rank_selected + 2 for t in ok)
    lower_minus_k = [t.lower_bound - t.k for t in ok]
    return {
        "kind": "entropy",
        "version": __version__,
        "trials": len(records),
        "seed": seed,
        **_base_info(bundle),
        "successful": len(ok),
        "vacuous": len(records) - len(ok),
        "in_bounds": in_bounds,
        "in_bounds_fraction": in_bounds / len(ok) if ok else 1.0,
        "violations": len(ok) - in_bounds,
        "rank_bound_violations": len(ok) - rank_ok,
        "gap_histogram": _hist(t.deficit_gap for t in ok),
        "min_lower_minus_k": min(lower_minus_k) if ok else None,
        "max_lower_minus_k": max(lower_minus_k) if ok else None,
        "fraction_lower_ge_k_minus_2": in_bounds / len(records),
    }


def success_probability(bundle: BaseMatrixBundle, trials: int = RANK_TRIALS,
                        seed: int = DEFAULT_SEED, workers: int = 1) -> dict:
    return success_report(bundle, anchor_trials(bundle, trials, seed, workers), seed)


def entropy_bound_experiment(bundle: BaseMatrixBundle, trials: int = RANK_TRIALS,
                             seed: int = DEFAULT_SEED, workers: int = 1) -> dict:
    return entropy_report(bundle, anchor_trials(bundle, trials, seed, workers), seed)


def anchor_experiment(bundle: BaseMatrixBundle, trials: int = RANK_TRIALS,
                      seed: int = DEFAULT_SEED, workers: int = 1) -> tuple[dict, dict]:
    """Success and entropy reports computed from one shared set of trials."""
    records = anchor_trials(bundle, trials, seed, workers)
    return success_report(bundle, records, seed), entropy_report(bundle, records, seed)


SCHEMES = ("code-offset", "anchor")


def end_to_end_key_experiment(bundle: BaseMatrixBundle, scheme: str, p: float,
                              trials: int = RANK_TRIALS, seed: int = DEFAULT_SEED,
                              max_iters: int = DEFAULT_MAX_ITERS, workers: int = 1) -> dict:
    """Enroll, re-extract through BSC(p) and reproduce, once per trial.

    ``radius`` is the one-pass majority guarantee of the matrix being
    decoded; wrong keys at or below it would indicate a decoder bug.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    if not 0.0 <= p < 0.5:
        raise ValueError("p must lie in [0, 0.5)")
    n = bundle.n
    if scheme == "code-offset":
        shared = BitFlipDecoder(bundle.matrix, max_iters)
        G = np.stack(kernel_basis(bundle.matrix))
        shared_radius = majority_radius(bundle.matrix)

    def one(i):
        rng = derive_rng(seed, i)
        r = rng.integers(0, 2, size=n, dtype=np.uint8)
        if scheme == "code-offset":
            c = (rng.integers(0, 2, size=G.shape[0], dtype=np.uint8) @ G) % 2
            offset = (c ^ r).astype(np.uint8)
            dec, radius = shared, shared_radius
        else:
            res = select_orthogonal(bundle, r)
            offset = None
            dec, radius = BitFlipDecoder(res.selected, max_iters), majority_radius(res.selected)
        e = (rng.random(n) < p).astype(np.uint8)
        r_prime = r ^ e
        y = r_prime if offset is None else r_prime ^ offset
        out = dec.decode(y)
        key = out.word if offset is None else out.word ^ offset
        correct = bool(out.converged and np.array_equal(key, r))
        return int(e.sum()), bool(out.converged), correct, radius

    recs = _run(one, trials, workers)
    within = [rec for rec in recs if rec[0] <= rec[3]]
    converged = [rec for rec in recs if rec[1]]
    wrong = [rec for rec in converged if not rec[2]]
    wrong_within = [rec for rec in within if rec[1] and not rec[2]]
    return {
        "kind": "endtoend",
        "version": __version__,
        "scheme": scheme,
        "p": p,
        "trials": trials,
        "seed": seed,
        "max_iters": max_iters,
        **_base_info(bundle),
        "failure_rate": (trials - len(converged)) / trials,
        "wrong_key_rate": len(wrong) / trials,
        "key_error_rate": sum(not rec[2] for rec in recs) / trials,
        "within_radius_trials": len(within),
        "within_radius_converged": sum(rec[1] for rec in within),
        "within_radius_wrong": len(wrong_within),
        "within_radius_failures": sum(not rec[1] for rec in within),
        "wrong_key_rate_within_radius": (len(wrong_within) / max(1, sum(rec[1] for rec in within))),
        "radius_min": min(rec[3] for rec in recs),
        "error_weight_histogram": _hist(rec[0] for rec in recs),
    }


__all__ = [
    "DEFAULT_SEED",
    "ReproductionError",
    "RowCountReport",
    "anchor_experiment",
    "anchor_trials",
    "binomial_cdf",
    "empirical_cdf",
    "end_to_end_key_experiment",
    "entropy_bound_experiment",
    "ks_distance",
    "row_count_experiment",
    "success_probability",
]
