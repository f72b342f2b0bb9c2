import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ldpc_anchor.anchor import (
    construction_success,
    row_space_intersection_dim,
    select_orthogonal,
    select_until_rank,
)
from ldpc_anchor.geometry import stack
from ldpc_anchor.gf2 import BitMatrix, rank, syndrome

from oracles import parity, span, to_ints


def identity_bundle(n):
    return stack([BitMatrix.identity(n)])


def test_zero_response_keeps_everything(eg32):
    res = select_orthogonal(eg32, np.zeros(63, dtype=np.uint8))
    assert res.selected.nrows == 315 and res.rejected.nrows == 0
    assert res.k == 63 - eg32.rank_cache
    assert construction_success(res, eg32)


def test_identity_all_ones():
    b = identity_bundle(6)
    res = select_orthogonal(b, np.ones(6, dtype=np.uint8))
    assert res.selected.nrows == 0
    assert res.k == 6
    assert not construction_success(res, b)


def test_partition_invariants(eg32, rng):
    for _ in range(20):
        r = rng.integers(0, 2, 63).astype(np.uint8)
        res = select_orthogonal(eg32, r)
        idx = np.concatenate([res.selected_indices, res.rejected_indices])
        assert sorted(idx.tolist()) == list(range(315))
        assert np.all(np.diff(res.selected_indices) > 0)
        assert not syndrome(res.selected, r).any()
        assert syndrome(res.rejected, r).all()
        assert res.k == 63 - rank(res.selected)
        assert 0 <= res.k <= 63


def test_length_mismatch(eg32):
    with pytest.raises(ValueError):
        select_orthogonal(eg32, np.zeros(10, dtype=np.uint8))
    with pytest.raises(ValueError):
        select_until_rank(eg32, np.zeros(63, dtype=np.uint8), 64)


def test_until_rank_k_equals_n(eg32, rng):
    res = select_until_rank(eg32, rng.integers(0, 2, 63).astype(np.uint8), 63)
    assert res.selected.nrows == 0 and res.k == 63
    assert res.unscanned_indices.size == 315
    assert res.reached


def test_until_rank_unreachable(eg32, rng):
    r = rng.integers(0, 2, 63).astype(np.uint8)
    res = select_until_rank(eg32, r, 0)
    full = select_orthogonal(eg32, r)
    assert not res.reached
    assert res.k == full.k > 0
    assert np.array_equal(res.selected_indices, full.selected_indices)
    assert np.array_equal(res.rejected_indices, full.rejected_indices)
    assert res.unscanned_indices.size == 0


def test_until_rank_target_20(eg32, rng):
    for _ in range(20):
        r = rng.integers(0, 2, 63).astype(np.uint8)
        res = select_until_rank(eg32, r, 20)
        full = select_orthogonal(eg32, r)
        assert res.k == 20 and res.reached
        assert set(res.selected_indices) <= set(full.selected_indices)
        # early stop means the kept rows are exactly the orthogonal rows before the stop point
        stop = res.unscanned_indices[0] if res.unscanned_indices.size else 315
        assert res.selected_indices.tolist() == [i for i in full.selected_indices if i < stop]
        assert res.rejected_indices.tolist() == [i for i in full.rejected_indices if i < stop]
        # the last kept row is the one that brought the rank to 43
        assert rank(res.selected.take(range(res.selected.nrows - 1))) == 42


def test_deterministic(eg32, rng):
    r = rng.integers(0, 2, 63).astype(np.uint8)
    a, b = select_orthogonal(eg32, r), select_orthogonal(eg32, r)
    assert a.selected == b.selected and np.array_equal(a.rejected_indices, b.rejected_indices)


def test_success_rate_eg32(eg32):
    rng = np.random.default_rng(99)
    ok = sum(construction_success(select_orthogonal(eg32, rng.integers(0, 2, 63).astype(np.uint8)), eg32)
             for _ in range(1000))
    assert ok >= 990


def test_mean_selected_rows(eg32):
    rng = np.random.default_rng(5)
    counts = [select_orthogonal(eg32, rng.integers(0, 2, 63).astype(np.uint8)).selected.nrows
              for _ in range(10_000)]
    # standard error of the mean is ~0.09 for Var = 78.75
    assert abs(np.mean(counts) - 157.5) < 0.6


@st.composite
def small_instances(draw):
    n = draw(st.integers(2, 12))
    m = draw(st.integers(1, 3 * n))
    dense = draw(arrays(np.uint8, (m, n), elements=st.integers(0, 1)))
    r = draw(arrays(np.uint8, n, elements=st.integers(0, 1)))
    return dense, r


@given(small_instances())
@settings(max_examples=150, deadline=None)
def test_deficit_at_most_one_when_spanning_intersection(inst):
    dense, r = inst
    n = dense.shape[1]
    b = stack([BitMatrix.from_dense(dense)])
    res = select_orthogonal(b, r)
    rint = sum(int(x) << j for j, x in enumerate(r))
    rs_base = span(to_ints(dense))
    intersection = {x for x in rs_base if parity(x & rint) == 0}
    dim_v = len(intersection).bit_length() - 1
    assert dim_v == row_space_intersection_dim(b, r)
    assert dim_v >= b.rank_cache - 1
    kept_span = span(to_ints(res.selected.dense())) if res.selected.nrows else {0}
    assert kept_span <= intersection
    if kept_span == intersection:
        assert construction_success(res, b)
    assert res.k == n - rank(res.selected)


@given(small_instances(), st.integers(0, 12))
@settings(max_examples=100, deadline=None)
def test_until_rank_subset(inst, k_target):
    dense, r = inst
    n = dense.shape[1]
    k_target = min(k_target, n)
    b = stack([BitMatrix.from_dense(dense)])
    early = select_until_rank(b, r, k_target)
    full = select_orthogonal(b, r)
    assert set(early.selected_indices) <= set(full.selected_indices)
    assert early.k >= k_target
    assert early.reached == (early.k == k_target)
    if not early.reached:
        assert early.k == full.k
