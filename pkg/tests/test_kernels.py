"""The numba and numpy backends must agree bit for bit."""

import importlib.util
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ldpc_anchor.gf2 import pack
from ldpc_anchor.kernels import _numpy

_numba = pytest.importorskip("ldpc_anchor.kernels._numba")


def packed(dense):
    return pack(dense).reshape(dense.shape[0], -1)


matrices = st.tuples(st.integers(1, 14), st.integers(1, 140)).flatmap(
    lambda s: arrays(np.uint8, s, elements=st.integers(0, 1))
)


@given(matrices)
@settings(max_examples=80, deadline=None)
def test_rank_and_rref_agree(dense):
    rows = packed(dense)
    n = dense.shape[1]
    assert _numba.rank(rows, n) == _numpy.rank(rows, n)
    Ra, pa = _numba.rref(rows, n)
    Rb, pb = _numpy.rref(rows, n)
    assert np.array_equal(Ra, Rb)
    assert np.array_equal(pa, pb)


@given(matrices, st.data())
@settings(max_examples=80, deadline=None)
def test_row_parity_agrees(dense, data):
    v = data.draw(arrays(np.uint8, dense.shape[1], elements=st.integers(0, 1)))
    rows = packed(dense)
    expect = (dense.astype(int) @ v.astype(int)) % 2
    assert _numba.row_parity(rows, pack(v)).tolist() == expect.tolist()
    assert _numpy.row_parity(rows, pack(v)).tolist() == expect.tolist()


@given(matrices, st.data())
@settings(max_examples=80, deadline=None)
def test_scan_until_rank_agrees(dense, data):
    ortho = data.draw(arrays(np.bool_, dense.shape[0]))
    target = data.draw(st.integers(0, dense.shape[1]))
    rows = packed(dense)
    ma, sa = _numba.scan_until_rank(rows, ortho, dense.shape[1], target)
    mb, sb = _numpy.scan_until_rank(rows, ortho, dense.shape[1], target)
    assert sa == sb
    assert np.array_equal(ma, mb)


@given(matrices, st.data())
@settings(max_examples=80, deadline=None)
def test_bitflip_agrees(dense, data):
    n = dense.shape[1]
    y = data.draw(arrays(np.uint8, n, elements=st.integers(0, 1)))
    iters = data.draw(st.integers(1, 8))
    ptr = np.concatenate([[0], np.cumsum(dense.sum(axis=1))]).astype(np.int64)
    idx = np.concatenate([np.flatnonzero(r) for r in dense]).astype(np.int64)
    a = _numba.bitflip_decode(ptr, idx, n, y, iters, 0.5)
    b = _numpy.bitflip_decode(ptr, idx, n, y, iters, 0.5)
    assert np.array_equal(a[0], b[0])
    assert tuple(a[1:]) == tuple(b[1:])


@given(st.integers(1, 12), st.data())
@settings(max_examples=40, deadline=None)
def test_count_candidates_agrees(n, data):
    za = data.draw(arrays(np.uint64, st.integers(0, 5), elements=st.integers(0, (1 << n) - 1)))
    oa = data.draw(arrays(np.uint64, st.integers(0, 5), elements=st.integers(0, (1 << n) - 1)))
    assert _numba.count_candidates(za, oa, n) == _numpy.count_candidates(za, oa, n)


def test_parity64():
    x = np.array([0, 1, 3, 7, 2**63, 2**64 - 1], dtype=np.uint64)
    expect = [bin(int(v)).count("1") % 2 for v in x]
    assert _numba.parity64(x).tolist() == expect
    assert _numpy.parity64(x).tolist() == expect


def test_env_flag_selects_numpy_backend():
    code = (
        "from ldpc_anchor import kernels, geometry, sim;"
        "b = geometry.build_bundle([geometry.GeometrySpec('EG', 2, 2)]);"
        "r = sim.success_probability(b, 20, 7);"
        "print(kernels.BACKEND, r['deficit_histogram'], sum(r['k']))"
    )
    env = dict(os.environ, LDPC_ANCHOR_NO_JIT="1")
    out_np = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    env["LDPC_ANCHOR_NO_JIT"] = "0"
    out_nb = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out_np.stdout.startswith("numpy ")
    expected = "numba" if importlib.util.find_spec("numba") else "numpy"
    assert out_nb.stdout.startswith(expected + " ")
    assert out_np.stdout.split(" ", 1)[1] == out_nb.stdout.split(" ", 1)[1]
