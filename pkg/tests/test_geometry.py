
import numpy as np
import pytest

from ldpc_anchor.geometry import (
    GeometrySpec,
    GeometryTooLarge,
    build_bundle,
    eg_lines,
    generate,
    pg_lines,
    smallest_irreducible,
    stack,
)
from ldpc_anchor.gf2 import BitMatrix, rank

from oracles import GF4_MUL, eg_lines_by_enumeration, rank_by_insertion, to_ints, two_dim_subspaces_gf2


def test_irreducible_polynomials():
    assert [smallest_irreducible(s) for s in (1, 2, 3, 4)] == [0b10, 0b111, 0b1011, 0b10011]


def test_eg_2_2_type1():
    M = eg_lines(GeometrySpec("EG", 2, 1))
    assert M.shape == (3, 3)
    assert set(M.row_weights()) == {2} and set(M.column_weights()) == {2}


def test_eg_2_4_type1_matches_enumeration():
    M = eg_lines(GeometrySpec("EG", 2, 2))
    assert M.shape == (15, 15)
    assert set(M.row_weights()) == {4} and set(M.column_weights()) == {4}
    assert rank(M) == 8
    assert rank_by_insertion(to_ints(M.dense())) == 8
    # independent coset enumeration with a hand-written GF(4) table
    pts, lines = eg_lines_by_enumeration(2, 4, GF4_MUL)
    code = {p: p[0] | (p[1] << 2) for p in pts}
    expected = sorted(
        tuple(sorted(code[p] - 1 for p in ln)) for ln in lines if (0, 0) not in ln
    )
    assert sorted(tuple(s) for s in M.supports()) == expected


def test_eg_3_4_type1_shape():
    spec = GeometrySpec("EG", 3, 2)
    M = eg_lines(spec)
    assert spec.n_lines == 336 - 21
    assert M.shape == (315, 63)
    assert set(M.row_weights()) == {4}
    assert rank_by_insertion(to_ints(M.dense())) == rank(M)
    pts, lines = eg_lines_by_enumeration(3, 4, GF4_MUL)
    assert len(lines) == 336
    assert sum((0, 0, 0) in ln for ln in lines) == 21


@pytest.mark.parametrize("m,s", [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2)])
def test_eg_type1_column_weight_and_point_pairs(m, s):
    spec = GeometrySpec("EG", m, s)
    M = eg_lines(spec).dense().astype(int)
    q = 2**s
    assert set(M.sum(axis=1)) == {q}
    assert set(M.sum(axis=0)) == {(q**m - 1) // (q - 1) - 1}
    if M.shape[1] <= 64:
        co = M.T @ M
        # two points not collinear with the origin share one line; those on an
        # origin line share none because that line was dropped
        assert co[~np.eye(co.shape[0], dtype=bool)].max(initial=0) <= 1
        full = eg_lines(GeometrySpec("EG", m, s, type1=False)).dense().astype(int)
        cof = full.T @ full
        off = cof[~np.eye(cof.shape[0], dtype=bool)]
        assert set(off) == {1}


def test_full_eg_point_count():
    spec = GeometrySpec("EG", 2, 2, type1=False)
    M = eg_lines(spec)
    assert M.shape == (20, 16)
    assert spec.n_points == 16


def test_fano_plane():
    M = pg_lines(GeometrySpec("PG", 2, 1))
    assert M.shape == (7, 7)
    assert set(M.row_weights()) == {3} and set(M.column_weights()) == {3}
    assert rank(M) == 4 == rank_by_insertion(to_ints(M.dense()))
    # same incidence structure as 2-dim subspaces of GF(2)^3 (ordering aside)
    assert len(two_dim_subspaces_gf2(3)) == 7


@pytest.mark.parametrize("m,s", [(2, 1), (2, 2), (3, 1), (2, 3), (5, 1), (3, 2)])
def test_pg_two_points_one_line(m, s):
    spec = GeometrySpec("PG", m, s)
    M = pg_lines(spec).dense().astype(int)
    assert M.shape == (spec.n_lines, spec.n_points)
    assert set(M.sum(axis=1)) == {2**s + 1}
    co = M.T @ M
    off = co[~np.eye(co.shape[0], dtype=bool)]
    assert set(off) == {1}


def test_pg_2_4_shape():
    M = pg_lines(GeometrySpec("PG", 2, 2))
    assert M.shape == (21, 21)
    assert set(M.row_weights()) == {5}


def test_pg_5_2_matches_subspace_enumeration():
    M = pg_lines(GeometrySpec("PG", 5, 1))
    assert M.nrows == len(two_dim_subspaces_gf2(6)) == 651
    assert M.ncols == 63


def test_generation_is_deterministic():
    for spec in [GeometrySpec("EG", 3, 2), GeometrySpec("PG", 3, 2)]:
        assert generate(spec) == generate(spec)


def test_no_duplicate_rows():
    for spec in [GeometrySpec("EG", 2, 3), GeometrySpec("PG", 2, 3)]:
        M = generate(spec)
        assert len({r.tobytes() for r in M.words}) == M.nrows


def test_ceiling_guard():
    with pytest.raises(GeometryTooLarge):
        eg_lines(GeometrySpec("EG", 3, 6))
    with pytest.raises(GeometryTooLarge):
        pg_lines(GeometrySpec("PG", 2, 3), max_points=50)


def test_bad_specs():
    with pytest.raises(ValueError):
        GeometrySpec("RS", 2, 2)
    with pytest.raises(ValueError):
        GeometrySpec("EG", 1, 2)
    with pytest.raises(ValueError):
        eg_lines(GeometrySpec("PG", 2, 2))


def test_stack_identity_and_dedupe():
    M = eg_lines(GeometrySpec("EG", 2, 2))
    b1 = stack([M])
    assert b1.matrix == M and len(b1.sources) == 1
    b2 = stack([M, M])
    assert b2.matrix == M
    assert [(s, e) for _, s, e in b2.sources] == [(0, 15), (15, 15)]
    assert b2.rank_cache == rank(M)


def test_stack_mismatch_rejected():
    with pytest.raises(ValueError):
        stack([BitMatrix.identity(3), BitMatrix.identity(4)])
    with pytest.raises(ValueError):
        stack([])


def test_stack_eg_and_pg_63_columns():
    eg = generate(GeometrySpec("EG", 3, 2))
    pg = generate(GeometrySpec("PG", 5, 1))
    b = build_bundle([GeometrySpec("EG", 3, 2), GeometrySpec("PG", 5, 1)])
    # EG rows have weight 4, PG rows weight 3, so nothing can coincide
    assert b.nrows == eg.nrows + pg.nrows == 966
    assert b.rank_cache <= 63
    assert b.rank_cache >= max(rank(eg), rank(pg))
    ranges = [(s, e) for _, s, e in b.sources]
    assert ranges == [(0, 315), (315, 966)]


def test_bundle_row_count_far_exceeds_rank(eg32):
    assert eg32.nrows == 315
    assert eg32.nrows > 6 * eg32.rank_cache
