import json

import numpy as np
import pytest

from ldpc_anchor import alist
from ldpc_anchor.geometry import GeometrySpec, build_bundle
from ldpc_anchor.gf2 import BitMatrix


def test_small_matrix_text():
    M = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert alist.dumps(M) == "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n"


def test_roundtrip(rng, eg32):
    for M in [eg32.matrix, BitMatrix.from_dense(rng.integers(0, 2, (9, 70)).astype(np.uint8))]:
        assert alist.loads(alist.dumps(M)) == M


def test_roundtrip_empty_matrix():
    M = BitMatrix.empty(5)
    assert alist.loads(alist.dumps(M)) == M
    assert alist.loads(alist.dumps(M).rstrip("\n")) == M


def test_reads_unpadded_lists():
    text = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n"
    assert alist.loads(text).dense().tolist() == [[1, 1, 0], [0, 1, 1]]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3\n",
        "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 4\n",  # index out of range
        "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 3\n2 3\n",  # column / row lists disagree
        "3 2\n2 2\n1 2\n2 2\n",  # weight list too short
    ],
)
def test_malformed(text):
    with pytest.raises(alist.AlistFormatError):
        alist.loads(text)


def test_bundle_sidecar_roundtrip(tmp_path):
    specs = [GeometrySpec("EG", 3, 2), GeometrySpec("PG", 5, 1)]
    b = build_bundle(specs)
    path = tmp_path / "base.alist"
    side = alist.write_bundle(path, b)
    meta = json.loads(side.read_text())
    assert meta["rank"] == b.rank_cache
    assert meta["sources"][1]["rows"] == [315, 966]
    back = alist.read_bundle(path)
    assert back.matrix == b.matrix
    assert [lab for lab, _, _ in back.sources] == specs
    assert back.rank_cache == b.rank_cache


def test_bundle_without_sidecar(tmp_path):
    path = tmp_path / "m.alist"
    alist.write(path, BitMatrix.identity(4))
    b = alist.read_bundle(path)
    assert b.sources == (("m.alist", 0, 4),)


def test_sidecar_mismatch(tmp_path):
    path = tmp_path / "m.alist"
    alist.write_bundle(path, build_bundle([GeometrySpec("EG", 2, 2)]))
    alist.write(path, BitMatrix.identity(15))
    with pytest.raises(alist.AlistFormatError):
        alist.read_bundle(path)
