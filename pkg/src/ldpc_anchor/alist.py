"""Reading and writing matrices in MacKay's alist format, plus bundle sidecars.

Layout (all indices 1-based, lists zero-padded to the maximum weight)::

    ncols nrows
    max_col_weight max_row_weight
    <ncols column weights>
    <nrows row weights>
    <ncols lines: rows holding a one in that column>
    <nrows lines: columns holding a one in that row>
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .geometry import BaseMatrixBundle, GeometrySpec
from .gf2 import BitMatrix


class AlistFormatError(ValueError):
    pass


def _line(values, width: int) -> str:
    vals = list(values) + [0] * (width - len(values))
    return " ".join(str(v) for v in vals)


def dumps(M: BitMatrix) -> str:
    d = M.dense()
    rows = [np.flatnonzero(r) + 1 for r in d]
    cols = [np.flatnonzero(c) + 1 for c in d.T]
    max_c = max((len(c) for c in cols), default=0)
    max_r = max((len(r) for r in rows), default=0)
    out = [
        f"{M.ncols} {M.nrows}",
        f"{max_c} {max_r}",
        " ".join(str(len(c)) for c in cols),
        " ".join(str(len(r)) for r in rows),
    ]
    out += [_line(c.tolist(), max_c) for c in cols]
    out += [_line(r.tolist(), max_r) for r in rows]
    return "\n".join(out) + "\n"


def loads(text: str) -> BitMatrix:
    lines = text.splitlines()
    try:
        ncols, nrows = (int(x) for x in lines[0].split())
        int_lines = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except (IndexError, ValueError) as exc:
        raise AlistFormatError(f"bad alist header: {exc}") from None
    if ncols < 1 or nrows < 0:
        raise AlistFormatError("alist dimensions out of range")
    # zero-weight lists are blank lines and may have been stripped at EOF
    int_lines += [[]] * max(0, 3 + ncols + nrows - len(int_lines))
    col_w = int_lines[1]
    row_w = int_lines[2]
    body = int_lines[3:]
    if len(col_w) != ncols or len(row_w) != nrows:
        raise AlistFormatError("weight lists do not match the header")
    if len(body) < ncols + nrows:
        raise AlistFormatError("alist body is truncated")
    dense = np.zeros((nrows, ncols), dtype=np.uint8)
    for i in range(nrows):
        idx = [x for x in body[ncols + i] if x]
        if len(idx) != row_w[i] or any(x < 1 or x > ncols for x in idx):
            raise AlistFormatError(f"row {i + 1} does not match its weight or range")
        dense[i, np.asarray(idx, dtype=np.int64) - 1] = 1
    for j in range(ncols):
        idx = sorted(x for x in body[j] if x)
        if idx != (np.flatnonzero(dense[:, j]) + 1).tolist() or len(idx) != col_w[j]:
            raise AlistFormatError(f"column {j + 1} list disagrees with the row lists")
    return BitMatrix.from_dense(dense) if nrows else BitMatrix.empty(ncols)


def write(path, M: BitMatrix) -> None:
    Path(path).write_text(dumps(M))


def read(path) -> BitMatrix:
    return loads(Path(path).read_text())


def sidecar_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.name + ".json")


def write_bundle(path, bundle: BaseMatrixBundle, extra: dict | None = None) -> Path:
    """Write ``bundle`` as an alist file plus a JSON provenance sidecar."""
    write(path, bundle.matrix)
    meta = bundle.provenance()
    if extra:
        meta.update(extra)
    side = sidecar_path(path)
    side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return side


def read_bundle(path) -> BaseMatrixBundle:
    """Load an alist file; the sidecar, if present, restores provenance."""
    M = read(path)
    side = sidecar_path(path)
    if not side.exists():
        return BaseMatrixBundle(M, ((str(Path(path).name), 0, M.nrows),))
    try:
        meta = json.loads(side.read_text())
        sources = []
        for src in meta["sources"]:
            start, stop = src["rows"]
            if "family" in src:
                label = GeometrySpec(src["family"], src["m"], src["s"], src.get("type1", True))
            else:
                label = src["label"]
            sources.append((label, start, stop))
    except (KeyError, ValueError, TypeError) as exc:
        raise AlistFormatError(f"bad bundle sidecar {side}: {exc}") from None
    if meta.get("nrows") != M.nrows or meta.get("ncols") != M.ncols:
        raise AlistFormatError(f"sidecar {side} does not describe {path}")
    bundle = BaseMatrixBundle(M, tuple(sources))
    if "rank" in meta and meta["rank"] != bundle.rank_cache:
        raise AlistFormatError(f"sidecar {side} records rank {meta['rank']}, matrix has {bundle.rank_cache}")
    return bundle
