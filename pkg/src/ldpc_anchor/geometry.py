"""Finite-geometry base decoding matrices.

Rows are line-point incidence vectors of Euclidean (EG) and projective
(PG) geometries over GF(2^s). Several such matrices of the same length are
stacked into a :class:`BaseMatrixBundle` whose row count far exceeds its
rank.

Coordinates and orderings
-------------------------
GF(2^s) elements are the integers ``0 .. 2^s - 1`` read as polynomials in
``x`` (bit ``i`` is the coefficient of ``x^i``), reduced modulo the
smallest irreducible polynomial of degree ``s`` (``x``, ``x^2+x+1``,
``x^3+x+1``, ``x^4+x+1``, ...).

A vector ``(a_0, ..., a_{d-1})`` over GF(2^s) is encoded as the integer
``sum(a_i << (s * i))``. EG points are ordered by this code; type-I
matrices drop the origin, so column ``j`` is the point with code ``j + 1``.
A PG point (a 1-dimensional subspace) is represented by the smallest code
among its non-zero scalar multiples, and points are ordered by that
representative. Lines (rows) are ordered lexicographically by their sorted
column index tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .gf2 import BitMatrix, rank

DEFAULT_MAX_POINTS = 1 << 16
DEFAULT_MAX_LINES = 1 << 20


class GeometryTooLarge(ValueError):
    """Requested geometry exceeds the configured size ceiling."""


@lru_cache(maxsize=None)
def smallest_irreducible(s: int) -> int:
    """Smallest irreducible binary polynomial of degree ``s``, as an int."""
    if s < 1:
        raise ValueError("field exponent must be >= 1")
    divisors = range(2, 1 << (s // 2 + 1))
    for poly in range(1 << s, 1 << (s + 1)):
        if all(_polymod(poly, d) for d in divisors):
            return poly
    raise AssertionError("unreachable")


def _polymod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


class GF2m:
    """Arithmetic in GF(2^s) via full multiplication tables."""

    def __init__(self, s: int):
        self.s = s
        self.q = 1 << s
        self.poly = smallest_irreducible(s)
        q = self.q
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                mul[a, b] = mul[b, a] = self._mul(a, b)
        self.mul = mul

    def _mul(self, a: int, b: int) -> int:
        out = 0
        while b:
            if b & 1:
                out ^= a
            b >>= 1
            a <<= 1
            if a & self.q:
                a ^= self.poly
        return out


@lru_cache(maxsize=8)
def _field(s: int) -> GF2m:
    return GF2m(s)


@dataclass(frozen=True)
class GeometrySpec:
    family: str
    m: int
    s: int
    type1: bool = True

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        if fam not in ("EG", "PG"):
            raise ValueError(f"unknown geometry family {self.family!r}")
        if self.m < 2:
            raise ValueError("geometry dimension m must be >= 2")
        if self.s < 1:
            raise ValueError("field exponent s must be >= 1")

    @property
    def q(self) -> int:
        return 1 << self.s

    @property
    def n_points(self) -> int:
        q, m = self.q, self.m
        if self.family == "EG":
            return q**m - 1 if self.type1 else q**m
        return (q ** (m + 1) - 1) // (q - 1)

    @property
    def n_lines(self) -> int:
        q, m = self.q, self.m
        if self.family == "EG":
            total = q ** (m - 1) * (q**m - 1) // (q - 1)
            return total - (q**m - 1) // (q - 1) if self.type1 else total
        pts = self.n_points
        return pts * (pts - 1) // (q * (q + 1))

    @property
    def row_weight(self) -> int:
        return self.q if self.family == "EG" else self.q + 1

    @property
    def label(self) -> str:
        suffix = "-I" if self.family == "EG" and self.type1 else ""
        return f"{self.family}({self.m},2^{self.s}){suffix}"

    def to_dict(self) -> dict:
        d = {"family": self.family, "m": self.m, "s": self.s}
        if self.family == "EG":
            d["type1"] = self.type1
        return d


def _guard(spec: GeometrySpec, max_points: int, max_lines: int) -> None:
    raw_points = spec.q ** spec.m if spec.family == "EG" else spec.n_points
    if raw_points > max_points:
        raise GeometryTooLarge(f"{spec.label} has {raw_points} points, ceiling is {max_points}")
    if spec.n_lines > max_lines:
        raise GeometryTooLarge(f"{spec.label} has {spec.n_lines} lines, ceiling is {max_lines}")


def _coords(codes: np.ndarray, dim: int, s: int) -> np.ndarray:
    """Split integer codes into (len, dim) coordinate arrays."""
    mask = (1 << s) - 1
    return np.stack([(codes >> (s * i)) & mask for i in range(dim)], axis=1)


def _encode(coords: np.ndarray, s: int) -> np.ndarray:
    shifts = s * np.arange(coords.shape[-1])
    return (coords << shifts).sum(axis=-1)


def _scale(F: GF2m, t: int, coords: np.ndarray) -> np.ndarray:
    return F.mul[t][coords]


def eg_lines(spec: GeometrySpec, max_points: int = DEFAULT_MAX_POINTS,
             max_lines: int = DEFAULT_MAX_LINES) -> BitMatrix:
    """Line-point incidence matrix of EG(m, 2^s)."""
    if spec.family != "EG":
        raise ValueError("eg_lines needs an EG spec")
    _guard(spec, max_points, max_lines)
    F = _field(spec.s)
    q, m, s = spec.q, spec.m, spec.s
    npts = q**m
    pts = _coords(np.arange(npts), m, s)

    # one representative direction per 1-dim subspace: smallest code among multiples
    dirs = []
    for b in range(1, npts):
        bc = pts[b]
        if min(int(_encode(_scale(F, t, bc), s)) for t in range(1, q)) == b:
            dirs.append(bc)

    lines = set()
    for bc in dirs:
        step = np.stack([_scale(F, t, bc) for t in range(q)])  # (q, m), t*b
        covered = np.zeros(npts, dtype=bool)
        for a in range(npts):
            if covered[a]:
                continue
            line = _encode(pts[a][None, :] ^ step, s)
            covered[line] = True
            lines.add(tuple(sorted(int(c) for c in line)))

    if spec.type1:
        lines = {ln for ln in lines if ln[0] != 0}
        supports = sorted(tuple(c - 1 for c in ln) for ln in lines)
        return BitMatrix.from_supports(supports, npts - 1)
    return BitMatrix.from_supports(sorted(lines), npts)


def _pg_points(F: GF2m, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Representative codes of PG(m, q) points plus code -> column map for every non-zero vector."""
    q, s = F.q, F.s
    nvec = q ** (m + 1)
    coords = _coords(np.arange(nvec), m + 1, s)
    rep = np.full(nvec, -1, dtype=np.int64)
    for v in range(1, nvec):
        if rep[v] >= 0:
            continue
        mult = [int(_encode(_scale(F, t, coords[v]), s)) for t in range(1, q)]
        r = min(mult)
        rep[mult] = r
    reps = np.unique(rep[1:])
    col_of_rep = {int(r): i for i, r in enumerate(reps)}
    column = np.full(nvec, -1, dtype=np.int64)
    column[1:] = [col_of_rep[int(r)] for r in rep[1:]]
    return coords, column


def pg_lines(spec: GeometrySpec, max_points: int = DEFAULT_MAX_POINTS,
             max_lines: int = DEFAULT_MAX_LINES) -> BitMatrix:
    """Line-point incidence matrix of PG(m, 2^s)."""
    if spec.family != "PG":
        raise ValueError("pg_lines needs a PG spec")
    _guard(spec, max_points, max_lines)
    F = _field(spec.s)
    q, m, s = spec.q, spec.m, spec.s
    coords, column = _pg_points(F, m)
    npts = spec.n_points
    # representative vector for each column
    rep_vec = np.zeros(npts, dtype=np.int64)
    for code in range(len(column) - 1, 0, -1):
        rep_vec[column[code]] = code

    lines = set()
    for i in range(npts):
        u = coords[rep_vec[i]]
        for j in range(i + 1, npts):
            v = coords[rep_vec[j]]
            # points of span{u, v}: u and v + t*u for all t
            pts = [i] + [int(column[int(_encode(v ^ _scale(F, t, u), s))]) for t in range(q)]
            pts.sort()
            if pts[0] == i and pts[1] == j:
                lines.add(tuple(pts))
    return BitMatrix.from_supports(sorted(lines), npts)


def generate(spec: GeometrySpec, **guards) -> BitMatrix:
    return eg_lines(spec, **guards) if spec.family == "EG" else pg_lines(spec, **guards)


@dataclass(frozen=True)
class BaseMatrixBundle:
    """Stacked base matrix plus where each block of rows came from.

    ``sources`` holds ``(label, start, stop)`` triples whose row ranges
    partition ``range(matrix.nrows)``; labels are a :class:`GeometrySpec` or
    a free-form string.
    """

    matrix: BitMatrix
    sources: tuple = ()
    rank_cache: int = field(default=-1)

    def __post_init__(self):
        if self.rank_cache < 0:
            object.__setattr__(self, "rank_cache", rank(self.matrix))

    @property
    def n(self) -> int:
        return self.matrix.ncols

    @property
    def nrows(self) -> int:
        return self.matrix.nrows

    def provenance(self) -> dict:
        srcs = []
        for label, start, stop in self.sources:
            entry = label.to_dict() if isinstance(label, GeometrySpec) else {"label": str(label)}
            entry["rows"] = [int(start), int(stop)]
            srcs.append(entry)
        return {"nrows": self.nrows, "ncols": self.n, "rank": self.rank_cache, "sources": srcs}


def stack(parts, labels=None) -> BaseMatrixBundle:
    """Concatenate matrices row-wise, dropping exact duplicate rows (first kept)."""
    parts = list(parts)
    if not parts:
        raise ValueError("stack needs at least one matrix")
    labels = list(labels) if labels is not None else [f"part{i}" for i in range(len(parts))]
    if len(labels) != len(parts):
        raise ValueError("one label per part is required")
    ncols = parts[0].ncols
    seen = set()
    keep_words = []
    sources = []
    for label, part in zip(labels, parts):
        if part.ncols != ncols:
            name = getattr(label, "label", label)
            raise ValueError(f"column mismatch: {name} has {part.ncols} columns, expected {ncols}")
        start = len(keep_words)
        for row in part.words:
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                keep_words.append(row)
        sources.append((label, start, len(keep_words)))
    if keep_words:
        matrix = BitMatrix(np.stack(keep_words), ncols)
    else:
        matrix = BitMatrix.empty(ncols)
    return BaseMatrixBundle(matrix, tuple(sources))


def build_bundle(specs, **guards) -> BaseMatrixBundle:
    """Generate each geometry and stack them in order."""
    specs = list(specs)
    return stack([generate(sp, **guards) for sp in specs], labels=specs)
