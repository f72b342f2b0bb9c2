"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the env flag is irrelevant here.
Each kernel is warmed up once (this triggers JIT compilation) before timing;
the reported figure is the best of ``--repeat`` runs.
"""

import argparse
import time

import numpy as np

from ldpc_anchor.kernels import _numba, _numpy
from ldpc_anchor.decode import BitFlipDecoder
from ldpc_anchor.geometry import GeometrySpec, build_bundle
from ldpc_anchor.gf2 import kernel_basis, pack


def best_of(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    big = build_bundle([GeometrySpec("EG", 3, 3)])  # 4599 x 511
    mid = build_bundle([GeometrySpec("EG", 3, 2)])  # 315 x 63
    rng = np.random.default_rng(1)

    words = big.matrix.words
    vs = [pack(rng.integers(0, 2, big.n, dtype=np.uint8)) for _ in range(50)]

    dec = BitFlipDecoder(mid.matrix)
    G = np.stack(kernel_basis(mid.matrix))
    ys = []
    for _ in range(200):
        y = (rng.integers(0, 2, G.shape[0], dtype=np.uint8) @ G) % 2
        y[rng.choice(mid.n, 8, replace=False)] ^= 1
        ys.append(np.ascontiguousarray(y, dtype=np.uint8))

    small = rng.integers(0, 2, (30, 20), dtype=np.uint8)
    r = rng.integers(0, 2, 20, dtype=np.uint8)
    orth = (small @ r) % 2 == 0
    zero_rows = pack(small[orth])[:, 0].copy()
    one_rows = pack(small[~orth])[:, 0].copy()

    return {
        "rank EG(3,2^3)-I 4599x511": lambda k: k.rank(words, big.n),
        "syndrome x50 4599x511": lambda k: [k.row_parity(words, v) for v in vs],
        "bit-flip x200 EG(3,2^2)-I": lambda k: [
            k.bitflip_decode(dec._ptr, dec._idx, mid.n, y, 50, 0.5) for y in ys
        ],
        "enumerate |S| n=20": lambda k: k.count_candidates(zero_rows, one_rows, 20),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<28} {'numpy [s]':>11} {'numba [s]':>11} {'speedup':>8}")
    for name, fn in cases().items():
        t_np = best_of(lambda: fn(_numpy), args.repeat)
        t_nb = best_of(lambda: fn(_numba), args.repeat)
        print(f"{name:<28} {t_np:>11.5f} {t_nb:>11.5f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
