"""Backend dispatch for the hot GF(2) kernels.

The numba backend is used when numba imports cleanly. Setting the
environment variable ``LDPC_ANCHOR_NO_JIT=1`` before import selects the
pure-numpy implementations instead. Both backends are importable directly
as :mod:`ldpc_anchor.kernels._numpy` / :mod:`ldpc_anchor.kernels._numba`.
"""

import os

from . import _numpy

_DISABLED = os.environ.get("LDPC_ANCHOR_NO_JIT", "").strip().lower() not in ("", "0", "false", "no")

if _DISABLED:
    impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _numba as impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba missing
        impl = _numpy
        BACKEND = "numpy"

parity64 = impl.parity64
row_parity = impl.row_parity
rank = impl.rank
rref = impl.rref
scan_until_rank = impl.scan_until_rank
bitflip_decode = impl.bitflip_decode
count_candidates = impl.count_candidates

__all__ = [
    "BACKEND",
    "parity64",
    "row_parity",
    "rank",
    "rref",
    "scan_until_rank",
    "bitflip_decode",
    "count_candidates",
]
