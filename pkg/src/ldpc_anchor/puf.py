"""Helper-data schemes for PUF key reproduction.

Two schemes are provided:

* code offset: store ``h = c ^ r`` for a random codeword ``c`` of a fixed
  code; reproduce by decoding ``r' ^ h`` and adding ``h`` back.
* codeword anchor: build a code that contains ``r`` itself; only the code
  is stored and reproduction is a plain decode of ``r'``.

Seeds are explicit everywhere. Per-trial generators are derived as
``numpy.random.default_rng([seed, index])``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .anchor import AnchorResult, select_orthogonal, select_until_rank
from .decode import DEFAULT_MAX_ITERS, BitFlipDecoder
from .entropy import EntropyCertificate, certify
from .geometry import BaseMatrixBundle
from .gf2 import BitMatrix, as_bits, bits_to_hex, hex_to_bits, kernel_basis, syndrome, weight

DEFAULT_K_MIN = 128


class ReproductionError(RuntimeError):
    """The decoder did not converge, so no key is returned."""


def derive_rng(seed: int, index: int | None = None) -> np.random.Generator:
    return np.random.default_rng(seed if index is None else [seed, index])


def sample_response(n: int, seed: int) -> np.ndarray:
    """Uniform word of length ``n``, deterministic in ``seed``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return as_bits(derive_rng(seed).integers(0, 2, size=n, dtype=np.uint8))


class ChannelModel:
    """Binary symmetric re-extraction noise with its own seeded stream."""

    def __init__(self, p: float, seed: int):
        if not 0.0 <= p < 0.5:
            raise ValueError("crossover probability must lie in [0, 0.5)")
        self.p = float(p)
        self.seed = seed
        self._rng = derive_rng(seed)

    def errors(self, n: int) -> np.ndarray:
        return (self._rng.random(n) < self.p).astype(np.uint8)


def reextract(r, channel: ChannelModel) -> np.ndarray:
    r = as_bits(r)
    return as_bits(r ^ channel.errors(r.size))


@dataclass
class CodeOffsetHelper:
    code: BitMatrix
    offset: np.ndarray
    max_iters: int = DEFAULT_MAX_ITERS
    _decoder: BitFlipDecoder | None = field(default=None, repr=False, compare=False)

    scheme = "code-offset"

    @property
    def decoder(self) -> BitFlipDecoder:
        if self._decoder is None:
            self._decoder = BitFlipDecoder(self.code, self.max_iters)
        return self._decoder


@dataclass
class AnchorHelper:
    code: BitMatrix
    max_iters: int = DEFAULT_MAX_ITERS
    _decoder: BitFlipDecoder | None = field(default=None, repr=False, compare=False)

    scheme = "anchor"

    @property
    def decoder(self) -> BitFlipDecoder:
        if self._decoder is None:
            self._decoder = BitFlipDecoder(self.code, self.max_iters)
        return self._decoder


def random_codeword(code: BitMatrix, rng: np.random.Generator) -> np.ndarray:
    basis = kernel_basis(code)
    if not basis:
        raise ValueError("code has dimension 0")
    msg = rng.integers(0, 2, size=len(basis), dtype=np.uint8)
    G = np.stack(basis)
    return as_bits((msg @ G) % 2)


def code_offset_init(r, code: BitMatrix, seed: int, max_iters: int = DEFAULT_MAX_ITERS) -> CodeOffsetHelper:
    r = as_bits(r, code.ncols)
    c = random_codeword(code, derive_rng(seed))
    return CodeOffsetHelper(code, as_bits(c ^ r), max_iters)


def code_offset_reproduce(r_prime, helper: CodeOffsetHelper) -> np.ndarray:
    if not isinstance(helper, CodeOffsetHelper):
        raise TypeError("code_offset_reproduce needs CodeOffsetHelper data")
    y = as_bits(r_prime, helper.code.ncols) ^ helper.offset
    out = helper.decoder.decode(y)
    if not out.converged:
        raise ReproductionError(f"decoder did not converge after {out.iterations} iterations")
    return as_bits(out.word ^ helper.offset)


def anchor_init(r, bundle: BaseMatrixBundle, k_target: int | None = None,
                max_iters: int = DEFAULT_MAX_ITERS) -> tuple[AnchorHelper, EntropyCertificate]:
    """Enroll ``r`` by anchoring it in a code built from ``bundle``.

    All orthogonal rows are kept unless ``k_target`` asks for the early-stop
    selection.
    """
    res = enroll_anchor(r, bundle, k_target)
    return AnchorHelper(res.selected, max_iters), certify(res)


def enroll_anchor(r, bundle: BaseMatrixBundle, k_target: int | None = None) -> AnchorResult:
    if k_target is None:
        return select_orthogonal(bundle, r)
    return select_until_rank(bundle, r, k_target)


def anchor_reproduce(r_prime, helper: AnchorHelper) -> np.ndarray:
    if not isinstance(helper, AnchorHelper):
        raise TypeError("anchor_reproduce needs AnchorHelper data")
    out = helper.decoder.decode(as_bits(r_prime, helper.code.ncols))
    if not out.converged:
        raise ReproductionError(f"decoder did not converge after {out.iterations} iterations")
    return out.word


def reproduce(r_prime, helper) -> np.ndarray:
    if isinstance(helper, AnchorHelper):
        return anchor_reproduce(r_prime, helper)
    return code_offset_reproduce(r_prime, helper)


def screen_device(cert: EntropyCertificate, k_min: int = DEFAULT_K_MIN) -> bool:
    """Accept a device only if its certified uncertainty reaches ``k_min`` bits."""
    return not cert.degenerate and cert.lower_bound >= k_min


# device records ------------------------------------------------------------

RECORD_VERSION = 1


def device_record(helper, certificate: EntropyCertificate | None = None, seeds: dict | None = None) -> dict:
    """JSON-ready description of an enrolled device.

    The code is stored inline as sparse rows; the code-offset scheme adds
    its offset as hex. The anchored scheme stores nothing else.
    """
    rec = {
        "record_version": RECORD_VERSION,
        "scheme": helper.scheme,
        "n": helper.code.ncols,
        "max_iters": helper.max_iters,
        "code": {"ncols": helper.code.ncols, "rows": helper.code.supports()},
        "seeds": dict(seeds or {}),
    }
    if isinstance(helper, CodeOffsetHelper):
        rec["offset"] = bits_to_hex(helper.offset)
    if certificate is not None:
        rec["certificate"] = certificate.to_dict()
    return rec


def helper_from_record(rec: dict):
    n = int(rec["n"])
    code = BitMatrix.from_supports(rec["code"]["rows"], int(rec["code"]["ncols"]))
    if code.ncols != n:
        raise ValueError("record code width does not match n")
    max_iters = int(rec.get("max_iters", DEFAULT_MAX_ITERS))
    scheme = rec["scheme"]
    if scheme == "anchor":
        if "offset" in rec:
            raise ValueError("anchored records carry no offset")
        return AnchorHelper(code, max_iters)
    if scheme == "code-offset":
        return CodeOffsetHelper(code, hex_to_bits(rec["offset"], n), max_iters)
    raise ValueError(f"unknown scheme {scheme!r}")


def certificate_from_record(rec: dict) -> EntropyCertificate | None:
    c = rec.get("certificate")
    return EntropyCertificate.from_dict(c) if c else None


def is_codeword(code: BitMatrix, v) -> bool:
    return not np.any(syndrome(code, v))


def response_is_degenerate(r) -> bool:
    r = as_bits(r)
    return weight(r) in (0, r.size)
