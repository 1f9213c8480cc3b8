"""Bit-stream sources: LCG, ChaCha20 keystream, and external file ingest.

Every generator is a pure function of its parameter block, so a stream
can be replayed bit-identically from a recorded spec. External
(e.g. quantum-hardware) data enters only as files in the formats of
:mod:`rngbench.bitstream`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .bitstream import BitStream, ParameterError, read_file

LCG = "lcg"
CHACHA20 = "chacha20"
EXTERNAL = "external"


class CapacityError(Exception):
    """Requested output exceeds a generator's counter space."""


# Well-known full-period (Hull-Dobell) constants: set 1 is the
# Numerical Recipes pair, set 2 the Borland C pair.
DEFAULT_LCG_SETS = {
    "a1c1": (1664525, 1013904223),
    "a2c2": (22695477, 1),
}


@dataclass(frozen=True)
class LcgParams:
    """Parameters of X_{n+1} = (a*X_n + c) mod 2^k."""

    a: int
    c: int
    k: int
    x0: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= 32:
            raise ParameterError(f"modulus exponent k={self.k} outside 1..32")
        m = 1 << self.k
        for name in ("a", "c", "x0"):
            v = getattr(self, name)
            if not 0 <= v < m:
                raise ParameterError(f"{name}={v} not below 2^{self.k}")

    @property
    def modulus(self) -> int:
        return 1 << self.k


@dataclass(frozen=True)
class ChaChaParams:
    """ChaCha20 keystream parameters (IETF layout: 96-bit nonce, 32-bit counter)."""

    key: bytes
    nonce: bytes
    initial_counter: int = 0
    rounds: int = field(default=20)

    def __post_init__(self):
        if len(self.key) != 32:
            raise ParameterError("key must be 32 bytes")
        if len(self.nonce) != 12:
            raise ParameterError("nonce must be 12 bytes")
        if not 0 <= self.initial_counter < 2**32:
            raise ParameterError("initial_counter must fit 32 bits")
        if self.rounds != 20:
            # ChaCha8/12 are deliberately unsupported.
            raise ParameterError("only 20 rounds supported")


@dataclass(frozen=True)
class SourceSpec:
    """A named stream request: generator kind + parameter block + length."""

    label: str
    kind: str
    requested_bits: int
    lcg: LcgParams | None = None
    chacha: ChaChaParams | None = None
    path: str | None = None
    file_format: str = "packed"

    def __post_init__(self):
        blocks = {
            LCG: self.lcg is not None,
            CHACHA20: self.chacha is not None,
            EXTERNAL: self.path is not None,
        }
        if self.kind not in blocks:
            raise ParameterError(f"unknown source kind {self.kind!r}")
        if not blocks[self.kind] or sum(blocks.values()) != 1:
            raise ParameterError(
                f"source {self.label!r}: exactly one parameter block must match kind"
            )
        if self.requested_bits < 0:
            raise ParameterError("requested_bits must be >= 0")


def lcg_next(state: int, p: LcgParams) -> int:
    """One LCG step: (a*state + c) mod 2^k."""
    return (p.a * state + p.c) & (p.modulus - 1)


def lcg_stream(p: LcgParams, nbits: int) -> BitStream:
    """Concatenate successive LCG states, k bits each MSB-first.

    Emission starts at X_1 (the seed itself is not emitted) and the
    concatenation is truncated to exactly ``nbits``.
    """
    if nbits < 0:
        raise ParameterError("nbits must be >= 0")
    nstates = -(-nbits // p.k)
    states = np.empty(nstates, dtype=np.uint64)
    x = p.x0
    mask = p.modulus - 1
    for i in range(nstates):
        x = (p.a * x + p.c) & mask
        states[i] = x
    shifts = np.arange(p.k - 1, -1, -1, dtype=np.uint64)
    bits = ((states[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return BitStream(bits.reshape(-1)[:nbits])


_CHACHA_CONST = np.array(
    [0x61707865, 0x3320646E, 0x79622D32, 0x6B206574], dtype=np.uint32
)


def _rotl(x: np.ndarray, r: int) -> np.ndarray:
    return (x << np.uint32(r)) | (x >> np.uint32(32 - r))


def _quarter(x: np.ndarray, a: int, b: int, c: int, d: int) -> None:
    x[a] += x[b]; x[d] = _rotl(x[d] ^ x[a], 16)
    x[c] += x[d]; x[b] = _rotl(x[b] ^ x[c], 12)
    x[a] += x[b]; x[d] = _rotl(x[d] ^ x[a], 8)
    x[c] += x[d]; x[b] = _rotl(x[b] ^ x[c], 7)


def quarter_round(state: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    """One ARX quarter-round on four 32-bit words (for cross-checking)."""
    x = np.array(state, dtype=np.uint32).reshape(4, 1)
    _quarter(x, 0, 1, 2, 3)
    return tuple(int(v) for v in x[:, 0])


def _chacha20_blocks(p: ChaChaParams, counters: np.ndarray) -> bytes:
    """Keystream bytes for the given block counters (vectorized)."""
    nb = counters.size
    key_words = np.frombuffer(p.key, dtype="<u4").astype(np.uint32)
    nonce_words = np.frombuffer(p.nonce, dtype="<u4").astype(np.uint32)
    init = np.empty((16, nb), dtype=np.uint32)
    init[0:4] = _CHACHA_CONST[:, None]
    init[4:12] = key_words[:, None]
    init[12] = counters.astype(np.uint32)
    init[13:16] = nonce_words[:, None]
    x = init.copy()
    for _ in range(10):
        _quarter(x, 0, 4, 8, 12)
        _quarter(x, 1, 5, 9, 13)
        _quarter(x, 2, 6, 10, 14)
        _quarter(x, 3, 7, 11, 15)
        _quarter(x, 0, 5, 10, 15)
        _quarter(x, 1, 6, 11, 12)
        _quarter(x, 2, 7, 8, 13)
        _quarter(x, 3, 4, 9, 14)
    x += init
    # Per block: 16 words little-endian -> 64 bytes.
    return np.ascontiguousarray(x.T).astype("<u4").tobytes()


def chacha20_block(p: ChaChaParams, counter: int) -> BitStream:
    """One 512-bit ChaCha20 block, bytes expanded MSB-first into bits."""
    if not 0 <= counter < 2**32:
        raise ParameterError("counter must fit 32 bits")
    payload = _chacha20_blocks(p, np.array([counter], dtype=np.uint64))
    return BitStream(np.unpackbits(np.frombuffer(payload, dtype=np.uint8)))


def chacha20_keystream_bytes(p: ChaChaParams, nbytes: int) -> bytes:
    """First ``nbytes`` of the keystream starting at ``initial_counter``."""
    nblocks = -(-nbytes // 64)
    if p.initial_counter + nblocks > 2**32:
        raise CapacityError("32-bit block counter would overflow")
    counters = p.initial_counter + np.arange(nblocks, dtype=np.uint64)
    return _chacha20_blocks(p, counters)[:nbytes]


def chacha20_stream(p: ChaChaParams, nbits: int) -> BitStream:
    """ChaCha20 keystream truncated to ``nbits`` bits."""
    if nbits < 0:
        raise ParameterError("nbits must be >= 0")
    if nbits == 0:
        return BitStream(np.array([], dtype=np.uint8))
    payload = chacha20_keystream_bytes(p, -(-nbits // 8))
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    return BitStream(bits[:nbits])


def ingest_external(path: str, format: str, label: str) -> tuple[BitStream, str]:
    """Read an externally produced dump, returning (stream, provenance label)."""
    return read_file(path, format), label


def mt19937_bits(seed_value: int, nbits: int) -> BitStream:
    """Deterministic Mersenne-Twister bit-stream from a recorded seed.

    Used for extractor seeds and as the complexity-reference stream;
    bytes are drawn with ``random.Random`` (MT19937) and expanded
    MSB-first.
    """
    rng = random.Random(seed_value)
    payload = bytes(rng.getrandbits(8) for _ in range(-(-nbits // 8)))
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    return BitStream(bits[:nbits])


def generate(spec: SourceSpec) -> tuple[BitStream, str]:
    """Produce the stream a SourceSpec describes, with its provenance label."""
    if spec.kind == LCG:
        return lcg_stream(spec.lcg, spec.requested_bits), spec.label
    if spec.kind == CHACHA20:
        return chacha20_stream(spec.chacha, spec.requested_bits), spec.label
    stream, label = ingest_external(spec.path, spec.file_format, spec.label)
    if spec.requested_bits and stream.length > spec.requested_bits:
        stream = stream.prefix(spec.requested_bits)
    return stream, label
