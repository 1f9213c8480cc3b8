"""Canonical bit-stream representation and file I/O.

A :class:`BitStream` is an immutable, exact-length sequence of bits. All
modules in this package exchange bits through it, so the bit-order
convention lives here and nowhere else: within a byte (and within an
m-bit word) the most significant bit comes first.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

PACKED = "packed"
ASCII = "ascii"
FORMATS = (PACKED, ASCII)


class BitStreamError(Exception):
    """Base error for bit-stream handling."""


class FormatError(BitStreamError):
    """Malformed input text or corrupt/missing file descriptor."""


class ParameterError(BitStreamError):
    """Out-of-range parameter (word size, index, ...)."""


@dataclass(frozen=True)
class BitStream:
    """Immutable finite sequence of bits.

    Parameters
    ----------
    bits : ndarray of uint8
        One entry per bit, each 0 or 1. The array is copied and frozen
        at construction; ``length`` is always ``bits.size`` exactly,
        never rounded to bytes.
    """

    bits: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ParameterError("bits must be one-dimensional")
        if arr.size and arr.max() > 1:
            raise ParameterError("bits must be 0 or 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def length(self) -> int:
        return int(self.bits.size)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise ParameterError(f"bit index {i} out of range for length {self.length}")
        return int(self.bits[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitStream):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.length, self.bits.tobytes()))

    def prefix(self, nbits: int) -> "BitStream":
        if not 0 <= nbits <= self.length:
            raise ParameterError(f"prefix length {nbits} out of range")
        return BitStream(self.bits[:nbits])

    def concat(self, other: "BitStream") -> "BitStream":
        return BitStream(np.concatenate([self.bits, other.bits]))

    def to_ascii(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)


@dataclass(frozen=True)
class WordView:
    """Non-overlapping m-bit words of a stream, MSB-first.

    Trailing bits that do not fill a whole word are discarded; the word
    count is always ``floor(length / word_size)``.
    """

    word_size: int
    words: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.words.size)


def from_ascii(text: str) -> BitStream:
    """Parse a string of '0'/'1' characters into a BitStream.

    Whitespace is skipped; any other character raises
    :class:`FormatError` naming its position.
    """
    out = []
    for pos, ch in enumerate(text):
        if ch == "0":
            out.append(0)
        elif ch == "1":
            out.append(1)
        elif ch.isspace():
            continue
        else:
            raise FormatError(f"invalid character {ch!r} at position {pos}")
    return BitStream(np.array(out, dtype=np.uint8))


def to_bytes(s: BitStream) -> tuple[bytes, int]:
    """Pack a stream into bytes, MSB-first within each byte.

    Returns ``(payload, remainder)`` where ``remainder`` counts the
    trailing bits that did not fill a byte. Those bits are *not*
    included in the payload; callers that need them must handle the
    tail explicitly.
    """
    nbytes = s.length // 8
    head = s.bits[: nbytes * 8]
    return np.packbits(head).tobytes(), s.length - nbytes * 8


def from_bytes(payload: bytes, bit_length: int | None = None) -> BitStream:
    """Unpack bytes into a stream, MSB-first within each byte.

    ``bit_length`` trims the result (the last byte may be partial);
    it must not exceed ``8 * len(payload)``.
    """
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    if bit_length is None:
        bit_length = bits.size
    if bit_length > bits.size:
        raise FormatError(
            f"declared length {bit_length} exceeds payload capacity {bits.size}"
        )
    return BitStream(bits[:bit_length])


def words(s: BitStream, m: int) -> WordView:
    """Split a stream into non-overlapping m-bit words, MSB-first."""
    if not 1 <= m <= 32:
        raise ParameterError(f"word size {m} outside 1..32")
    count = s.length // m
    if count == 0:
        return WordView(m, np.array([], dtype=np.uint64))
    head = s.bits[: count * m].astype(np.uint64).reshape(count, m)
    weights = (np.uint64(1) << np.arange(m - 1, -1, -1, dtype=np.uint64))
    return WordView(m, head @ weights)


def _meta_path(path: str) -> str:
    return path + ".meta"


def write_file(s: BitStream, path: str, format: str = PACKED,
               source_label: str = "") -> None:
    """Write a stream to disk.

    Packed files get a JSON sidecar descriptor (``path + ".meta"``)
    recording the exact bit length, a label, a UTC timestamp and the
    payload's SHA-256, so a read can verify integrity and recover the
    non-byte-aligned length.
    """
    if format == ASCII:
        with open(path, "w") as f:
            f.write(s.to_ascii())
        return
    if format != PACKED:
        raise ParameterError(f"unknown format {format!r}")
    payload = np.packbits(s.bits).tobytes()
    with open(path, "wb") as f:
        f.write(payload)
    meta = {
        "bit_length": s.length,
        "source_label": source_label,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "sha256_of_payload": hashlib.sha256(payload).hexdigest(),
    }
    with open(_meta_path(path), "w") as f:
        json.dump(meta, f, indent=2)
        f.write("\n")


def read_file(path: str, format: str = PACKED) -> BitStream:
    """Read a stream written by :func:`write_file`.

    For packed files the sidecar descriptor is mandatory; a missing or
    inconsistent descriptor (bad hash, length exceeding the payload) is
    a :class:`FormatError`.
    """
    if format == ASCII:
        with open(path) as f:
            return from_ascii(f.read())
    if format != PACKED:
        raise ParameterError(f"unknown format {format!r}")
    with open(path, "rb") as f:
        payload = f.read()
    mpath = _meta_path(path)
    if not os.path.exists(mpath):
        raise FormatError(f"missing descriptor {mpath}")
    try:
        with open(mpath) as f:
            meta = json.load(f)
        bit_length = int(meta["bit_length"])
        digest = meta["sha256_of_payload"]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise FormatError(f"corrupt descriptor {mpath}: {e}") from e
    if bit_length > 8 * len(payload):
        raise FormatError(
            f"descriptor length {bit_length} exceeds payload of {len(payload)} bytes"
        )
    if hashlib.sha256(payload).hexdigest() != digest:
        raise FormatError(f"payload hash mismatch for {path}")
    return from_bytes(payload, bit_length)
