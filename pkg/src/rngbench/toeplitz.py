"""Two-universal post-processing via block-wise Toeplitz hashing over GF(2).

The raw stream is cut into n-bit blocks; each block is multiplied by the
same m x n Toeplitz matrix (defined by n+m-1 seed bits) and the m-bit
outputs are concatenated. Entry convention: T[i][j] = seed[(n-1)+i-j],
i.e. the first row is seed[n-1]..seed[0] and the first column continues
seed[n]..seed[n+m-2].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import matmul_toeplitz

from .bitstream import BitStream, ParameterError


class InputError(Exception):
    """Stream unsuitable for extraction (e.g. shorter than one block)."""


@dataclass(frozen=True)
class ToeplitzSpec:
    """Extractor geometry plus the seed bits that define the matrix."""

    n: int
    m: int
    seed: BitStream
    seed_provenance: str = ""

    def __post_init__(self):
        if not 0 < self.m < self.n:
            raise ParameterError(f"need 0 < m < n, got n={self.n} m={self.m}")
        if self.seed.length != self.n + self.m - 1:
            raise ParameterError(
                f"seed length {self.seed.length} != n+m-1 = {self.n + self.m - 1}"
            )


@dataclass(frozen=True)
class ExtractionReport:
    input_bits: int
    output_bits: int
    blocks_processed: int
    discarded_tail_bits: int
    seed_provenance: str = ""

    @property
    def compression_ratio(self) -> float:
        return self.output_bits / self.input_bits if self.input_bits else 0.0

    def as_dict(self) -> dict:
        return {
            "input_bits": self.input_bits,
            "output_bits": self.output_bits,
            "blocks_processed": self.blocks_processed,
            "discarded_tail_bits": self.discarded_tail_bits,
            "compression_ratio": self.compression_ratio,
            "seed_provenance": self.seed_provenance,
        }


def toeplitz_entry(spec: ToeplitzSpec, i: int, j: int) -> int:
    """Matrix entry T[i][j]; constant along diagonals by construction."""
    if not 0 <= i < spec.m:
        raise ParameterError(f"row {i} out of range for m={spec.m}")
    if not 0 <= j < spec.n:
        raise ParameterError(f"column {j} out of range for n={spec.n}")
    return spec.seed[(spec.n - 1) + i - j]


def _hash_blocks(spec: ToeplitzSpec, blocks: np.ndarray) -> np.ndarray:
    """GF(2) Toeplitz multiply of many n-bit blocks at once.

    The integer Toeplitz product is computed by FFT (exact in double
    precision for these sizes: entries are 0/1 so every coefficient is
    at most n < 2^53), rounded, then reduced mod 2.
    """
    seed = spec.seed.bits
    col = seed[spec.n - 1 : spec.n + spec.m - 1].astype(np.float64)
    row = seed[spec.n - 1 :: -1].astype(np.float64)
    prod = matmul_toeplitz((col, row), blocks.astype(np.float64).T)
    return (np.rint(prod).astype(np.int64) & 1).astype(np.uint8).T


def extract_block(spec: ToeplitzSpec, x: BitStream) -> BitStream:
    """Hash one n-bit block to m bits: y_i = XOR_j T[i][j] AND x_j."""
    if x.length != spec.n:
        raise ParameterError(f"block length {x.length} != n={spec.n}")
    return BitStream(_hash_blocks(spec, x.bits[None, :])[0])


def extract_block_naive(spec: ToeplitzSpec, x: BitStream) -> BitStream:
    """Double-loop reference for the optimized path (small n, m only)."""
    if x.length != spec.n:
        raise ParameterError(f"block length {x.length} != n={spec.n}")
    out = np.zeros(spec.m, dtype=np.uint8)
    for i in range(spec.m):
        acc = 0
        for j in range(spec.n):
            acc ^= toeplitz_entry(spec, i, j) & x[j]
        out[i] = acc
    return BitStream(out)


def extract_stream(
    spec: ToeplitzSpec, s: BitStream, target_bits: int | None = None
) -> tuple[BitStream, ExtractionReport]:
    """Hash a whole stream block by block.

    The tail shorter than one block is discarded (zero-padding would
    bias the final output block) and counted in the report. When
    ``target_bits`` is given the concatenated output is truncated to it.
    """
    if s.length < spec.n:
        raise InputError(
            f"stream of {s.length} bits shorter than one block (n={spec.n})"
        )
    nblocks = s.length // spec.n
    tail = s.length - nblocks * spec.n
    blocks = s.bits[: nblocks * spec.n].reshape(nblocks, spec.n)
    out = _hash_blocks(spec, blocks).reshape(-1)
    if target_bits is not None:
        if target_bits < 0:
            raise ParameterError("target_bits must be >= 0")
        out = out[:target_bits]
    report = ExtractionReport(
        input_bits=s.length,
        output_bits=int(out.size),
        blocks_processed=nblocks,
        discarded_tail_bits=tail,
        seed_provenance=spec.seed_provenance,
    )
    return BitStream(out), report
