"""Random bit-stream test bench.

Generators (LCG, ChaCha20, external dumps), Toeplitz-hash
post-processing, a 15-test statistical battery, LZ-76 complexity and
Borel normality, plus a config-driven pipeline tying them together.
"""

__version__ = "0.1.0"

from .bitstream import BitStream, from_ascii, read_file, to_bytes, words, write_file  # noqa: F401
