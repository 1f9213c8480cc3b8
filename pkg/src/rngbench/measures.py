"""Algorithmic randomness measures: LZ-76 complexity and Borel normality.

LZ-76 counts the phrases of the exhaustive history: scanning left to
right, the current phrase is extended while it already occurs as a
substring of everything before its last symbol (overlap into the phrase
itself is allowed); each failure closes a phrase, and the final partial
phrase counts as one. The phrase count C, normalized as C*log2(n)/n, is
the usual computable stand-in for Kolmogorov complexity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .bitstream import BitStream, words

# Recorded reference value for a Mersenne-Twister extractor-seed stream;
# exposed for reports that do not regenerate the reference stream.
MT_SEED_NORMALIZED = 1.382


class InputError(Exception):
    """Stream unsuitable for the requested measure."""


@dataclass(frozen=True)
class Lz76Report:
    phrase_count: int
    input_length: int
    normalized: float
    relative_to_seed: float | None = None
    seed_label: str = ""

    def as_dict(self) -> dict:
        return {
            "C": self.phrase_count,
            "n": self.input_length,
            "normalized": self.normalized,
            "relative_to_seed": self.relative_to_seed,
            "seed_label": self.seed_label,
        }


@dataclass(frozen=True)
class BorelLevel:
    m: int
    max_deviation: float
    bound: float
    passed: bool
    applicable: bool = True

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "max_deviation": self.max_deviation,
            "bound": self.bound,
            "pass": self.passed,
            "applicable": self.applicable,
        }


@dataclass(frozen=True)
class BorelReport:
    length: int
    levels: tuple[BorelLevel, ...]

    @property
    def all_pass(self) -> bool:
        return all(lv.passed for lv in self.levels if lv.applicable)

    def as_dict(self) -> dict:
        return {"n": self.length, "levels": [lv.as_dict() for lv in self.levels]}


# --------------------------------------------------------------------- LZ-76

@njit(cache=True)
def _lz76_sam(bits):  # pragma: no cover - numba compiled
    """Phrase count via a suffix automaton built over the whole stream.

    The automaton records, per state, the end position of the first
    occurrence of its substrings; a phrase extends while the candidate
    substring first occurs early enough to have started before the
    phrase did.
    """
    n = bits.size
    max_states = 2 * n + 5
    nxt = np.full((max_states, 2), -1, np.int32)
    link = np.empty(max_states, np.int32)
    length = np.empty(max_states, np.int32)
    firstpos = np.empty(max_states, np.int32)
    link[0] = -1
    length[0] = 0
    firstpos[0] = -1
    size = 1
    last = 0
    for i in range(n):
        c = bits[i]
        cur = size
        size += 1
        length[cur] = length[last] + 1
        firstpos[cur] = i
        link[cur] = -1
        nxt[cur, 0] = -1
        nxt[cur, 1] = -1
        p = last
        while p != -1 and nxt[p, c] == -1:
            nxt[p, c] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = nxt[p, c]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = size
                size += 1
                length[clone] = length[p] + 1
                link[clone] = link[q]
                nxt[clone, 0] = nxt[q, 0]
                nxt[clone, 1] = nxt[q, 1]
                firstpos[clone] = firstpos[q]
                while p != -1 and nxt[p, c] == q:
                    nxt[p, c] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur
    # Parse: phrase at p extends with s[p+l] while s[p:p+l+1] first
    # occurs ending at or before p+l-1 (i.e. starts before p).
    count = 0
    p = 0
    while p < n:
        st = 0
        l = 0
        while p + l < n:
            c = bits[p + l]
            st = nxt[st, c]
            if st == -1 or firstpos[st] > p + l - 1:
                break
            l += 1
        count += 1
        p += l + 1  # mismatch symbol closes the phrase
    return count


def lz76_complexity(s: BitStream) -> int:
    """Exhaustive-history phrase count of a non-empty stream."""
    if s.length < 1:
        raise InputError("LZ-76 needs at least one bit")
    return int(_lz76_sam(s.bits))


def lz76_complexity_naive(s: BitStream) -> int:
    """Quadratic substring-search reference parser (small streams only)."""
    if s.length < 1:
        raise InputError("LZ-76 needs at least one bit")
    text = s.to_ascii()
    n = len(text)
    count = 0
    p = 0
    while p < n:
        l = 1
        while p + l <= n and text[p : p + l] in text[: p + l - 1]:
            l += 1
        count += 1
        p += l
    return count


def lz76_normalized(s: BitStream) -> float:
    """C * log2(n) / n."""
    if s.length < 2:
        raise InputError("normalized LZ-76 needs at least two bits")
    c = lz76_complexity(s)
    return c * math.log2(s.length) / s.length


def kolmogorov_report(
    s: BitStream,
    seed_ref: BitStream | float | None = None,
    seed_label: str = "",
) -> Lz76Report:
    """LZ-76 complexity report, optionally relative to a reference.

    ``seed_ref`` may be the reference stream itself (its normalized
    complexity is computed; lengths should match for the ratio to be
    meaningful) or an already-recorded normalized value.
    """
    c = lz76_complexity(s)
    if s.length < 2:
        raise InputError("report needs at least two bits")
    normalized = c * math.log2(s.length) / s.length
    relative = None
    if seed_ref is not None:
        if isinstance(seed_ref, BitStream):
            seed_norm = lz76_normalized(seed_ref)
        else:
            seed_norm = float(seed_ref)
        relative = normalized / seed_norm
    return Lz76Report(
        phrase_count=c,
        input_length=s.length,
        normalized=normalized,
        relative_to_seed=relative,
        seed_label=seed_label,
    )


# ----------------------------------------------------------- Borel normality

def borel_normality(s: BitStream, max_level: int = 4) -> BorelReport:
    """Check m-bit word frequencies against 2^-m for m = 1..max_level.

    Words are counted non-overlapping with denominator floor(N/m); a
    level passes when the worst deviation stays within 1/log2(N).
    """
    if not 1 <= max_level <= 16:
        raise InputError("max_level must be in 1..16")
    n = s.length
    if n < 2:
        raise InputError("Borel normality needs at least 2 bits")
    bound = 1.0 / math.log2(n)
    levels = []
    for m in range(1, max_level + 1):
        if n < 2 ** m:
            levels.append(BorelLevel(m, math.nan, bound, False, applicable=False))
            continue
        wv = words(s, m)
        total = n // m
        counts = np.bincount(wv.words.astype(np.int64), minlength=2 ** m)
        assert int(counts.sum()) == total
        freqs = counts / total
        max_dev = float(np.abs(freqs - 2.0 ** -m).max())
        levels.append(BorelLevel(m, max_dev, bound, max_dev <= bound))
    return BorelReport(length=n, levels=tuple(levels))
