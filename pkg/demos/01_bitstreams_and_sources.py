"""Generate bit-streams from each source family and inspect them.

Run:  python3 demos/01_bitstreams_and_sources.py
"""

from rngbench import to_bytes, words
from rngbench.sources import (
    ChaChaParams,
    LcgParams,
    chacha20_stream,
    lcg_stream,
)


def main():
    # A linear congruential generator emits its full k-bit state each
    # step, MSB-first.
    lcg = LcgParams(a=1664525, c=1013904223, k=32, x0=1)
    s = lcg_stream(lcg, 128)
    print(f"LCG (a={lcg.a}, c={lcg.c}, 2^{lcg.k}): first 128 bits")
    print(" ", s.to_ascii())

    # The same bits viewed as bytes and as 4-bit words.
    payload, remainder = to_bytes(s)
    print(f"  as bytes: {payload.hex()} (remainder {remainder} bits)")
    print(f"  as 4-bit words: {words(s, 4).words.tolist()[:16]} ...")

    # ChaCha20 keystream (IETF layout: 96-bit nonce, 32-bit counter).
    cc = ChaChaParams(
        key=bytes(range(32)),
        nonce=bytes.fromhex("000000090000004a00000000"),
        initial_counter=1,
    )
    t = chacha20_stream(cc, 128)
    print("\nChaCha20 keystream: first 128 bits")
    print(" ", t.to_ascii())
    print(f"  as bytes: {to_bytes(t)[0].hex()}")

    # Determinism: both generators are pure functions of their params.
    assert lcg_stream(lcg, 128) == s
    assert chacha20_stream(cc, 128) == t
    print("\nreplay check: identical streams from identical params")


if __name__ == "__main__":
    main()
