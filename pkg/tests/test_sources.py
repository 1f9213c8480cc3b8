import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rngbench.bitstream import ParameterError, to_bytes
from rngbench.sources import (
    CapacityError,
    ChaChaParams,
    LcgParams,
    SourceSpec,
    chacha20_block,
    chacha20_keystream_bytes,
    chacha20_stream,
    generate,
    ingest_external,
    lcg_next,
    lcg_stream,
    mt19937_bits,
    quarter_round,
)

# Reference keystream for key 00..1f, nonce 000000090000004a00000000,
# counter 1 (cross-checked against the IETF ChaCha20 reference vector).
REF_KEY = bytes(range(32))
REF_NONCE = bytes.fromhex("000000090000004a00000000")
REF_KEYSTREAM_64 = bytes.fromhex(
    "10f1e7e4d13b5915500fdd1fa32071c4"
    "c7d1f4c733c068030422aa9ac3d46c4e"
    "d2826446079faa0914c2d705d98b02a2"
    "b5129cd1de164eb9cbd083e8a2503c4e"
)


class TestLcg:
    def test_next_direct_arithmetic(self):
        assert lcg_next(7, LcgParams(a=5, c=3, k=4)) == 6

    def test_next_unit_step_cycle(self):
        p = LcgParams(a=1, c=1, k=3)
        seq = []
        x = 0
        for _ in range(8):
            x = lcg_next(x, p)
            seq.append(x)
        assert seq == [1, 2, 3, 4, 5, 6, 7, 0]

    def test_next_x1_equals_c(self):
        p = LcgParams(a=1664525, c=1013904223, k=32)
        assert lcg_next(0, p) == 1013904223

    def test_stream_k4_states(self):
        s = lcg_stream(LcgParams(a=1, c=1, k=4, x0=0), 8)
        assert s.to_ascii() == "00010010"

    def test_stream_empty(self):
        assert lcg_stream(LcgParams(a=5, c=3, k=4), 0).length == 0

    def test_stream_exact_length_and_replay(self):
        p = LcgParams(a=1664525, c=1013904223, k=32, x0=1)
        s1 = lcg_stream(p, 10**6)
        s2 = lcg_stream(p, 10**6)
        assert s1.length == 10**6
        assert s1 == s2

    def test_params_range_checks(self):
        with pytest.raises(ParameterError):
            LcgParams(a=16, c=1, k=4)
        with pytest.raises(ParameterError):
            LcgParams(a=1, c=1, k=0)
        with pytest.raises(ParameterError):
            LcgParams(a=1, c=1, k=33)
        with pytest.raises(ParameterError):
            LcgParams(a=1, c=1, k=4, x0=16)

    @given(
        st.integers(2, 12),
        st.integers(0, 2**12 - 1),
        st.integers(0, 2**12 - 1),
        st.integers(0, 2**12 - 1),
    )
    @settings(max_examples=40, deadline=None)
    def test_hull_dobell_full_period(self, k, a_raw, c_raw, x0_raw):
        # a = 1 (mod 4) and odd c give period exactly 2^k: walk the cycle.
        mask = (1 << k) - 1
        a = (a_raw & mask & ~3) | 1
        c = (c_raw & mask) | 1
        p = LcgParams(a=a, c=c, k=k, x0=x0_raw & mask)
        m = p.modulus
        seen = set()
        x = p.x0
        for _ in range(m):
            x = lcg_next(x, p)
            seen.add(x)
        assert len(seen) == m
        assert lcg_next(x, p) in seen

    def test_period_divides_modulus(self):
        p = LcgParams(a=3, c=0, k=4, x0=1)  # not Hull-Dobell
        x = p.x0
        period = 0
        while True:
            x = lcg_next(x, p)
            period += 1
            if x == p.x0:
                break
        assert p.modulus % period == 0


class TestChaCha:
    def params(self, counter=1):
        return ChaChaParams(key=REF_KEY, nonce=REF_NONCE, initial_counter=counter)

    def test_quarter_round_reference(self):
        assert quarter_round((0x11111111, 0x01020304, 0x9B8D6F43, 0x01234567)) == (
            0xEA2A92F4,
            0xCB1CF8CE,
            0x4581472E,
            0x5881C4BB,
        )

    def test_block_matches_reference_keystream(self):
        assert chacha20_keystream_bytes(self.params(), 64) == REF_KEYSTREAM_64

    def test_block_determinism(self):
        assert chacha20_block(self.params(), 1) == chacha20_block(self.params(), 1)

    def test_block_bit_expansion_msb_first(self):
        s = chacha20_block(self.params(), 1)
        assert s.length == 512
        payload, rem = to_bytes(s)
        assert rem == 0
        assert payload == REF_KEYSTREAM_64

    def test_stream_block_count(self):
        s = chacha20_stream(self.params(), 1024)
        first = chacha20_block(self.params(), 1)
        second = chacha20_block(self.params(), 2)
        assert s.prefix(512) == first
        assert s.to_ascii()[512:] == second.to_ascii()

    def test_stream_five_million_truncated(self):
        s = chacha20_stream(self.params(counter=0), 5_000_000)
        assert s.length == 5_000_000
        # 5e6 / 512 = 9765.625 -> 9766 blocks generated, last truncated.
        assert -(-5_000_000 // 512) == 9766

    def test_stream_empty(self):
        assert chacha20_stream(self.params(), 0).length == 0

    def test_prefix_consistency(self):
        p = self.params()
        long = chacha20_stream(p, 4096)
        for n in (0, 1, 511, 512, 513, 4000):
            assert chacha20_stream(p, n) == long.prefix(n)

    def test_counter_overflow(self):
        p = ChaChaParams(key=REF_KEY, nonce=REF_NONCE, initial_counter=2**32 - 1)
        with pytest.raises(CapacityError):
            chacha20_keystream_bytes(p, 128)

    def test_rounds_fixed_at_20(self):
        with pytest.raises(ParameterError):
            ChaChaParams(key=REF_KEY, nonce=REF_NONCE, rounds=12)

    def test_key_nonce_lengths(self):
        with pytest.raises(ParameterError):
            ChaChaParams(key=b"\x00" * 31, nonce=REF_NONCE)
        with pytest.raises(ParameterError):
            ChaChaParams(key=REF_KEY, nonce=b"\x00" * 11)


class TestExternalAndSpec:
    def test_ingest_ascii(self, tmp_path):
        path = tmp_path / "dump.txt"
        path.write_text("0101")
        s, label = ingest_external(str(path), "ascii", "qrng_a")
        assert s.to_ascii() == "0101"
        assert label == "qrng_a"

    def test_ingest_packed_respects_declared_length(self, tmp_path):
        from rngbench import write_file, from_ascii

        path = str(tmp_path / "dump.bits")
        write_file(from_ascii("1011001"), path)
        s, _ = ingest_external(path, "packed", "x")
        assert s.length == 7

    def test_ingest_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            ingest_external(str(tmp_path / "absent"), "ascii", "x")

    def test_spec_requires_matching_param_block(self):
        with pytest.raises(ParameterError):
            SourceSpec(label="x", kind="lcg", requested_bits=8)
        with pytest.raises(ParameterError):
            SourceSpec(
                label="x",
                kind="lcg",
                requested_bits=8,
                lcg=LcgParams(a=5, c=3, k=4),
                path="also-a-file",
            )

    def test_generate_lcg(self):
        spec = SourceSpec(
            label="g", kind="lcg", requested_bits=8, lcg=LcgParams(a=1, c=1, k=4, x0=0)
        )
        s, label = generate(spec)
        assert (s.to_ascii(), label) == ("00010010", "g")


class TestMt19937Bits:
    def test_deterministic(self):
        assert mt19937_bits(1234, 1000) == mt19937_bits(1234, 1000)

    def test_exact_length(self):
        assert mt19937_bits(1, 13).length == 13

    def test_seed_sensitivity(self):
        assert mt19937_bits(1, 256) != mt19937_bits(2, 256)
