import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rngbench import BitStream, from_ascii, read_file, to_bytes, words, write_file
from rngbench.bitstream import (
    ASCII,
    PACKED,
    FormatError,
    ParameterError,
    from_bytes,
)

bit_lists = st.lists(st.integers(0, 1), min_size=0, max_size=10_000)


def make(bits):
    return BitStream(np.array(bits, dtype=np.uint8))


class TestConstruction:
    def test_from_ascii_simple(self):
        s = from_ascii("0101")
        assert s.length == 4
        assert [s[i] for i in range(4)] == [0, 1, 0, 1]

    def test_from_ascii_empty(self):
        assert from_ascii("").length == 0

    def test_from_ascii_whitespace_skipped(self):
        s = from_ascii("01 1\n0")
        assert s.to_ascii() == "0110"

    def test_from_ascii_bad_char_names_position(self):
        with pytest.raises(FormatError, match="position 2"):
            from_ascii("01x0")

    def test_bits_immutable(self):
        s = make([0, 1])
        with pytest.raises(ValueError):
            s.bits[0] = 1

    def test_index_out_of_range(self):
        s = make([0, 1])
        with pytest.raises(ParameterError):
            s[2]
        with pytest.raises(ParameterError):
            s[-1]

    def test_non_binary_rejected(self):
        with pytest.raises(ParameterError):
            BitStream(np.array([0, 2], dtype=np.uint8))


class TestBytesConversion:
    def test_single_byte_msb_first(self):
        payload, rem = to_bytes(make([0, 1, 0, 0, 0, 0, 0, 1]))
        assert payload == b"\x41"
        assert rem == 0

    def test_sub_byte(self):
        payload, rem = to_bytes(make([1, 1, 1]))
        assert payload == b""
        assert rem == 3

    def test_sixteen_zero_bits(self):
        payload, rem = to_bytes(make([0] * 16))
        assert payload == b"\x00\x00"
        assert rem == 0

    def test_round_trip_when_aligned(self):
        s = from_ascii("01000001" "11110000")
        payload, rem = to_bytes(s)
        assert rem == 0
        assert from_bytes(payload) == s

    def test_from_bytes_partial_byte(self):
        s = from_bytes(b"\xa0", bit_length=3)
        assert s.to_ascii() == "101"

    def test_from_bytes_overlong_declared_length(self):
        with pytest.raises(FormatError):
            from_bytes(b"\x00", bit_length=9)


class TestWords:
    def test_m2(self):
        wv = words(make([0, 1, 1, 0]), 2)
        assert wv.words.tolist() == [1, 2]

    def test_m2_trailing_bit_dropped(self):
        wv = words(make([0, 1, 1, 0, 1]), 2)
        assert wv.words.tolist() == [1, 2]

    def test_m1_identity(self):
        bits = [0, 1, 1, 0, 1]
        assert words(make(bits), 1).words.tolist() == bits

    def test_word_size_range(self):
        with pytest.raises(ParameterError):
            words(make([0, 1]), 0)
        with pytest.raises(ParameterError):
            words(make([0, 1]), 33)

    @given(bit_lists, st.integers(1, 32))
    @settings(max_examples=60, deadline=None)
    def test_words_bounded_and_cover(self, bits, m):
        s = make(bits)
        wv = words(s, m)
        assert len(wv) == s.length // m
        if len(wv):
            assert int(wv.words.max()) < 2 ** m


class TestPrefixConcat:
    def test_prefix(self):
        s = from_ascii("10110")
        assert s.prefix(3).to_ascii() == "101"
        assert s.prefix(0).length == 0

    def test_concat(self):
        assert from_ascii("10").concat(from_ascii("01")).to_ascii() == "1001"


class TestFileIO:
    @pytest.mark.parametrize("fmt", [PACKED, ASCII])
    def test_round_trip_small(self, tmp_path, fmt):
        s = from_ascii("10110001101")
        path = str(tmp_path / "s.bits")
        write_file(s, path, fmt)
        assert read_file(path, fmt) == s

    def test_round_trip_five_million(self, tmp_path, rng):
        s = BitStream(rng.integers(0, 2, size=5_000_000, dtype=np.uint8))
        path = str(tmp_path / "big.bits")
        write_file(s, path)
        assert read_file(path) == s

    @given(bit_lists)
    @settings(max_examples=40, deadline=None)
    def test_round_trip_property(self, tmp_path_factory, bits):
        tmp = tmp_path_factory.mktemp("rt")
        s = make(bits)
        for fmt in (PACKED, ASCII):
            path = str(tmp / f"s.{fmt}")
            write_file(s, path, fmt)
            assert read_file(path, fmt) == s

    def test_packed_sidecar_fields(self, tmp_path):
        s = from_ascii("101")
        path = str(tmp_path / "s.bits")
        write_file(s, path, source_label="lab")
        import json

        with open(path + ".meta") as f:
            meta = json.load(f)
        assert meta["bit_length"] == 3
        assert meta["source_label"] == "lab"
        assert "created_utc" in meta and "sha256_of_payload" in meta

    def test_missing_descriptor(self, tmp_path):
        path = str(tmp_path / "s.bits")
        with open(path, "wb") as f:
            f.write(b"\x00")
        with pytest.raises(FormatError, match="descriptor"):
            read_file(path)

    def test_descriptor_length_exceeds_payload(self, tmp_path):
        s = from_ascii("101")
        path = str(tmp_path / "s.bits")
        write_file(s, path)
        import json

        with open(path + ".meta") as f:
            meta = json.load(f)
        meta["bit_length"] = 9
        with open(path + ".meta", "w") as f:
            json.dump(meta, f)
        with pytest.raises(FormatError):
            read_file(path)

    def test_payload_hash_mismatch(self, tmp_path):
        s = from_ascii("10100000")
        path = str(tmp_path / "s.bits")
        write_file(s, path)
        with open(path, "wb") as f:
            f.write(b"\xff")
        with pytest.raises(FormatError, match="hash"):
            read_file(path)
