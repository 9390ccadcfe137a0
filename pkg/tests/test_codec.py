"""Trace-file codec: canonical CBOR vectors, container handling, round trips."""

import random
import zlib

import pytest
from hypothesis import given, settings

from tracekit import codec
from tracekit.envs import DiscreteAction, default_params
from tracekit.errors import (
    BadMagicError,
    CodecError,
    CorruptPayloadError,
    SchemaMismatchError,
    TracekitError,
    UnknownEnvError,
    UnsupportedVersionError,
)
from tracekit.policies import record_run
from tracekit.resim import resimulate
from tracekit.traces import MinimalEpisode, MinimalTrace, trace_equal

from conftest import minimal_traces

# Frozen standard-document test vectors for the CBOR subset (floats are
# always 64-bit in this format, so 1.0 uses the 0xFB form).
CBOR_VECTORS = [
    (0, "00"),
    (1, "01"),
    (10, "0a"),
    (23, "17"),
    (24, "1818"),
    (100, "1864"),
    (1000, "1903e8"),
    (1000000, "1a000f4240"),
    (1000000000000, "1b000000e8d4a51000"),
    (18446744073709551615, "1bffffffffffffffff"),
    (-1, "20"),
    (-10, "29"),
    (-100, "3863"),
    (-1000, "3903e7"),
    (False, "f4"),
    (True, "f5"),
    (1.0, "fb3ff0000000000000"),
    (1.1, "fb3ff199999999999a"),
    (1.0e300, "fb7e37e43c8800759c"),
    (-4.1, "fbc010666666666666"),
    ("", "60"),
    ("a", "6161"),
    ("IETF", "6449455446"),
    ("ü", "62c3bc"),
    ([], "80"),
    ([1, 2, 3], "83010203"),
    ({}, "a0"),
    ({"a": 1, "b": [2, 3]}, "a26161016162820203"),
]


class TestCborPrimitives:
    @pytest.mark.parametrize("value,expected_hex", CBOR_VECTORS)
    def test_encode_matches_vector(self, value, expected_hex):
        assert codec.cbor_encode(value).hex() == expected_hex

    @pytest.mark.parametrize("value,expected_hex", CBOR_VECTORS)
    def test_decode_inverts(self, value, expected_hex):
        assert codec.cbor_decode(bytes.fromhex(expected_hex)) == value

    def test_keys_sorted_regardless_of_insertion_order(self):
        assert codec.cbor_encode({"b": 1, "a": 2}) == codec.cbor_encode({"a": 2, "b": 1})

    def test_floats_always_eight_bytes(self):
        for x in (0.0, -0.0, 1.0, 0.5, float("inf")):
            encoded = codec.cbor_encode(x)
            assert len(encoded) == 9 and encoded[0] == 0xFB

    def test_negative_zero_preserved(self):
        assert codec.cbor_encode(-0.0) != codec.cbor_encode(0.0)
        assert str(codec.cbor_decode(codec.cbor_encode(-0.0))) == "-0.0"

    def test_trailing_bytes_rejected(self):
        with pytest.raises(CorruptPayloadError):
            codec.cbor_decode(bytes.fromhex("01" + "00"))

    def test_unsorted_map_rejected(self):
        # {"b":1, "a":2} with keys out of order
        raw = bytes.fromhex("a2616201616102")
        with pytest.raises(CorruptPayloadError, match="canonical"):
            codec.cbor_decode(raw)

    def test_duplicate_key_rejected(self):
        raw = bytes.fromhex("a2616101616102")
        with pytest.raises(CorruptPayloadError):
            codec.cbor_decode(raw)

    def test_truncated_input(self):
        with pytest.raises(CorruptPayloadError):
            codec.cbor_decode(bytes.fromhex("8301"))

    def test_huge_claimed_length_is_safe(self):
        # Array claiming 2^60 items but no data must fail fast, not allocate.
        with pytest.raises(CorruptPayloadError):
            codec.cbor_decode(bytes.fromhex("9b1000000000000000"))

    def test_depth_cap(self):
        nested = b"\x81" * 80 + b"\x01"
        with pytest.raises(CorruptPayloadError, match="deep"):
            codec.cbor_decode(nested)

    def test_unsupported_items(self):
        for hexstr in ("f6", "f7", "c000", "40", "f93c00", "fa3f800000", "5f", "9f"):
            with pytest.raises(CorruptPayloadError):
                codec.cbor_decode(bytes.fromhex(hexstr))


def _record(name="CartPole-det-v1", episodes=3, seed=1):
    trace, _ = record_run(
        default_params(name), "random", episodes=episodes, master_seed=seed,
        label=f"{name}-test", created_unix_ms=0,
    )
    return trace


class TestContainer:
    def test_header_layout(self):
        data = codec.encode_minimal(_record())
        assert data[:8] == b"MINTRACE"
        assert data[8] == 1  # container version
        assert data[9] == 1  # minimal flag

    def test_full_flag(self):
        trace = _record()
        data = codec.encode_full(resimulate(trace))
        assert data[9] == 0
        assert isinstance(codec.decode(data), type(resimulate(trace)))

    def test_bad_magic(self):
        with pytest.raises(BadMagicError):
            codec.decode(b"NOTRACE!" + b"\x01\x01")
        with pytest.raises(BadMagicError):
            codec.decode(b"MIN")

    def test_unsupported_version(self):
        data = bytearray(codec.encode_minimal(_record()))
        data[8] = 2
        with pytest.raises(UnsupportedVersionError):
            codec.decode(bytes(data))

    def test_unknown_flag_bits(self):
        data = bytearray(codec.encode_minimal(_record()))
        data[9] |= 0x80
        with pytest.raises(CorruptPayloadError):
            codec.decode(bytes(data))

    def test_truncated_file(self):
        data = codec.encode_minimal(_record())
        for cut in (9, 10, len(data) // 2, len(data) - 1):
            with pytest.raises(CorruptPayloadError):
                codec.decode(data[:cut])

    def test_corrupt_deflate_stream(self):
        data = bytearray(codec.encode_minimal(_record()))
        data[len(data) // 2] ^= 0xFF
        with pytest.raises((CorruptPayloadError, SchemaMismatchError, UnknownEnvError)):
            codec.decode(bytes(data))

    def test_trailing_garbage_after_stream(self):
        data = codec.encode_minimal(_record())
        with pytest.raises(CorruptPayloadError):
            codec.decode(data + b"junk")

    def test_schema_checked_on_decode(self):
        trace = _record()
        payload = codec._minimal_doc(trace)
        payload["env"]["name"] = "Unregistered-v9"
        raw = b"MINTRACE" + bytes((1, 1)) + zlib.compress(codec.cbor_encode(payload), 6)
        with pytest.raises(UnknownEnvError):
            codec.decode(raw)

    def test_out_of_range_action_rejected(self):
        trace = MinimalTrace(
            1,
            default_params("TaxiGrid-det-v1"),
            (MinimalEpisode(1, (DiscreteAction(17),), False),),
            0,
            "bad",
        )
        data = codec.encode_minimal(trace)
        with pytest.raises(SchemaMismatchError):
            codec.decode(data)


class TestRoundTrip:
    def test_empty_trace_under_1kib(self):
        trace = MinimalTrace(1, default_params("CartPole-det-v1"), (), 0, "empty")
        data = codec.encode_minimal(trace)
        assert len(data) < 1024
        assert codec.decode(data) == trace

    def test_recorded_trace_round_trip(self):
        for name in ("CartPole-det-v1", "TaxiGrid-det-v1", "PointMass4-det-v1"):
            trace = _record(name)
            data = codec.encode_minimal(trace)
            assert codec.decode(data) == trace
            assert codec.encode_minimal(codec.decode(data)) == data

    def test_full_trace_round_trip(self):
        full = resimulate(_record("PointMass4-det-v1", episodes=2))
        data = codec.encode_full(full)
        decoded = codec.decode(data)
        assert trace_equal(decoded, full)
        assert codec.encode_full(decoded) == data

    @settings(max_examples=200, deadline=None)
    @given(minimal_traces())
    def test_property_round_trip(self, trace):
        data = codec.encode_minimal(trace)
        decoded = codec.decode(data)
        assert decoded == trace
        assert codec.encode_minimal(decoded) == data


def test_mutation_fuzz_smoke():
    """Short deterministic fuzz; the long-running one is an acceptance test."""
    rng = random.Random(1234)
    base = codec.encode_minimal(_record())
    allowed = (TracekitError,)
    for _ in range(3000):
        data = bytearray(base)
        for _ in range(rng.randint(1, 8)):
            data[rng.randrange(len(data))] = rng.randrange(256)
        try:
            codec.decode(bytes(data))
        except allowed:
            pass
    for _ in range(1500):
        blob = rng.randbytes(rng.randrange(0, 64))
        try:
            codec.decode(blob)
        except allowed:
            pass
