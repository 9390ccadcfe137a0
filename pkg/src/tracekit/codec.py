"""Bit-exact on-disk trace format: canonical CBOR wrapped in zlib.

File layout (see docs/format.md for a hex-annotated example):

    bytes 0-7   magic, ASCII "MINTRACE"
    byte  8     container version, currently 1
    byte  9     flags; bit 0 set = minimal trace, clear = full trace,
                all other bits must be zero
    bytes 10..  RFC-1950 zlib stream (DEFLATE, level 6) of one CBOR document

The CBOR encoder emits a deterministic canonical subset: definite
lengths only, shortest-form integer heads, text-string map keys in
strictly ascending (code point) order, and floats always as 64-bit
(0xFB). Equal values therefore encode to identical bytes, which is what
makes trace files content-addressable. The decoder accepts exactly this
subset and maps every malformed input to a typed error; it also rejects
out-of-order or duplicate map keys, so any accepted file re-encodes to
itself byte for byte.
"""

from __future__ import annotations

import struct
import zlib

from tracekit.envs.base import (
    ContinuousAction,
    DiscreteAction,
    DiscreteObs,
    DiscreteSpace,
    EnvParams,
    VectorObs,
    get_schema,
)
from tracekit.errors import (
    BadMagicError,
    CorruptPayloadError,
    UnsupportedVersionError,
)
from tracekit.traces import (
    FullEpisode,
    FullTrace,
    MinimalEpisode,
    MinimalTrace,
    Step,
    validate_full,
    validate_minimal,
)

MAGIC = b"MINTRACE"
CONTAINER_VERSION = 1
FLAG_MINIMAL = 0x01
ZLIB_LEVEL = 6

# Guards for hostile inputs: inflation cap and nesting cap.
MAX_PAYLOAD_BYTES = 1 << 30
MAX_DEPTH = 64

_UINT64_MAX = (1 << 64) - 1


# ---------------------------------------------------------------------------
# CBOR subset


def _head(major: int, arg: int) -> bytes:
    if arg < 24:
        return struct.pack(">B", (major << 5) | arg)
    if arg < 0x100:
        return struct.pack(">BB", (major << 5) | 24, arg)
    if arg < 0x10000:
        return struct.pack(">BH", (major << 5) | 25, arg)
    if arg < 0x100000000:
        return struct.pack(">BI", (major << 5) | 26, arg)
    return struct.pack(">BQ", (major << 5) | 27, arg)


def cbor_encode(value) -> bytes:
    """Encode one value (bool, int, float, str, list, dict) canonically."""
    if value is True:
        return b"\xf5"
    if value is False:
        return b"\xf4"
    if isinstance(value, int):
        if value >= 0:
            if value > _UINT64_MAX:
                raise ValueError("integer too large for 64-bit encoding")
            return _head(0, value)
        if value < -(1 << 64):
            raise ValueError("integer too small for 64-bit encoding")
        return _head(1, -1 - value)
    if isinstance(value, float):
        return b"\xfb" + struct.pack(">d", value)
    if isinstance(value, str):
        raw = value.encode("utf-8")
        return _head(3, len(raw)) + raw
    if isinstance(value, list):
        return _head(4, len(value)) + b"".join(cbor_encode(item) for item in value)
    if isinstance(value, dict):
        if not all(isinstance(key, str) for key in value):
            raise ValueError("map keys must be strings")
        parts = [_head(5, len(value))]
        for key in sorted(value):
            parts.append(cbor_encode(key))
            parts.append(cbor_encode(value[key]))
        return b"".join(parts)
    raise ValueError(f"unsupported value type {type(value).__name__}")


class _Reader:
    __slots__ = ("data", "pos")

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        end = self.pos + n
        if end > len(self.data):
            raise CorruptPayloadError("unexpected end of CBOR data")
        chunk = self.data[self.pos : end]
        self.pos = end
        return chunk


def _read_head(r: _Reader) -> tuple[int, int]:
    initial = r.take(1)[0]
    major, info = initial >> 5, initial & 0x1F
    if info < 24:
        return major, info
    if info == 24:
        return major, r.take(1)[0]
    if info == 25:
        return major, struct.unpack(">H", r.take(2))[0]
    if info == 26:
        return major, struct.unpack(">I", r.take(4))[0]
    if info == 27:
        return major, struct.unpack(">Q", r.take(8))[0]
    raise CorruptPayloadError(f"unsupported CBOR additional info {info}")


def _read_value(r: _Reader, depth: int):
    if depth > MAX_DEPTH:
        raise CorruptPayloadError("CBOR nesting too deep")
    initial = r.data[r.pos] if r.pos < len(r.data) else None
    if initial == 0xF4:
        r.pos += 1
        return False
    if initial == 0xF5:
        r.pos += 1
        return True
    if initial == 0xFB:
        r.pos += 1
        return struct.unpack(">d", r.take(8))[0]
    major, arg = _read_head(r)
    if major == 0:
        return arg
    if major == 1:
        return -1 - arg
    if major == 3:
        raw = r.take(arg)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptPayloadError("invalid UTF-8 in text string") from exc
    if major == 4:
        # Never preallocate from the claimed length; truncated data hits
        # the reader's end-of-data check instead.
        return [_read_value(r, depth + 1) for _ in range(arg)]
    if major == 5:
        out = {}
        last_key = None
        for _ in range(arg):
            key = _read_value(r, depth + 1)
            if not isinstance(key, str):
                raise CorruptPayloadError("map key is not a text string")
            if last_key is not None and key <= last_key:
                raise CorruptPayloadError("map keys not in canonical order")
            last_key = key
            out[key] = _read_value(r, depth + 1)
        return out
    raise CorruptPayloadError(f"unsupported CBOR major type {major}")


def cbor_decode(data: bytes):
    """Decode exactly one canonical-subset document; reject trailing bytes."""
    reader = _Reader(data)
    value = _read_value(reader, 0)
    if reader.pos != len(data):
        raise CorruptPayloadError("trailing bytes after CBOR document")
    return value


# ---------------------------------------------------------------------------
# Trace <-> document


def _params_doc(params: EnvParams) -> dict:
    return {
        "name": params.env_name,
        "params": dict(params.entries),
        "version": params.env_version,
    }


def _minimal_episode_doc(episode: MinimalEpisode) -> dict:
    doc: dict = {"seed": episode.seed, "terminated": episode.terminated}
    first = episode.actions[0]
    if isinstance(first, DiscreteAction):
        doc["actions"] = [a.index for a in episode.actions]
    else:
        dim = len(first.values)
        doc["actions"] = [v for a in episode.actions for v in a.values]
        doc["dim"] = dim
    return doc


def _minimal_doc(trace: MinimalTrace) -> dict:
    return {
        "created_unix_ms": trace.created_unix_ms,
        "env": _params_doc(trace.params),
        "episodes": [_minimal_episode_doc(ep) for ep in trace.episodes],
        "format_version": trace.format_version,
        "label": trace.label,
    }


def _obs_doc(obs) -> int | list:
    if isinstance(obs, DiscreteObs):
        return obs.value
    return list(obs.values)


def _action_doc(action) -> int | list:
    if isinstance(action, DiscreteAction):
        return action.index
    return list(action.values)


def _full_doc(trace: FullTrace) -> dict:
    return {
        "env": _params_doc(trace.params),
        "episodes": [
            {
                "initial_observation": _obs_doc(ep.initial_observation),
                "steps": [
                    [_obs_doc(s.observation), _action_doc(s.action), s.reward]
                    for s in ep.steps
                ],
                "terminated": ep.terminated,
            }
            for ep in trace.episodes
        ],
    }


def _expect_map(doc, keys: set[str], what: str) -> dict:
    if not isinstance(doc, dict):
        raise CorruptPayloadError(f"{what} is not a map")
    if set(doc) != keys:
        raise CorruptPayloadError(f"{what} has wrong keys {sorted(doc)}")
    return doc


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise CorruptPayloadError(message)


def _params_from_doc(doc) -> EnvParams:
    _expect_map(doc, {"name", "params", "version"}, "env")
    _expect(isinstance(doc["name"], str), "env name is not a string")
    _expect(isinstance(doc["version"], int) and not isinstance(doc["version"], bool),
            "env version is not an integer")
    _expect(isinstance(doc["params"], dict), "env params is not a map")
    return EnvParams(
        env_name=doc["name"], env_version=doc["version"], entries=dict(doc["params"])
    )


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _actions_from_doc(doc, space, index: int) -> tuple:
    _expect(isinstance(doc["terminated"], bool), f"episode {index}: terminated is not a bool")
    _expect(_is_int(doc["seed"]), f"episode {index}: seed is not an integer")
    actions = doc["actions"]
    _expect(isinstance(actions, list), f"episode {index}: actions is not an array")
    if isinstance(space, DiscreteSpace):
        _expect("dim" not in doc, f"episode {index}: discrete episode carries dim")
        _expect(
            all(_is_int(a) for a in actions),
            f"episode {index}: discrete actions must be integers",
        )
        return tuple(DiscreteAction(a) for a in actions)
    dim = doc.get("dim")
    _expect(_is_int(dim) and dim > 0, f"episode {index}: missing or bad action dim")
    _expect(
        all(isinstance(v, float) for v in actions),
        f"episode {index}: continuous actions must be floats",
    )
    _expect(
        len(actions) % dim == 0,
        f"episode {index}: flat action array length not a multiple of dim",
    )
    return tuple(
        ContinuousAction(tuple(actions[i : i + dim]))
        for i in range(0, len(actions), dim)
    )


def _minimal_from_doc(doc) -> MinimalTrace:
    _expect_map(
        doc, {"created_unix_ms", "env", "episodes", "format_version", "label"}, "trace"
    )
    _expect(_is_int(doc["format_version"]), "format_version is not an integer")
    if doc["format_version"] != 1:
        raise UnsupportedVersionError(
            f"unsupported document format_version {doc['format_version']}"
        )
    _expect(_is_int(doc["created_unix_ms"]), "created_unix_ms is not an integer")
    _expect(isinstance(doc["label"], str), "label is not a string")
    params = _params_from_doc(doc["env"])
    space = get_schema(params.env_name).action_space
    _expect(isinstance(doc["episodes"], list), "episodes is not an array")
    episodes = []
    for i, ep_doc in enumerate(doc["episodes"]):
        keys = {"actions", "seed", "terminated"}
        if not isinstance(space, DiscreteSpace):
            keys.add("dim")
        _expect_map(ep_doc, keys, f"episode {i}")
        episodes.append(
            MinimalEpisode(
                seed=ep_doc["seed"],
                actions=_actions_from_doc(ep_doc, space, i),
                terminated=ep_doc["terminated"],
            )
        )
    return MinimalTrace(
        format_version=doc["format_version"],
        params=params,
        episodes=tuple(episodes),
        created_unix_ms=doc["created_unix_ms"],
        label=doc["label"],
    )


def _obs_from_doc(value, space, index: int):
    if isinstance(space, DiscreteSpace):
        _expect(_is_int(value), f"episode {index}: observation is not an integer")
        return DiscreteObs(value)
    _expect(
        isinstance(value, list) and all(isinstance(v, float) for v in value),
        f"episode {index}: observation is not a float vector",
    )
    return VectorObs(tuple(value))


def _action_from_doc(value, space, index: int):
    if isinstance(space, DiscreteSpace):
        _expect(_is_int(value), f"episode {index}: action is not an integer")
        return DiscreteAction(value)
    _expect(
        isinstance(value, list) and all(isinstance(v, float) for v in value),
        f"episode {index}: action is not a float vector",
    )
    return ContinuousAction(tuple(value))


def _full_from_doc(doc) -> FullTrace:
    _expect_map(doc, {"env", "episodes"}, "trace")
    params = _params_from_doc(doc["env"])
    schema = get_schema(params.env_name)
    _expect(isinstance(doc["episodes"], list), "episodes is not an array")
    episodes = []
    for i, ep_doc in enumerate(doc["episodes"]):
        _expect_map(ep_doc, {"initial_observation", "steps", "terminated"}, f"episode {i}")
        _expect(isinstance(ep_doc["terminated"], bool), f"episode {i}: terminated is not a bool")
        _expect(isinstance(ep_doc["steps"], list), f"episode {i}: steps is not an array")
        steps = []
        for step_doc in ep_doc["steps"]:
            _expect(
                isinstance(step_doc, list) and len(step_doc) == 3,
                f"episode {i}: step is not an [obs, action, reward] triple",
            )
            obs_doc, action_doc, reward = step_doc
            _expect(isinstance(reward, float), f"episode {i}: reward is not a float")
            steps.append(
                Step(
                    observation=_obs_from_doc(obs_doc, schema.observation_space, i),
                    action=_action_from_doc(action_doc, schema.action_space, i),
                    reward=reward,
                )
            )
        episodes.append(
            FullEpisode(
                initial_observation=_obs_from_doc(
                    ep_doc["initial_observation"], schema.observation_space, i
                ),
                steps=tuple(steps),
                terminated=ep_doc["terminated"],
            )
        )
    return FullTrace(params=params, episodes=tuple(episodes))


# ---------------------------------------------------------------------------
# Container


def _container(flags: int, document: dict) -> bytes:
    payload = zlib.compress(cbor_encode(document), ZLIB_LEVEL)
    return MAGIC + bytes((CONTAINER_VERSION, flags)) + payload


def encode_minimal(trace: MinimalTrace) -> bytes:
    """Serialize a MinimalTrace; equal traces yield identical bytes."""
    return _container(FLAG_MINIMAL, _minimal_doc(trace))


def encode_full(trace: FullTrace) -> bytes:
    """Serialize a FullTrace; same container, flag bit 0 clear."""
    return _container(0x00, _full_doc(trace))


def _inflate(payload: bytes) -> bytes:
    stream = zlib.decompressobj()
    try:
        raw = stream.decompress(payload, MAX_PAYLOAD_BYTES)
    except zlib.error as exc:
        raise CorruptPayloadError(f"zlib: {exc}") from exc
    if stream.unconsumed_tail:
        raise CorruptPayloadError("decompressed payload exceeds the size cap")
    if not stream.eof:
        raise CorruptPayloadError("truncated zlib stream")
    if stream.unused_data:
        raise CorruptPayloadError("trailing bytes after zlib stream")
    return raw


def decode(data: bytes) -> MinimalTrace | FullTrace:
    """Parse and fully validate a trace file.

    Structural problems raise BadMagicError / UnsupportedVersionError /
    CorruptPayloadError; semantic ones (unregistered env, schema or
    space violations) raise UnknownEnvError / SchemaMismatchError.
    """
    if len(data) < len(MAGIC) or bytes(data[: len(MAGIC)]) != MAGIC:
        raise BadMagicError("not a trace file (bad magic)")
    if len(data) < len(MAGIC) + 2:
        raise CorruptPayloadError("truncated header")
    version, flags = data[len(MAGIC)], data[len(MAGIC) + 1]
    if version != CONTAINER_VERSION:
        raise UnsupportedVersionError(f"unsupported container version {version}")
    if flags & ~FLAG_MINIMAL:
        raise CorruptPayloadError(f"unknown flag bits 0x{flags:02x}")
    document = cbor_decode(_inflate(data[len(MAGIC) + 2 :]))
    if flags & FLAG_MINIMAL:
        trace = _minimal_from_doc(document)
        validate_minimal(trace)
        return trace
    trace = _full_from_doc(document)
    validate_full(trace)
    return trace
