"""Trace value types and the pure accounting between them.

A MinimalTrace is the compressed record (params + per-episode seed and
action sequence); a FullTrace is what re-simulation reconstructs from it
(initial observation plus per-step observation/action/reward). All types
are immutable values and safe to share across threads.
"""

from __future__ import annotations

import struct
from array import array
from dataclasses import dataclass
from itertools import chain

from tracekit.envs.base import (
    Action,
    ContinuousAction,
    DiscreteAction,
    DiscreteObs,
    DiscreteSpace,
    EnvParams,
    Observation,
    VectorObs,
    get_schema,
    validate_params,
)
from tracekit.errors import SchemaMismatchError
from tracekit.rng import MASK64

FORMAT_VERSION = 1

_INT64_MIN = -(1 << 63)
_INT64_MAX = (1 << 63) - 1


@dataclass(frozen=True, slots=True)
class MinimalEpisode:
    seed: int
    actions: tuple[Action, ...]
    terminated: bool  # True: environment signaled done; False: stopped mid-episode


@dataclass(frozen=True, slots=True)
class MinimalTrace:
    format_version: int
    params: EnvParams
    episodes: tuple[MinimalEpisode, ...]
    created_unix_ms: int
    label: str


@dataclass(frozen=True, slots=True)
class Step:
    observation: Observation
    action: Action
    reward: float


@dataclass(frozen=True, slots=True)
class FullEpisode:
    initial_observation: Observation
    steps: tuple[Step, ...]
    terminated: bool


@dataclass(frozen=True, slots=True)
class FullTrace:
    params: EnvParams
    episodes: tuple[FullEpisode, ...]


@dataclass(frozen=True, slots=True)
class CompressionReport:
    """One row of the compression/timing table."""

    env_name: str
    full_bytes: int
    minimal_bytes: int
    resim_seconds: float
    episodes: int
    steps: int

    @property
    def ratio(self) -> float:
        # Always derived from the byte counts, never stored separately.
        return self.full_bytes / self.minimal_bytes


def episode_reward_sum(episode: FullEpisode) -> float:
    """Left-to-right sum of step rewards, in recorded order.

    The order is fixed so the result is bit-reproducible and matches the
    recording-time ledger accumulation exactly.
    """
    total = 0.0
    for step in episode.steps:
        total = total + step.reward
    return total


def _pack_floats(values) -> bytes:
    # array('d') copies the raw binary64 bit patterns, so the comparison
    # distinguishes 0.0 from -0.0 and treats equal-payload NaNs as equal.
    return array("d", values).tobytes()


def _obs_equal(a: Observation, b: Observation) -> bool:
    if isinstance(a, DiscreteObs):
        return isinstance(b, DiscreteObs) and a.value == b.value
    if not isinstance(b, VectorObs) or len(a.values) != len(b.values):
        return False
    return _pack_floats(a.values) == _pack_floats(b.values)


def _params_equal(a: EnvParams, b: EnvParams) -> bool:
    if a.env_name != b.env_name or a.env_version != b.env_version:
        return False
    if list(a.entries.keys()) != list(b.entries.keys()):
        return False
    for key, va in a.entries.items():
        vb = b.entries[key]
        if type(va) is not type(vb):
            return False
        if isinstance(va, float):
            if struct.pack("<d", va) != struct.pack("<d", vb):
                return False
        elif va != vb:
            return False
    return True


def _episode_equal(a: FullEpisode, b: FullEpisode) -> bool:
    if a.terminated != b.terminated or len(a.steps) != len(b.steps):
        return False
    if not _obs_equal(a.initial_observation, b.initial_observation):
        return False
    if _pack_floats(s.reward for s in a.steps) != _pack_floats(s.reward for s in b.steps):
        return False
    if a.steps:
        first_a, first_b = a.steps[0], b.steps[0]
        if type(first_a.observation) is not type(first_b.observation):
            return False
        if type(first_a.action) is not type(first_b.action):
            return False
        if isinstance(first_a.observation, DiscreteObs):
            if any(
                sa.observation.value != sb.observation.value
                for sa, sb in zip(a.steps, b.steps)
            ):
                return False
        else:
            flat_a = chain.from_iterable(s.observation.values for s in a.steps)
            flat_b = chain.from_iterable(s.observation.values for s in b.steps)
            if _pack_floats(flat_a) != _pack_floats(flat_b):
                return False
        if isinstance(first_a.action, DiscreteAction):
            if any(sa.action.index != sb.action.index for sa, sb in zip(a.steps, b.steps)):
                return False
        else:
            flat_a = chain.from_iterable(s.action.values for s in a.steps)
            flat_b = chain.from_iterable(s.action.values for s in b.steps)
            if _pack_floats(flat_a) != _pack_floats(flat_b):
                return False
    return True


def trace_equal(a: FullTrace, b: FullTrace) -> bool:
    """Bitwise trace equality.

    Floats are compared by bit pattern: NaN equals NaN, and 0.0 does not
    equal -0.0. One ULP of drift anywhere makes traces unequal.
    """
    if not _params_equal(a.params, b.params):
        return False
    if len(a.episodes) != len(b.episodes):
        return False
    return all(_episode_equal(ea, eb) for ea, eb in zip(a.episodes, b.episodes))


def _validate_actions(env_name, space, episode_index, actions) -> None:
    if not actions:
        raise SchemaMismatchError(f"episode {episode_index} has an empty action list")
    if isinstance(space, DiscreteSpace):
        for action in actions:
            if not isinstance(action, DiscreteAction) or not 0 <= action.index < space.n:
                raise SchemaMismatchError(
                    f"episode {episode_index}: action does not fit "
                    f"{env_name}'s discrete action space"
                )
    else:
        for action in actions:
            if not isinstance(action, ContinuousAction) or len(action.values) != space.dim:
                raise SchemaMismatchError(
                    f"episode {episode_index}: action does not fit "
                    f"{env_name}'s continuous action space"
                )
            for v in action.values:
                if not isinstance(v, float) or not (space.low <= v <= space.high):
                    raise SchemaMismatchError(
                        f"episode {episode_index}: action component {v!r} "
                        f"outside [{space.low}, {space.high}]"
                    )


def _validate_observation(env_name, space, episode_index, obs) -> None:
    if isinstance(space, DiscreteSpace):
        if not isinstance(obs, DiscreteObs) or not 0 <= obs.value < space.n:
            raise SchemaMismatchError(
                f"episode {episode_index}: observation does not fit "
                f"{env_name}'s discrete observation space"
            )
    else:
        if not isinstance(obs, VectorObs) or len(obs.values) != space.dim:
            raise SchemaMismatchError(
                f"episode {episode_index}: observation is not a "
                f"{space.dim}-component vector"
            )
        for v in obs.values:
            if not isinstance(v, float):
                raise SchemaMismatchError(
                    f"episode {episode_index}: observation component {v!r} is not a float"
                )


def validate_minimal(trace: MinimalTrace) -> None:
    """Check every MinimalTrace invariant against the env registry."""
    if trace.format_version != FORMAT_VERSION:
        raise SchemaMismatchError(
            f"unsupported trace format_version {trace.format_version}"
        )
    if not isinstance(trace.created_unix_ms, int) or not (
        _INT64_MIN <= trace.created_unix_ms <= _INT64_MAX
    ):
        raise SchemaMismatchError("created_unix_ms out of int64 range")
    schema = get_schema(trace.params.env_name)
    validate_params(schema, trace.params)
    for i, episode in enumerate(trace.episodes):
        if not isinstance(episode.seed, int) or not 0 <= episode.seed <= MASK64:
            raise SchemaMismatchError(f"episode {i}: seed out of uint64 range")
        _validate_actions(schema.name, schema.action_space, i, episode.actions)


def validate_full(trace: FullTrace) -> None:
    """Check every FullTrace invariant against the env registry."""
    schema = get_schema(trace.params.env_name)
    validate_params(schema, trace.params)
    for i, episode in enumerate(trace.episodes):
        _validate_observation(
            schema.name, schema.observation_space, i, episode.initial_observation
        )
        _validate_actions(
            schema.name, schema.action_space, i, [s.action for s in episode.steps]
        )
        for step in episode.steps:
            _validate_observation(
                schema.name, schema.observation_space, i, step.observation
            )
            if not isinstance(step.reward, float):
                raise SchemaMismatchError(f"episode {i}: reward {step.reward!r} is not a float")
