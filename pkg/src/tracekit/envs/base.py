"""Environment abstraction: value types, schemas, registry, validation.

An environment's behavior is a pure function of (EnvParams, reset seed,
action sequence). Nothing here touches global randomness or the wall
clock; replaying the same inputs yields bitwise-identical observations
and rewards.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar, Union

from tracekit.errors import (
    EpisodeFinishedError,
    InvalidActionError,
    SchemaMismatchError,
    UnknownEnvError,
)
from tracekit.rng import MASK64, SplitMix64

ParamValue = Union[float, int, bool]


@dataclass(frozen=True)
class EnvParams:
    """Complete initial configuration fixing reset and step behavior.

    ``entries`` is re-ordered into lexicographic key order on
    construction; that order is the canonical form used for hashing and
    serialization.
    """

    env_name: str
    env_version: int
    entries: dict[str, ParamValue]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", dict(sorted(self.entries.items())))


@dataclass(frozen=True, slots=True)
class DiscreteObs:
    value: int


@dataclass(frozen=True, slots=True)
class VectorObs:
    values: tuple[float, ...]


Observation = Union[DiscreteObs, VectorObs]


@dataclass(frozen=True, slots=True)
class DiscreteAction:
    index: int


@dataclass(frozen=True, slots=True)
class ContinuousAction:
    values: tuple[float, ...]


Action = Union[DiscreteAction, ContinuousAction]


@dataclass(frozen=True, slots=True)
class StepResult:
    observation: Observation
    reward: float
    done: bool


@dataclass(frozen=True)
class DiscreteSpace:
    """n distinct actions or observations, indexed 0..n-1."""

    n: int


@dataclass(frozen=True)
class VectorSpace:
    """Fixed-length vector of binary64 components (observations)."""

    dim: int


@dataclass(frozen=True)
class BoxSpace:
    """Fixed-length vector with per-component bounds (actions)."""

    dim: int
    low: float
    high: float


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str  # "float" | "int" | "bool"
    default: ParamValue


@dataclass(frozen=True)
class EnvSchema:
    name: str
    version: int
    params: tuple[ParamSpec, ...]
    observation_space: DiscreteSpace | VectorSpace
    action_space: DiscreteSpace | BoxSpace
    max_steps: int


def validate_params(schema: EnvSchema, params: EnvParams) -> None:
    """Raise SchemaMismatchError unless ``params`` exactly fits ``schema``."""
    if params.env_name != schema.name:
        raise SchemaMismatchError(
            f"params are for {params.env_name!r}, not {schema.name!r}"
        )
    if params.env_version != schema.version:
        raise SchemaMismatchError(
            f"{schema.name}: unsupported env_version {params.env_version} "
            f"(expected {schema.version})"
        )
    specs = {spec.name: spec for spec in schema.params}
    missing = sorted(specs.keys() - params.entries.keys())
    if missing:
        raise SchemaMismatchError(f"{schema.name}: missing parameter {missing[0]!r}")
    extra = sorted(params.entries.keys() - specs.keys())
    if extra:
        raise SchemaMismatchError(f"{schema.name}: unknown parameter {extra[0]!r}")
    for name, value in params.entries.items():
        kind = specs[name].kind
        if kind == "bool":
            ok = isinstance(value, bool)
        elif kind == "int":
            ok = isinstance(value, int) and not isinstance(value, bool)
        else:
            ok = isinstance(value, float) and math.isfinite(value)
        if not ok:
            raise SchemaMismatchError(
                f"{schema.name}: parameter {name!r} must be a finite {kind}, "
                f"got {value!r}"
            )


def validate_action(space: DiscreteSpace | BoxSpace, action: Action) -> None:
    """Raise InvalidActionError unless ``action`` fits ``space``."""
    if isinstance(space, DiscreteSpace):
        if not isinstance(action, DiscreteAction):
            raise InvalidActionError("expected a discrete action")
        if not 0 <= action.index < space.n:
            raise InvalidActionError(
                f"action index {action.index} out of range [0, {space.n})"
            )
        return
    if not isinstance(action, ContinuousAction):
        raise InvalidActionError("expected a continuous action")
    if len(action.values) != space.dim:
        raise InvalidActionError(
            f"action has {len(action.values)} components, expected {space.dim}"
        )
    for v in action.values:
        if not isinstance(v, float) or not (space.low <= v <= space.high):
            raise InvalidActionError(
                f"action component {v!r} outside [{space.low}, {space.high}]"
            )


class Environment(ABC):
    """Deterministic episodic environment.

    Subclasses define a class-level ``schema`` and implement
    ``_do_reset``/``_do_step``. Instances are single-threaded; create one
    per thread. The step counter and the done flag (including the
    ``schema.max_steps`` cap) are managed here so every environment
    truncates identically.
    """

    schema: ClassVar[EnvSchema]

    def __init__(self, params: EnvParams):
        validate_params(self.schema, params)
        self.params = params
        self._steps = 0
        self._done = True
        self._started = False

    @property
    def observation_space(self) -> DiscreteSpace | VectorSpace:
        return self.schema.observation_space

    @property
    def action_space(self) -> DiscreteSpace | BoxSpace:
        return self.schema.action_space

    def reset(self, seed: int) -> Observation:
        """Start a new episode; state becomes a pure function of (params, seed)."""
        if not 0 <= seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self._steps = 0
        self._done = False
        self._started = True
        return self._do_reset(SplitMix64(seed))

    def step(self, action: Action) -> StepResult:
        if not self._started:
            raise EpisodeFinishedError("environment has not been reset")
        if self._done:
            raise EpisodeFinishedError("episode finished; reset before stepping")
        validate_action(self.action_space, action)
        observation, reward, terminal = self._do_step(action)
        self._steps += 1
        done = terminal or self._steps >= self.schema.max_steps
        self._done = done
        return StepResult(observation=observation, reward=reward, done=done)

    @abstractmethod
    def _do_reset(self, rng: SplitMix64) -> Observation: ...

    @abstractmethod
    def _do_step(self, action: Action) -> tuple[Observation, float, bool]: ...


_REGISTRY: dict[str, type[Environment]] = {}


def register(env_cls: type[Environment]) -> type[Environment]:
    """Register an Environment subclass under its schema name."""
    _REGISTRY[env_cls.schema.name] = env_cls
    return env_cls


def registered_names() -> list[str]:
    return sorted(_REGISTRY)


def get_schema(name: str) -> EnvSchema:
    try:
        return _REGISTRY[name].schema
    except KeyError:
        raise UnknownEnvError(f"unknown environment {name!r}") from None


def make(params: EnvParams) -> Environment:
    """Instantiate the registered environment for ``params``.

    Raises UnknownEnvError for unregistered names and SchemaMismatchError
    for incomplete or mistyped parameter sets.
    """
    try:
        env_cls = _REGISTRY[params.env_name]
    except KeyError:
        raise UnknownEnvError(f"unknown environment {params.env_name!r}") from None
    return env_cls(params)


def default_params(name: str) -> EnvParams:
    schema = get_schema(name)
    return EnvParams(
        env_name=schema.name,
        env_version=schema.version,
        entries={spec.name: spec.default for spec in schema.params},
    )


def _space_doc(space: DiscreteSpace | VectorSpace | BoxSpace) -> dict:
    if isinstance(space, DiscreteSpace):
        return {"kind": "discrete", "n": space.n}
    if isinstance(space, VectorSpace):
        return {"kind": "vector", "dim": space.dim}
    return {"kind": "box", "dim": space.dim, "low": space.low, "high": space.high}


def schemas_document() -> dict:
    """JSON-ready description of every registered environment."""
    environments = []
    for name in registered_names():
        schema = _REGISTRY[name].schema
        environments.append(
            {
                "name": schema.name,
                "version": schema.version,
                "parameters": [
                    {"name": s.name, "type": s.kind, "default": s.default}
                    for s in schema.params
                ],
                "observation_space": _space_doc(schema.observation_space),
                "action_space": _space_doc(schema.action_space),
                "max_steps": schema.max_steps,
            }
        )
    return {"environments": environments}
