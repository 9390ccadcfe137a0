"""Shared fixtures: trace strategies and the injected-fault environment."""

from __future__ import annotations

import dataclasses
import math

import pytest
from hypothesis import strategies as st

from tracekit.envs import (
    ContinuousAction,
    DiscreteAction,
    DiscreteSpace,
    EnvParams,
    get_schema,
    register,
)
from tracekit.envs.cartpole import CartPole
from tracekit.traces import FORMAT_VERSION, MinimalEpisode, MinimalTrace

BUNDLED_ENVS = ("CartPole-det-v1", "TaxiGrid-det-v1", "PointMass4-det-v1")

_INT64 = st.integers(-(2**63), 2**63 - 1)
_UINT64 = st.integers(0, 2**64 - 1)


@st.composite
def minimal_traces(draw, max_episodes: int = 5) -> MinimalTrace:
    """Schema-valid minimal traces over all bundled envs, with varied params."""
    name = draw(st.sampled_from(BUNDLED_ENVS))
    schema = get_schema(name)
    entries = {}
    for spec in schema.params:
        if spec.kind == "float":
            entries[spec.name] = draw(
                st.floats(allow_nan=False, allow_infinity=False)
            )
        elif spec.kind == "int":
            entries[spec.name] = draw(_INT64)
        else:
            entries[spec.name] = draw(st.booleans())
    params = EnvParams(name, schema.version, entries)

    space = schema.action_space
    if isinstance(space, DiscreteSpace):
        actions = st.lists(
            st.builds(DiscreteAction, st.integers(0, space.n - 1)),
            min_size=1,
            max_size=40,
        ).map(tuple)
    else:
        component = st.floats(
            min_value=space.low, max_value=space.high, allow_nan=False
        )
        actions = st.lists(
            st.builds(
                ContinuousAction,
                st.lists(component, min_size=space.dim, max_size=space.dim).map(tuple),
            ),
            min_size=1,
            max_size=15,
        ).map(tuple)
    episodes = draw(
        st.lists(
            st.builds(
                MinimalEpisode, seed=_UINT64, actions=actions, terminated=st.booleans()
            ),
            max_size=max_episodes,
        )
    )
    return MinimalTrace(
        format_version=FORMAT_VERSION,
        params=params,
        episodes=tuple(episodes),
        created_unix_ms=draw(_INT64),
        label=draw(st.text(max_size=20)),
    )


@register
class UnstableCartPole(CartPole):
    """Test-only env: drifts one reward ULP on a fixed schedule of resets.

    Every ``fault_period``-th reset (class-wide count) starts an episode
    whose first step reward is bumped by one ULP, reproducing an
    almost-deterministic environment.
    """

    schema = dataclasses.replace(CartPole.schema, name="UnstableCartPole-test-v1")
    resets = 0
    fault_period = 20

    def _do_reset(self, rng):
        cls = type(self)
        cls.resets += 1
        self._faulty = cls.resets % cls.fault_period == 0
        return super()._do_reset(rng)

    def _do_step(self, action):
        obs, reward, done = super()._do_step(action)
        if self._faulty and self._steps == 0:
            reward = math.nextafter(reward, math.inf)
        return obs, reward, done


@pytest.fixture
def unstable_cartpole():
    UnstableCartPole.resets = 0
    yield UnstableCartPole
    UnstableCartPole.resets = 0
