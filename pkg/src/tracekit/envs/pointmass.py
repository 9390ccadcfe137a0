"""2-D point mass steered by four thrusters.

Observation is (pos_x, pos_y, vel_x, vel_y, goal_x, goal_y); the action
is four thrust components in [-1, 1], with net force ((a0 - a1), (a2 -
a3)) * thrust_mag. Integration is semi-implicit Euler; reward is the
negative Euclidean distance to the goal; the episode ends inside
``goal_radius`` or at the 500-step cap.

Its role in the toolkit is to exercise the opposite compression regime
from the discrete environments: action bytes per step are nearly as
large as observation bytes, so minimal traces gain little.
"""

from __future__ import annotations

import math

from tracekit.envs.base import (
    Action,
    BoxSpace,
    Environment,
    EnvSchema,
    Observation,
    ParamSpec,
    VectorObs,
    VectorSpace,
    register,
)
from tracekit.rng import SplitMix64


@register
class PointMass4(Environment):
    schema = EnvSchema(
        name="PointMass4-det-v1",
        version=1,
        params=(
            ParamSpec("dt", "float", 0.05),
            ParamSpec("goal_radius", "float", 0.25),
            ParamSpec("goal_x", "float", 3.0),
            ParamSpec("goal_y", "float", 4.0),
            ParamSpec("mass", "float", 1.0),
            ParamSpec("start_range", "float", 1.0),
            ParamSpec("thrust_mag", "float", 1.0),
        ),
        observation_space=VectorSpace(6),
        action_space=BoxSpace(4, -1.0, 1.0),
        max_steps=500,
    )

    def __init__(self, params):
        super().__init__(params)
        e = params.entries
        self._dt = e["dt"]
        self._mass = e["mass"]
        self._thrust = e["thrust_mag"]
        self._goal_x = e["goal_x"]
        self._goal_y = e["goal_y"]
        self._goal_radius = e["goal_radius"]
        self._start_range = e["start_range"]
        self._px = self._py = self._vx = self._vy = 0.0

    def _do_reset(self, rng: SplitMix64) -> Observation:
        r = self._start_range
        self._px = rng.next_uniform(-r, r)
        self._py = rng.next_uniform(-r, r)
        self._vx = 0.0
        self._vy = 0.0
        return self._obs()

    def _do_step(self, action: Action) -> tuple[Observation, float, bool]:
        a = action.values
        dt = self._dt
        force_x = (a[0] - a[1]) * self._thrust
        force_y = (a[2] - a[3]) * self._thrust
        self._vx = self._vx + dt * force_x / self._mass
        self._vy = self._vy + dt * force_y / self._mass
        self._px = self._px + dt * self._vx
        self._py = self._py + dt * self._vy
        dx = self._px - self._goal_x
        dy = self._py - self._goal_y
        distance = math.sqrt(dx * dx + dy * dy)
        return self._obs(), -distance, distance <= self._goal_radius

    def _obs(self) -> VectorObs:
        return VectorObs(
            (self._px, self._py, self._vx, self._vy, self._goal_x, self._goal_y)
        )
