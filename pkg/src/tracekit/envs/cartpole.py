"""Cart-pole balancing with fully deterministic dynamics.

Classic formulation: a pole hinged on a cart, two discrete actions push
the cart left or right with a fixed force. The episode ends when the
pole tips past ``theta_threshold``, the cart leaves ``[-x_threshold,
x_threshold]``, or the 200-step cap is hit. Reward is 1.0 per step.

State updates use the in-repo trig kernels (see tracekit.trig), so
traces replay bit-exactly across platforms. ``euler`` selects plain
forward Euler (True) or semi-implicit Euler (False) integration.
"""

from __future__ import annotations

from tracekit import trig
from tracekit.envs.base import (
    Action,
    DiscreteSpace,
    Environment,
    EnvSchema,
    Observation,
    ParamSpec,
    VectorObs,
    VectorSpace,
    register,
)
from tracekit.rng import SplitMix64

# 12 degrees in radians.
DEFAULT_THETA_THRESHOLD = 0.20943951023931953


@register
class CartPole(Environment):
    schema = EnvSchema(
        name="CartPole-det-v1",
        version=1,
        params=(
            ParamSpec("cart_mass", "float", 1.0),
            ParamSpec("euler", "bool", True),
            ParamSpec("force_mag", "float", 10.0),
            ParamSpec("gravity", "float", 9.8),
            ParamSpec("pole_length", "float", 0.5),
            ParamSpec("pole_mass", "float", 0.1),
            ParamSpec("tau", "float", 0.02),
            ParamSpec("theta_threshold", "float", DEFAULT_THETA_THRESHOLD),
            ParamSpec("x_threshold", "float", 2.4),
        ),
        observation_space=VectorSpace(4),
        action_space=DiscreteSpace(2),
        max_steps=200,
    )

    def __init__(self, params):
        super().__init__(params)
        e = params.entries
        self._gravity = e["gravity"]
        self._pole_mass = e["pole_mass"]
        self._length = e["pole_length"]
        self._force_mag = e["force_mag"]
        self._tau = e["tau"]
        self._theta_threshold = e["theta_threshold"]
        self._x_threshold = e["x_threshold"]
        self._euler = e["euler"]
        self._total_mass = e["pole_mass"] + e["cart_mass"]
        self._polemass_length = e["pole_mass"] * e["pole_length"]
        self._x = self._x_dot = self._theta = self._theta_dot = 0.0

    def _do_reset(self, rng: SplitMix64) -> Observation:
        # Four draws in state order: x, x_dot, theta, theta_dot.
        self._x = rng.next_uniform(-0.05, 0.05)
        self._x_dot = rng.next_uniform(-0.05, 0.05)
        self._theta = rng.next_uniform(-0.05, 0.05)
        self._theta_dot = rng.next_uniform(-0.05, 0.05)
        return self._obs()

    def _do_step(self, action: Action) -> tuple[Observation, float, bool]:
        force = self._force_mag if action.index == 1 else -self._force_mag
        cos_theta = trig.cos(self._theta)
        sin_theta = trig.sin(self._theta)

        temp = (
            force + self._polemass_length * self._theta_dot * self._theta_dot * sin_theta
        ) / self._total_mass
        theta_acc = (self._gravity * sin_theta - cos_theta * temp) / (
            self._length
            * (4.0 / 3.0 - self._pole_mass * cos_theta * cos_theta / self._total_mass)
        )
        x_acc = temp - self._polemass_length * theta_acc * cos_theta / self._total_mass

        tau = self._tau
        if self._euler:
            self._x = self._x + tau * self._x_dot
            self._x_dot = self._x_dot + tau * x_acc
            self._theta = self._theta + tau * self._theta_dot
            self._theta_dot = self._theta_dot + tau * theta_acc
        else:
            self._x_dot = self._x_dot + tau * x_acc
            self._x = self._x + tau * self._x_dot
            self._theta_dot = self._theta_dot + tau * theta_acc
            self._theta = self._theta + tau * self._theta_dot

        tipped = (
            self._x < -self._x_threshold
            or self._x > self._x_threshold
            or self._theta < -self._theta_threshold
            or self._theta > self._theta_threshold
        )
        return self._obs(), 1.0, tipped

    def _obs(self) -> VectorObs:
        return VectorObs((self._x, self._x_dot, self._theta, self._theta_dot))
