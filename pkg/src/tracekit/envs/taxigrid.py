"""5x5 taxi grid world (500 discrete states, 6 discrete actions).

The taxi navigates a walled grid, picks a passenger up at one of four
depots (R, G, Y, B) and drops them at a destination depot. State index
encoding: ``((row*5 + col)*5 + passenger)*4 + destination`` where
passenger 0-3 is a depot and 4 means "in the taxi".

Rewards come from the int64 params: ``step_penalty`` on every move,
``illegal_penalty`` for a pickup/dropoff at the wrong place, and
``dropoff_reward`` on the successful dropoff that ends the episode.
Episodes cap at 200 steps.
"""

from __future__ import annotations

from tracekit.envs.base import (
    Action,
    DiscreteObs,
    DiscreteSpace,
    Environment,
    EnvSchema,
    Observation,
    ParamSpec,
    register,
)
from tracekit.rng import SplitMix64

DEPOTS = ((0, 0), (0, 4), (4, 0), (4, 3))  # R, G, Y, B

# Cells whose eastern edge is a wall.
_EAST_BLOCKED = frozenset({(0, 1), (1, 1), (3, 0), (3, 2), (4, 0), (4, 2)})

SOUTH, NORTH, EAST, WEST, PICKUP, DROPOFF = range(6)


def encode_state(row: int, col: int, passenger: int, destination: int) -> int:
    return ((row * 5 + col) * 5 + passenger) * 4 + destination


def decode_state(index: int) -> tuple[int, int, int, int]:
    index, destination = divmod(index, 4)
    index, passenger = divmod(index, 5)
    row, col = divmod(index, 5)
    return row, col, passenger, destination


@register
class TaxiGrid(Environment):
    schema = EnvSchema(
        name="TaxiGrid-det-v1",
        version=1,
        params=(
            ParamSpec("dropoff_reward", "int", 20),
            ParamSpec("illegal_penalty", "int", -10),
            ParamSpec("step_penalty", "int", -1),
        ),
        observation_space=DiscreteSpace(500),
        action_space=DiscreteSpace(6),
        max_steps=200,
    )

    def __init__(self, params):
        super().__init__(params)
        e = params.entries
        self._step_reward = float(e["step_penalty"])
        self._illegal_reward = float(e["illegal_penalty"])
        self._dropoff_reward = float(e["dropoff_reward"])
        self._row = self._col = self._passenger = self._destination = 0

    def _do_reset(self, rng: SplitMix64) -> Observation:
        # Draw order: row, col, passenger depot, then destination uniform
        # over the three non-passenger depots (pass != dest, like the
        # 300-state classic start distribution).
        self._row = rng.next_below(5)
        self._col = rng.next_below(5)
        self._passenger = rng.next_below(4)
        others = [d for d in range(4) if d != self._passenger]
        self._destination = others[rng.next_below(3)]
        return self._obs()

    def _do_step(self, action: Action) -> tuple[Observation, float, bool]:
        a = action.index
        reward = self._step_reward
        done = False
        row, col = self._row, self._col
        if a == SOUTH:
            self._row = min(4, row + 1)
        elif a == NORTH:
            self._row = max(0, row - 1)
        elif a == EAST:
            if col < 4 and (row, col) not in _EAST_BLOCKED:
                self._col = col + 1
        elif a == WEST:
            if col > 0 and (row, col - 1) not in _EAST_BLOCKED:
                self._col = col - 1
        elif a == PICKUP:
            if self._passenger < 4 and (row, col) == DEPOTS[self._passenger]:
                self._passenger = 4
            else:
                reward = self._illegal_reward
        else:  # DROPOFF
            if self._passenger == 4 and (row, col) == DEPOTS[self._destination]:
                self._passenger = self._destination
                reward = self._dropoff_reward
                done = True
            elif self._passenger == 4 and (row, col) in DEPOTS:
                self._passenger = DEPOTS.index((row, col))
            else:
                reward = self._illegal_reward
        return self._obs(), reward, done

    def _obs(self) -> DiscreteObs:
        return DiscreteObs(
            encode_state(self._row, self._col, self._passenger, self._destination)
        )
