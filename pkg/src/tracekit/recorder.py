"""Recording wrapper that accumulates a MinimalTrace around any environment.

The wrapper is a transparent pass-through: reset/step behave exactly as
on the wrapped environment, while seeds and actions are captured. It
also keeps a per-episode (steps, reward_sum, terminated) ledger. The
ledger is redundant on purpose: it is recorded at training time, so
tests can prove that re-simulation reproduces training-time rewards
without trusting re-simulation itself.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from tracekit.envs.base import Action, Environment, Observation, StepResult
from tracekit.errors import AlreadyFinalizedError, NoOpenEpisodeError
from tracekit.traces import FORMAT_VERSION, MinimalEpisode, MinimalTrace


@dataclass(frozen=True, slots=True)
class LedgerEntry:
    steps: int
    reward_sum: float
    terminated: bool


RewardLedger = tuple[LedgerEntry, ...]


class RecordingEnvironment:
    """One recorder per environment instance; single-threaded like the env.

    Do not drive the wrapped environment directly while recording, or the
    recorded episodes will not match what actually ran.
    """

    def __init__(self, env: Environment, label: str = ""):
        self._env = env
        self._label = label
        self._params = env.params  # captured once at wrap time
        self._episodes: list[MinimalEpisode] = []
        self._ledger: list[LedgerEntry] = []
        self._open = False
        self._finalized = False
        self._seed = 0
        self._actions: list[Action] = []
        self._reward_sum = 0.0

    @property
    def params(self):
        return self._params

    @property
    def observation_space(self):
        return self._env.observation_space

    @property
    def action_space(self):
        return self._env.action_space

    @property
    def episodes_recorded(self) -> int:
        return len(self._episodes)

    def _close_episode(self, terminated: bool) -> None:
        # Episodes with zero actions are discarded, not stored.
        if self._actions:
            self._episodes.append(
                MinimalEpisode(
                    seed=self._seed,
                    actions=tuple(self._actions),
                    terminated=terminated,
                )
            )
            self._ledger.append(
                LedgerEntry(
                    steps=len(self._actions),
                    reward_sum=self._reward_sum,
                    terminated=terminated,
                )
            )
        self._open = False
        self._actions = []
        self._reward_sum = 0.0

    def reset(self, seed: int) -> Observation:
        """Close any episode in progress (terminated=False) and start a new one."""
        if self._finalized:
            raise AlreadyFinalizedError("recorder already finalized")
        if self._open:
            self._close_episode(terminated=False)
        obs = self._env.reset(seed)
        self._open = True
        self._seed = seed
        return obs

    def step(self, action: Action) -> StepResult:
        if self._finalized:
            raise AlreadyFinalizedError("recorder already finalized")
        if not self._open:
            raise NoOpenEpisodeError("no episode in progress; reset first")
        result = self._env.step(action)
        self._actions.append(action)
        self._reward_sum = self._reward_sum + result.reward
        if result.done:
            self._close_episode(terminated=True)
        return result

    def finalize(self, created_unix_ms: int | None = None) -> tuple[MinimalTrace, RewardLedger]:
        """Return the immutable trace and ledger; the recorder becomes inert."""
        if self._finalized:
            raise AlreadyFinalizedError("recorder already finalized")
        if self._open:
            self._close_episode(terminated=False)
        self._finalized = True
        if created_unix_ms is None:
            created_unix_ms = time.time_ns() // 1_000_000
        trace = MinimalTrace(
            format_version=FORMAT_VERSION,
            params=self._params,
            episodes=tuple(self._episodes),
            created_unix_ms=created_unix_ms,
            label=self._label,
        )
        return trace, tuple(self._ledger)


def record(env: Environment, label: str = "") -> RecordingEnvironment:
    """Wrap ``env`` so that every reset/step is captured into a minimal trace."""
    return RecordingEnvironment(env, label)
