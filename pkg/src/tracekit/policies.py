"""Demo policies and the recording driver used by the CLI.

Policies are deliberately learning-free: minimal traces are
policy-agnostic, so scripted or seeded-random action streams exercise
the full record/replay pipeline. Episode seeds and the random policy's
stream both derive from one master seed, making whole runs reproducible
from a single number.
"""

from __future__ import annotations

from tracekit.envs.base import (
    ContinuousAction,
    DiscreteAction,
    DiscreteSpace,
    EnvParams,
    make,
)
from tracekit.recorder import RewardLedger, record
from tracekit.rng import SplitMix64
from tracekit.traces import MinimalTrace


def random_action(space, rng: SplitMix64):
    if isinstance(space, DiscreteSpace):
        return DiscreteAction(rng.next_below(space.n))
    return ContinuousAction(
        tuple(rng.next_uniform(space.low, space.high) for _ in range(space.dim))
    )


def scripted_action(space, rng: SplitMix64):
    """Constant policy: action 0, or the zero vector."""
    if isinstance(space, DiscreteSpace):
        return DiscreteAction(0)
    return ContinuousAction((0.0,) * space.dim)


POLICIES = {"random": random_action, "scripted": scripted_action}


def record_run(
    params: EnvParams,
    policy: str = "random",
    episodes: int | None = None,
    max_steps: int | None = None,
    master_seed: int = 0,
    label: str = "",
    created_unix_ms: int | None = None,
) -> tuple[MinimalTrace, RewardLedger]:
    """Run a policy and record it; stop after ``episodes`` episodes or
    ``max_steps`` total steps, whichever comes first.

    A step budget may cut the last episode short; it is kept with
    terminated=False like any partial episode.
    """
    if episodes is None and max_steps is None:
        raise ValueError("need an episode count or a step budget")
    if episodes is not None and episodes < 1:
        raise ValueError("episodes must be >= 1")
    try:
        act = POLICIES[policy]
    except KeyError:
        raise ValueError(f"unknown policy {policy!r}") from None

    env = make(params)
    recorder = record(env, label)
    master = SplitMix64(master_seed)
    steps_taken = 0
    episodes_run = 0
    while episodes is None or episodes_run < episodes:
        if max_steps is not None and steps_taken >= max_steps:
            break
        # Two draws per episode: the env seed and the policy stream seed.
        seed = master.next_u64()
        policy_rng = SplitMix64(master.next_u64())
        recorder.reset(seed)
        episodes_run += 1
        while True:
            result = recorder.step(act(env.action_space, policy_rng))
            steps_taken += 1
            if result.done or (max_steps is not None and steps_taken >= max_steps):
                break
    return recorder.finalize(created_unix_ms)
