"""Re-simulation: rebuild full traces from minimal ones and verify them.

Each episode replays in a fresh environment instance, so episodes never
share state and may be distributed across worker processes. Parallel
re-simulation reassembles episodes in input order and reports the
lowest-index failure deterministically, whatever the scheduling.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor

from tracekit import codec
from tracekit.envs.base import EnvParams, make
from tracekit.errors import (
    PrematureTerminationError,
    TerminationMismatchError,
    TracekitError,
)
from tracekit.traces import (
    CompressionReport,
    FullEpisode,
    FullTrace,
    MinimalEpisode,
    MinimalTrace,
    Step,
    trace_equal,
)

logger = logging.getLogger(__name__)


def episode_to_trace(params: EnvParams, episode: MinimalEpisode) -> FullEpisode:
    """Replay one episode: reset with its seed, apply its actions in order.

    Raises PrematureTerminationError if the environment finishes while
    actions remain, and TerminationMismatchError if the final done flag
    disagrees with the recorded ``terminated`` flag. A replay against an
    environment with different parameters therefore never succeeds
    silently with the wrong shape.
    """
    env = make(params)
    initial = env.reset(episode.seed)
    steps: list[Step] = []
    total = len(episode.actions)
    done = False
    for i, action in enumerate(episode.actions):
        result = env.step(action)
        steps.append(Step(observation=result.observation, action=action, reward=result.reward))
        done = result.done
        if done and i < total - 1:
            raise PrematureTerminationError(
                f"environment finished after {i + 1} of {total} recorded actions"
            )
    if done != episode.terminated:
        raise TerminationMismatchError(
            f"recorded terminated={episode.terminated} but replay ended with done={done}"
        )
    return FullEpisode(initial_observation=initial, steps=tuple(steps), terminated=episode.terminated)


def _attach_index(exc: TracekitError, index: int) -> TracekitError:
    wrapped = type(exc)(f"episode {index}: {exc}")
    wrapped.episode_index = index
    return wrapped


def resimulate(minimal: MinimalTrace) -> FullTrace:
    """Sequential replay of every episode, order-preserving.

    The first failing episode aborts with its index attached to the error.
    """
    episodes: list[FullEpisode] = []
    for i, episode in enumerate(minimal.episodes):
        try:
            episodes.append(episode_to_trace(minimal.params, episode))
        except TracekitError as exc:
            raise _attach_index(exc, i) from exc
    return FullTrace(params=minimal.params, episodes=tuple(episodes))


def _replay_chunk(job):
    """Worker: replay a contiguous chunk, returning episodes or the first error."""
    params, start, episodes = job
    out = []
    for offset, episode in enumerate(episodes):
        try:
            out.append(episode_to_trace(params, episode))
        except TracekitError as exc:
            return start, _attach_index(exc, start + offset)
    return start, out


def resimulate_parallel(minimal: MinimalTrace, workers: int) -> FullTrace:
    """Replay episodes across ``workers`` processes.

    The result is trace_equal to :func:`resimulate` for every worker
    count; errors are reported for the lowest failing episode index
    regardless of scheduling.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(minimal.episodes) <= 1:
        return resimulate(minimal)

    episodes = minimal.episodes
    chunk_size = max(1, -(-len(episodes) // (workers * 4)))
    jobs = [
        (minimal.params, start, episodes[start : start + chunk_size])
        for start in range(0, len(episodes), chunk_size)
    ]
    out: list[FullEpisode] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map() yields results in job order, which keeps both episode
        # order and first-error selection deterministic.
        for _, result in pool.map(_replay_chunk, jobs):
            if isinstance(result, TracekitError):
                raise result
            out.extend(result)
    return FullTrace(params=minimal.params, episodes=tuple(out))


def verify_determinism(minimal: MinimalTrace, runs: int) -> tuple[int, int]:
    """Re-simulate ``runs`` times; count runs not bitwise-equal to the first.

    A run that errors counts as a failure (with a logged diagnostic)
    rather than aborting, so flaky environments are measurable. Runs are
    sequential so the run index is well defined.
    """
    if runs < 2:
        raise ValueError("runs must be >= 2")
    reference: FullTrace | None = None
    failed = 0
    for run in range(runs):
        try:
            result = resimulate(minimal)
        except TracekitError as exc:
            logger.warning("re-simulation run %d failed: %s", run, exc)
            failed += 1
            continue
        if run == 0:
            reference = result
        elif reference is None or not trace_equal(reference, result):
            logger.warning("re-simulation run %d produced a different trace", run)
            failed += 1
    return failed, runs


def compression_report(
    minimal: MinimalTrace, full: FullTrace, resim_seconds: float
) -> CompressionReport:
    """Measure both traces under the toolkit's own codec.

    Both sides go through the same CBOR+DEFLATE pipeline so the ratio is
    like-for-like. ``resim_seconds`` should cover the re-simulation call
    only (not decode).
    """
    minimal_bytes = len(codec.encode_minimal(minimal))
    full_bytes = len(codec.encode_full(full))
    return CompressionReport(
        env_name=minimal.params.env_name,
        full_bytes=full_bytes,
        minimal_bytes=minimal_bytes,
        resim_seconds=resim_seconds,
        episodes=len(full.episodes),
        steps=sum(len(ep.steps) for ep in full.episodes),
    )
