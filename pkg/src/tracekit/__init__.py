"""tracekit: record, re-simulate, and verify minimal environment traces.

A minimal trace is the smallest record from which a deterministic
environment's full history can be rebuilt: the complete initial
configuration plus, per episode, a seed and the action sequence. This
package bundles deterministic environments, a transparent recording
wrapper, serial/parallel re-simulation with determinism verification,
a canonical binary trace format, a local content-addressed store, and
a Vega-Lite reward-graph emitter.
"""

from tracekit.envs import (
    Action,
    BoxSpace,
    ContinuousAction,
    DiscreteAction,
    DiscreteObs,
    DiscreteSpace,
    Environment,
    EnvParams,
    EnvSchema,
    Observation,
    ParamSpec,
    StepResult,
    VectorObs,
    VectorSpace,
    default_params,
    get_schema,
    make,
    register,
    registered_names,
    schemas_document,
)
from tracekit.codec import decode, encode_full, encode_minimal
from tracekit.recorder import LedgerEntry, RecordingEnvironment, RewardLedger, record
from tracekit.resim import (
    compression_report,
    episode_to_trace,
    resimulate,
    resimulate_parallel,
    verify_determinism,
)
from tracekit.rng import SplitMix64, rng_next
from tracekit.store import ContentStore, trace_id
from tracekit.traces import (
    CompressionReport,
    FullEpisode,
    FullTrace,
    MinimalEpisode,
    MinimalTrace,
    Step,
    episode_reward_sum,
    trace_equal,
)
from tracekit.vega import reward_graph

__version__ = "0.1.0"

__all__ = [
    "Action",
    "BoxSpace",
    "CompressionReport",
    "ContentStore",
    "ContinuousAction",
    "DiscreteAction",
    "DiscreteObs",
    "DiscreteSpace",
    "Environment",
    "EnvParams",
    "EnvSchema",
    "FullEpisode",
    "FullTrace",
    "LedgerEntry",
    "MinimalEpisode",
    "MinimalTrace",
    "Observation",
    "ParamSpec",
    "RecordingEnvironment",
    "RewardLedger",
    "SplitMix64",
    "Step",
    "StepResult",
    "VectorObs",
    "VectorSpace",
    "compression_report",
    "decode",
    "default_params",
    "encode_full",
    "encode_minimal",
    "episode_reward_sum",
    "episode_to_trace",
    "get_schema",
    "make",
    "record",
    "register",
    "registered_names",
    "resimulate",
    "resimulate_parallel",
    "reward_graph",
    "rng_next",
    "schemas_document",
    "trace_equal",
    "trace_id",
    "verify_determinism",
]
