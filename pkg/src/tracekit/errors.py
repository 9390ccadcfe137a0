"""Exception types raised across the toolkit.

Every error has a single message argument so instances survive pickling
across process-pool boundaries.
"""

from __future__ import annotations


class TracekitError(Exception):
    """Base class for all toolkit errors."""


class UnknownEnvError(TracekitError):
    """Environment name is not registered."""


class SchemaMismatchError(TracekitError):
    """Parameters or trace contents do not match the environment schema."""


class InvalidActionError(TracekitError):
    """Action does not fit the environment's action space."""


class EpisodeFinishedError(TracekitError):
    """step() called on an environment that is finished or was never reset."""


class NoOpenEpisodeError(TracekitError):
    """Recorder step() called with no episode in progress."""


class AlreadyFinalizedError(TracekitError):
    """Recorder used after finalize()."""


class ResimulationError(TracekitError):
    """Replay of a minimal episode failed.

    ``episode_index`` is set when the failure is re-raised with trace
    context attached.
    """

    episode_index: int | None = None


class PrematureTerminationError(ResimulationError):
    """Environment signaled done before the recorded actions ran out."""


class TerminationMismatchError(ResimulationError):
    """Recorded terminated flag disagrees with the replayed episode."""


class CodecError(TracekitError):
    """Base class for trace-file encoding/decoding errors."""


class BadMagicError(CodecError):
    """File does not start with the trace-file magic bytes."""


class UnsupportedVersionError(CodecError):
    """Container or document version is not supported."""


class CorruptPayloadError(CodecError):
    """Compressed payload or CBOR document is malformed."""


class StoreError(TracekitError):
    """Base class for content-store errors."""


class NotFoundError(StoreError):
    """No content stored under the given id."""


class IntegrityFailureError(StoreError):
    """Stored bytes no longer hash to their id."""


class EmptySeriesError(TracekitError):
    """Graph emission called with no input series."""


class DuplicateNameError(TracekitError):
    """Graph emission called with two series sharing a name."""
