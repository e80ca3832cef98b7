"""Error taxonomy shared across the toolkit.

The CLI maps these onto distinct exit codes, so subsystems should raise
the most specific class that applies.
"""


class VerifactError(Exception):
    """Base class for all toolkit errors."""


class DataError(VerifactError):
    """Malformed, inconsistent, or missing input data."""


class BackendError(VerifactError):
    """A remote embedding/generation backend failed or misbehaved."""

    def __init__(self, message: str, *, endpoint: str | None = None,
                 batch_index: int | None = None):
        super().__init__(message)
        self.endpoint = endpoint
        self.batch_index = batch_index


class ProtocolError(BackendError):
    """A remote backend replied, but the response violates the wire contract."""
