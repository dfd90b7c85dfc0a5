"""Exception hierarchy for the renderer.

The CLI maps these onto process exit codes, so new error types should
subclass one of the two roots below rather than raising bare ValueErrors.
"""


class PlotvizError(Exception):
    """Base class for all renderer errors."""


class UsageError(PlotvizError):
    """Bad invocation: unknown plot kind, missing output path, bad flag value."""


class ArtifactError(PlotvizError):
    """Input artifact failed validation: unreadable, wrong schema, inconsistent."""


class ConservationError(ArtifactError):
    """Flow graph violates its conservation laws; rendering it would mislead."""
