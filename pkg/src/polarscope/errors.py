"""Exception hierarchy shared across the engine.

The CLI maps these onto process exit codes, so new error types should
subclass one of the three roots below rather than raising bare ValueErrors.
"""


class PolarscopeError(Exception):
    """Base class for all engine errors."""


class UsageError(PolarscopeError):
    """Bad invocation: unknown preset, malformed flag value, invalid parameter."""


class DataError(PolarscopeError):
    """Input data failed validation: unreadable file, schema violation, bad record."""


class DegenerateAnalysisError(PolarscopeError):
    """Analysis cannot proceed meaningfully (e.g. too few distinct points to cluster)."""
