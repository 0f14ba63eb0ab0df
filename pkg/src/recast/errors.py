"""Exception types shared across the package.

Every error carries a machine-readable ``code`` so rejection records and CLI
messages stay grep-able.
"""


class RecastError(Exception):
    """Base class for all errors raised by this package."""

    code = "ERROR"


class DataError(RecastError):
    """Input data violates a contract (bad file, missing baseline, ...)."""

    code = "DATA"


class InvalidCandidatesError(RecastError):
    """A parent-candidate set was empty where at least one is required."""

    code = "INVALID_CANDIDATES"


class InvalidAlphaError(RecastError):
    """Recency exponent outside (1, inf); the power-law weight needs alpha > 1."""

    code = "INVALID_ALPHA"


class DegenerateError(RecastError):
    """Statistic undefined on this input (zero rank variance, two empty sets)."""

    code = "DEGENERATE"


class TooSmallError(RecastError):
    """Tree metrics need at least two events."""

    code = "TOO_SMALL"
