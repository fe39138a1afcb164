"""Exception taxonomy shared by all guelab modules.

CLI exit-code mapping: InvalidSpecError -> 2, PrecisionUnreachableError
(and subclasses) -> 3, selfcheck failures -> 1.
"""


class GuelabError(Exception):
    """Base class for all guelab errors."""


class InvalidSpecError(GuelabError, ValueError):
    """Weight specification or run configuration violates its invariants."""


class SingularPointError(GuelabError, ValueError):
    """Weight evaluated exactly at a singular point with negative exponent."""


class PrecisionUnreachableError(GuelabError, RuntimeError):
    """Requested tolerance could not be certified within the refinement caps."""

    def __init__(self, message, level_reached=None):
        super().__init__(message)
        self.level_reached = level_reached


class NumericallySingularError(PrecisionUnreachableError):
    """A non-positive pivot survived every precision escalation pass."""


class InternalConsistencyError(GuelabError, RuntimeError):
    """Two independent computational routes to one quantity disagree."""
