"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI: ConfigError -> 2, CapabilityError -> 3,
NumericalError -> 4. Everything else is a plain bug.
"""


class RydClusterError(Exception):
    """Base class for all package errors."""


class DomainError(RydClusterError, ValueError):
    """Input outside the mathematical domain of a formula (R = 0, B = 0, ...)."""


class ConfigError(RydClusterError, ValueError):
    """Invalid, incomplete or unknown configuration input."""


class CapabilityError(RydClusterError):
    """Request exceeds what a backend can do (size limits, non-Clifford on tableau)."""


class NumericalError(RydClusterError):
    """Numerical procedure failed to meet its tolerance."""


class DegenerateGeometryError(DomainError):
    """Two atoms coincide; pair shifts diverge. Resample the geometry."""


class FockCutoffError(CapabilityError):
    """An operation would populate photon occupations beyond the mode cutoff."""


class StateError(RydClusterError, ValueError):
    """A state does not satisfy the preconditions of an operation."""


class UsageError(RydClusterError, ValueError):
    """API misuse, e.g. measuring the same pattern qubit twice."""
