"""Exception types shared across nsgkit.

The CLI maps these onto exit codes (see ``nsgkit.__main__``).
"""


class NsgError(Exception):
    """Base class for all nsgkit errors."""


class ValidationError(NsgError, ValueError):
    """Raised when a domain object (spec, rule, scenario) is malformed."""


class DomainError(NsgError, ValueError):
    """Raised when inputs fall outside the mathematical domain of a formula."""


class UsageError(NsgError, ValueError):
    """Raised when an operation is called without the inputs it needs."""


class ResourceError(NsgError, RuntimeError):
    """Raised when an exact enumeration or construction would be too large."""


class ContractViolation(NsgError, AssertionError):
    """Raised when a checked inequality fails beyond its tolerance."""


class UnstableQuantileWarning(UserWarning):
    """Emitted when delta * trials < 100 makes a tail quantile unreliable."""
