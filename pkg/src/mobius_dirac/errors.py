"""Exception types raised across the package."""


class MobiusError(Exception):
    """Base class for all package errors."""


class DomainError(MobiusError, ValueError):
    """An argument lies outside the domain of the strip or of an operation."""


class RangeError(MobiusError, ValueError):
    """The normal offset q3 leaves the tubular neighbourhood where the 3D metric is valid."""


class ConfigError(MobiusError, ValueError):
    """Invalid run or grid configuration.

    ``violations`` lists every offending field, not just the first one.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UsageError(MobiusError, ValueError):
    """Inputs are individually valid but cannot be combined."""


class InvariantError(MobiusError, RuntimeError):
    """An internal consistency check failed (e.g. a non-Hermitian assembly)."""
