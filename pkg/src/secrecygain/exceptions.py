"""Exception types raised across the package."""


class CodeValidationError(ValueError):
    """A code description is malformed (bad row length, duplicate words, ...)."""


class EnumerationLimitError(RuntimeError):
    """An exhaustive enumeration would exceed the configured message-space cap."""

    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(
            f"enumeration of {size} messages exceeds the cap of {cap}; "
            "raise `cap` explicitly to proceed"
        )


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NormalizationError(ValueError):
    """The packing does not have unit volume (M != 2**(n/2))."""


class ConstructionError(ValueError):
    """A code construction produced a degenerate object."""


class PreconditionError(ValueError):
    """An operation was called on inputs that violate its stated preconditions."""
