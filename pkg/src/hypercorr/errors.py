"""Exception types shared across the package."""


class HypercorrError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(HypercorrError, ValueError):
    pass


class ClassViolation(HypercorrError, ValueError):
    """An input family does not belong to the class an operation requires."""


class ResourceLimit(HypercorrError, ValueError):
    """The requested size exceeds what the operation is willing to enumerate."""
