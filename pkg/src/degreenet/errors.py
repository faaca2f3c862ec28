"""Exception types shared across the package."""


class DegreeNetError(Exception):
    """Base class for all package errors."""


class DomainError(DegreeNetError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NumericUnderflowError(DegreeNetError, ArithmeticError):
    """A tail probability underflowed past what log-space evaluation can rescue."""


class ModelInvalidError(DegreeNetError, ValueError):
    """A weight model's parameters violate its invariants."""


class DegenerateError(DegreeNetError, ValueError):
    """A quantity (e.g. dispersion of an isolated node) is undefined."""


class QuadratureError(DegreeNetError, RuntimeError):
    """Adaptive quadrature failed to converge to the requested tolerance."""


class RegimeError(DegreeNetError, ValueError):
    """A sparsity exponent falls outside the analyzed regime."""


class KMaxTooSmallError(DegreeNetError, ValueError):
    """Truncation of a limiting pmf left more tail mass than allowed."""


class EmptyGraphError(DegreeNetError, ValueError):
    """Estimation requested on a graph with no edges."""


class InsufficientDataError(DegreeNetError, ValueError):
    """Not enough usable observations for the requested fit."""


class MemoryBudgetError(DegreeNetError, MemoryError):
    """Storing the edge list would exceed the configured cap."""


class ConfigError(DegreeNetError, ValueError):
    """A run configuration failed validation."""


class SchemaError(DegreeNetError, ValueError):
    """A CSV artifact does not conform to the documented schema."""
