"""mimowpt custom exceptions."""

from mimowpt.exceptions.errors import (
    WptError,
    DomainError,
    DimensionError,
    DegenerateError,
    ChannelFormatError,
    SolverError,
    InfeasibleError,
    MaxIterError,
    FallbackExhaustedError,
    GridRangeError,
    ValidationError,
    CheckError,
    ConfigurationError,
)

__all__ = [
    "WptError",
    "DomainError",
    "DimensionError",
    "DegenerateError",
    "ChannelFormatError",
    "SolverError",
    "InfeasibleError",
    "MaxIterError",
    "FallbackExhaustedError",
    "GridRangeError",
    "ValidationError",
    "CheckError",
    "ConfigurationError",
]
