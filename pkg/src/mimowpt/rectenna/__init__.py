"""Non-linear multi-rectenna energy-harvester model."""

from mimowpt.rectenna.model import (
    REFERENCE_PARAMS,
    RectennaParams,
    CircuitConstants,
    derive_composite_params,
    harvested_power,
    harvested_power_derivative,
    saturation_power,
    received_powers,
    total_power,
    hermitian_part,
    quadratic_forms,
    matrix_power,
    matrix_gradient,
)

__all__ = [
    "REFERENCE_PARAMS",
    "RectennaParams",
    "CircuitConstants",
    "derive_composite_params",
    "harvested_power",
    "harvested_power_derivative",
    "saturation_power",
    "received_powers",
    "total_power",
    "hermitian_part",
    "quadratic_forms",
    "matrix_power",
    "matrix_gradient",
]
