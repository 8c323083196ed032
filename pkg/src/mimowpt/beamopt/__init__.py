"""Phi(nu) and its maximizing beam vector for a fixed transmit power."""

from mimowpt.beamopt.saturation import (
    SaturationPlan,
    build_cell_problem,
    find_saturation_count,
    sort_channels,
)
from mimowpt.beamopt.sca import (
    PhiPoint,
    ScaStatus,
    energy_beam_direction,
    initial_matrix,
    phi_of_nu,
    project_into_cell,
    sca_maximize,
    surrogate_value,
)

__all__ = [
    "SaturationPlan",
    "build_cell_problem",
    "find_saturation_count",
    "sort_channels",
    "PhiPoint",
    "ScaStatus",
    "energy_beam_direction",
    "initial_matrix",
    "phi_of_nu",
    "project_into_cell",
    "sca_maximize",
    "surrogate_value",
]
