"""mimowpt - two-beam transmit strategies for MIMO wireless power transfer.

Computes the transmit strategy that maximizes the average power harvested
by a node of non-linear rectennas under an average power budget: the
transmitter sends one of two beams, chosen at random with probability beta.

Example:
    >>> from mimowpt import REFERENCE_PARAMS, generate_rician
    >>> from mimowpt import build_grid_table, grid_minmax_policy
    >>>
    >>> g = generate_rician(seed=1, n_t=2, n_e=2, distance=2.0, k_factor=1.0)
    >>> table = build_grid_table(g, REFERENCE_PARAMS, step=0.1, size=40)
    >>> policy = grid_minmax_policy(table, p_x=1.5)
    >>> policy.avg_phi
"""

__version__ = "1.0.0"

from mimowpt.config.settings import GridSettings, LoggingSettings, Settings, SolverSettings
from mimowpt.rectenna.model import (
    REFERENCE_PARAMS,
    CircuitConstants,
    RectennaParams,
    derive_composite_params,
    harvested_power,
    saturation_power,
    total_power,
)
from mimowpt.channel import ChannelMatrix, generate_rician, load_channel, save_channel
from mimowpt.beamopt import PhiPoint, phi_of_nu
from mimowpt.strategy import (
    GridTable,
    TwoPointPolicy,
    average_harvested_power,
    build_grid_table,
    grid_minmax_policy,
    load_policy,
    save_policy,
    solve_two_point,
)
from mimowpt.baselines import energy_beamforming_policy, single_beam_policy
from mimowpt.verify import PolicyCheck, validate_report

# Re-export exceptions
from mimowpt.exceptions import (
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
    "__version__",
    # Configuration
    "Settings",
    "LoggingSettings",
    "SolverSettings",
    "GridSettings",
    # Model
    "REFERENCE_PARAMS",
    "RectennaParams",
    "CircuitConstants",
    "derive_composite_params",
    "harvested_power",
    "saturation_power",
    "total_power",
    # Channel
    "ChannelMatrix",
    "generate_rician",
    "load_channel",
    "save_channel",
    # Optimization
    "PhiPoint",
    "phi_of_nu",
    "GridTable",
    "TwoPointPolicy",
    "average_harvested_power",
    "build_grid_table",
    "grid_minmax_policy",
    "load_policy",
    "save_policy",
    "solve_two_point",
    "energy_beamforming_policy",
    "single_beam_policy",
    # Verification
    "PolicyCheck",
    "validate_report",
    # Exceptions
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
