"""Reference transmit schemes."""

from mimowpt.baselines.schemes import (
    BaselineKind,
    BaselinePolicy,
    energy_beamforming_policy,
    single_beam_policy,
)

__all__ = [
    "BaselineKind",
    "BaselinePolicy",
    "energy_beamforming_policy",
    "single_beam_policy",
]
