"""Hermitian SDP subproblems of the beam optimization."""

from mimowpt.conic.fallback import FallbackConfig, SolverFallback
from mimowpt.conic.problem import (
    QuadConstraint,
    SdpProblem,
    SdpSolution,
    SdpStatus,
    Sense,
)
from mimowpt.conic.solver import (
    extract_rank_one,
    psd_cleanup,
    rank_one_defect,
    refine_rank_one,
    solve_feasibility_sdp,
    solve_linear_sdp,
)

__all__ = [
    "FallbackConfig",
    "SolverFallback",
    "QuadConstraint",
    "SdpProblem",
    "SdpSolution",
    "SdpStatus",
    "Sense",
    "extract_rank_one",
    "psd_cleanup",
    "rank_one_defect",
    "refine_rank_one",
    "solve_feasibility_sdp",
    "solve_linear_sdp",
]
