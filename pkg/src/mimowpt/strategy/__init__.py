"""Two-point transmit strategy: scalar lemma solver, power grid and policy."""

from mimowpt.strategy.lemma import (
    ScalarFunctionTable,
    TwoPointSolution,
    brute_force_chord,
    slope_matrix,
    solve_two_point,
    split_index,
)
from mimowpt.strategy.policy import (
    TwoPointPolicy,
    average_harvested_power,
    dumps_policy,
    load_policy,
    loads_policy,
    sample_transmit_symbols,
    save_policy,
)
from mimowpt.strategy.grid import GridTable, build_grid_table, grid_minmax_policy
from mimowpt.utils.phase import canonicalize

__all__ = [
    "ScalarFunctionTable",
    "TwoPointSolution",
    "brute_force_chord",
    "slope_matrix",
    "solve_two_point",
    "split_index",
    "TwoPointPolicy",
    "average_harvested_power",
    "dumps_policy",
    "load_policy",
    "loads_policy",
    "sample_transmit_symbols",
    "save_policy",
    "GridTable",
    "build_grid_table",
    "grid_minmax_policy",
    "canonicalize",
]
