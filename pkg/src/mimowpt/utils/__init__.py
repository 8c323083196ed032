"""Utility functions for mimowpt."""

from mimowpt.utils.phase import canonicalize
from mimowpt.utils.units import (
    db_to_linear,
    linear_to_db,
    dbm_to_watt,
    watt_to_dbm,
    parse_power,
)

__all__ = [
    "canonicalize",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watt",
    "watt_to_dbm",
    "parse_power",
]
