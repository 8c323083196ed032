"""Power unit conversions used at the I/O boundary.

The library works in linear watts throughout; dB and dBm only appear in
configuration files, CLI flags and emitted tables.
"""

from __future__ import annotations

import math
import re

from mimowpt.exceptions.errors import ConfigurationError

_POWER_RE = re.compile(
    r"^\s*(?P<value>[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?)\s*(?P<unit>dBm|mW|uW|µW|W)?\s*$"
)

_SCALE = {"W": 1.0, "mW": 1e-3, "uW": 1e-6, "µW": 1e-6}


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB."""
    if value <= 0.0:
        return -math.inf
    return 10.0 * math.log10(value)


def dbm_to_watt(value_dbm: float) -> float:
    """Convert dBm to watt."""
    return 10.0 ** ((value_dbm - 30.0) / 10.0)


def watt_to_dbm(value_w: float) -> float:
    """Convert watt to dBm; zero maps to -inf."""
    if value_w <= 0.0:
        return -math.inf
    return 10.0 * math.log10(value_w) + 30.0


def parse_power(value: str | float | int) -> float:
    """Parse a power value into watt.

    Bare numbers are watt. Strings may carry a unit suffix:
    ``"10"``, ``"10 W"``, ``"250 mW"``, ``"40 dBm"``.

    Raises:
        ConfigurationError: If the value cannot be parsed or is negative.
    """
    if isinstance(value, bool):
        raise ConfigurationError("Power value must be numeric", value=value)

    if isinstance(value, (int, float)):
        watts = float(value)
    else:
        match = _POWER_RE.match(value)
        if match is None:
            raise ConfigurationError(f"Cannot parse power value '{value}'", value=value)
        number = float(match.group("value"))
        unit = match.group("unit") or "W"
        watts = dbm_to_watt(number) if unit == "dBm" else number * _SCALE[unit]

    if not math.isfinite(watts) or watts < 0.0:
        raise ConfigurationError("Power must be finite and non-negative", value=value)
    return watts
