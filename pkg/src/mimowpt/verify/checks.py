"""Fluent checks over a finished transmit policy."""

from __future__ import annotations

from typing import Self

import numpy as np
import numpy.typing as npt

from mimowpt.channel.rician import ChannelMatrix
from mimowpt.exceptions.errors import CheckError
from mimowpt.rectenna.model import RectennaParams, saturation_power
from mimowpt.strategy.policy import TwoPointPolicy, average_harvested_power

ComplexArray = npt.NDArray[np.complex128]

# budgets and norms are checked relative to max(1 W, value), harvested
# powers relative to max(avg_phi, reference, phi_sat)
DEFAULT_TOL = 1e-9


class PolicyCheck:
    """Wrapper around a TwoPointPolicy with chainable assertions.

    All assertion methods return `self` and raise CheckError on failure.

    Example:
        >>> PolicyCheck(policy).assert_probability().assert_budget().assert_norms()
    """

    def __init__(
        self,
        policy: TwoPointPolicy,
        g: ChannelMatrix | ComplexArray | None = None,
        params: RectennaParams | None = None,
    ) -> None:
        self.policy = policy
        self._g = g
        self._params = params
        self.passed: list[str] = []

    def _value_tol(self, tol: float, *values: float) -> float:
        floor = saturation_power(self._params) if self._params is not None else 0.0
        return tol * max([abs(self.policy.avg_phi), floor, *(abs(v) for v in values)])

    def _record(self, name: str) -> Self:
        self.passed.append(name)
        return self

    # === Distribution ===

    def assert_probability(self) -> Self:
        """Assert 0 <= beta <= 1 and nu1 <= nu2."""
        p = self.policy
        if not 0.0 <= p.beta <= 1.0:
            raise CheckError(
                f"Probability {p.beta!r} outside [0, 1]",
                check="probability",
                expected="[0, 1]",
                actual=p.beta,
            )
        if p.nu1 > p.nu2:
            raise CheckError(
                "Beam powers out of order",
                check="probability",
                expected="nu1 <= nu2",
                actual=(p.nu1, p.nu2),
            )
        return self._record("probability")

    def assert_budget(self, tol: float = DEFAULT_TOL) -> Self:
        """Assert beta·nu1 + (1 - beta)·nu2 = p_x."""
        p = self.policy
        actual = p.expected_power
        if abs(actual - p.p_x) > tol * max(1.0, p.p_x):
            raise CheckError(
                f"Expected transmit power {actual!r} W differs from budget {p.p_x!r} W",
                check="budget",
                expected=p.p_x,
                actual=actual,
            )
        return self._record("budget")

    def assert_norms(self, tol: float = DEFAULT_TOL) -> Self:
        """Assert ||w_i||^2 = nu_i for both beams."""
        p = self.policy
        for name, w, nu in (("w1", p.w1, p.nu1), ("w2", p.w2, p.nu2)):
            power = float(np.vdot(w, w).real)
            if abs(power - nu) > tol * max(1.0, nu):
                raise CheckError(
                    f"Beam {name} carries {power!r} W instead of {nu!r} W",
                    check="norms",
                    expected=nu,
                    actual=power,
                )
        return self._record("norms")

    # === Value ===

    def assert_value_consistent(self, tol: float = DEFAULT_TOL) -> Self:
        """Assert the stored avg_phi matches a recomputation on the channel."""
        if self._g is None or self._params is None:
            raise CheckError(
                "Value check needs the channel and rectenna parameters",
                check="value_consistent",
                expected="channel and params",
                actual=None,
            )
        actual = average_harvested_power(self.policy, self._g, self._params)
        if abs(actual - self.policy.avg_phi) > self._value_tol(tol, actual):
            raise CheckError(
                f"Recomputed value {actual!r} W differs from stored {self.policy.avg_phi!r} W",
                check="value_consistent",
                expected=self.policy.avg_phi,
                actual=actual,
            )
        return self._record("value_consistent")

    def assert_dominates(self, value: float, tol: float = DEFAULT_TOL, label: str = "") -> Self:
        """Assert avg_phi >= value up to a tolerance relative to the larger value."""
        if self.policy.avg_phi < value - self._value_tol(tol, value):
            reference = label or "reference"
            raise CheckError(
                f"Policy value {self.policy.avg_phi!r} W is below {reference} {value!r} W",
                check="dominates",
                expected=value,
                actual=self.policy.avg_phi,
                reference=label,
            )
        return self._record(f"dominates:{label}" if label else "dominates")

    def assert_all(self, tol: float = DEFAULT_TOL) -> Self:
        """Run every structural check, and the value check when a channel is attached."""
        self.assert_probability().assert_budget(tol).assert_norms(tol)
        if self._g is not None and self._params is not None:
            self.assert_value_consistent(tol)
        return self
