"""Two-point transmit policy, its value and its text record.

Record format::

    # mimowpt two-point policy
    p_x <float>
    nu1 <float>
    nu2 <float>
    beta <float>
    avg_phi <float>
    w1 re,im re,im ...
    w2 re,im re,im ...

Floats use ``repr`` like channel files, so a save/load round trip is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt

from mimowpt.channel.io import format_vector, parse_vector
from mimowpt.channel.rician import ChannelMatrix
from mimowpt.exceptions.errors import ChannelFormatError, DimensionError, DomainError
from mimowpt.rectenna.model import RectennaParams, total_power

ComplexArray = npt.NDArray[np.complex128]

POLICY_TOL = 1e-9

_HEADER = "# mimowpt two-point policy"
_SCALARS = ("p_x", "nu1", "nu2", "beta", "avg_phi")


@dataclass(frozen=True)
class TwoPointPolicy:
    """Transmit w1 with probability beta and w2 with probability 1 - beta.

    The unit-modulus scalar symbol is fixed to phase 0 and each beam is
    stored with its first nonzero entry real and positive.
    """

    w1: ComplexArray
    w2: ComplexArray
    nu1: float
    nu2: float
    beta: float
    p_x: float
    avg_phi: float

    def __post_init__(self) -> None:
        w1 = np.asarray(self.w1, dtype=np.complex128)
        w2 = np.asarray(self.w2, dtype=np.complex128)
        if w1.ndim != 1 or w1.shape != w2.shape:
            raise DimensionError(
                "Policy beams must be equally long vectors",
                expected=w1.shape,
                actual=w2.shape,
            )
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError("Probability beta must lie in [0, 1]", value=self.beta)
        tol = POLICY_TOL * max(1.0, self.p_x)
        if not (self.nu1 - tol <= self.p_x <= self.nu2 + tol):
            raise DomainError(
                "Budget must lie between the two beam powers",
                value=(self.nu1, self.p_x, self.nu2),
            )
        for w, nu in ((w1, self.nu1), (w2, self.nu2)):
            if abs(float(np.vdot(w, w).real) - nu) > POLICY_TOL * max(1.0, nu):
                raise DomainError("Beam power must match its nu", value=nu)
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)

    @property
    def n_t(self) -> int:
        return int(self.w1.shape[0])

    @property
    def degenerate(self) -> bool:
        """Single-point policy (nu1 = nu2 = p_x)."""
        return self.nu1 == self.nu2

    @property
    def expected_power(self) -> float:
        """E{||x||^2} = beta·nu1 + (1 - beta)·nu2."""
        return self.beta * self.nu1 + (1.0 - self.beta) * self.nu2


def average_harvested_power(
    policy: TwoPointPolicy,
    g: ChannelMatrix | ComplexArray,
    params: RectennaParams,
) -> float:
    """beta·psi(w1) + (1 - beta)·psi(w2)."""
    return policy.beta * total_power(params, g, policy.w1) + (1.0 - policy.beta) * total_power(
        params, g, policy.w2
    )


def sample_transmit_symbols(policy: TwoPointPolicy, n: int, seed: int = 0) -> ComplexArray:
    """Draw n transmit vectors x = w·e^{j phi_s}.

    w is w1 with probability beta and w2 otherwise, and phi_s is uniform
    on [-pi, pi); any symbol phase is optimal.
    """
    if n < 0:
        raise DomainError("Sample count must be non-negative", value=n)
    rng = np.random.default_rng(seed)
    pick_first = rng.random(n) < policy.beta
    phases = np.exp(1j * rng.uniform(-math.pi, math.pi, n))
    beams = np.where(pick_first[:, None], policy.w1[None, :], policy.w2[None, :])
    return beams * phases[:, None]


def dumps_policy(policy: TwoPointPolicy) -> str:
    lines = [_HEADER]
    lines.extend(f"{name} {float(getattr(policy, name))!r}" for name in _SCALARS)
    lines.append(f"w1 {format_vector(policy.w1)}")
    lines.append(f"w2 {format_vector(policy.w2)}")
    return "\n".join(lines) + "\n"


def loads_policy(text: str) -> TwoPointPolicy:
    """Parse a policy record.

    Raises:
        ChannelFormatError: For missing, repeated or malformed fields.
    """
    scalars: dict[str, float] = {}
    vectors: dict[str, ComplexArray] = {}
    for row, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key in scalars or key in vectors:
            raise ChannelFormatError(f"Repeated field '{key}'", row=row)
        if key in _SCALARS:
            try:
                scalars[key] = float(rest)
            except ValueError as e:
                raise ChannelFormatError(f"Invalid number for '{key}'", row=row) from e
        elif key in ("w1", "w2"):
            vectors[key] = parse_vector(rest, row=row)
        else:
            raise ChannelFormatError(f"Unknown field '{key}'", row=row)

    missing = [
        name for name in (*_SCALARS, "w1", "w2") if name not in scalars and name not in vectors
    ]
    if missing:
        raise ChannelFormatError(f"Missing fields: {', '.join(missing)}", row=0)

    return TwoPointPolicy(w1=vectors["w1"], w2=vectors["w2"], **scalars)


def save_policy(policy: TwoPointPolicy, path: str | Path) -> None:
    Path(path).write_text(dumps_policy(policy), encoding="utf-8")


def load_policy(path: str | Path) -> TwoPointPolicy:
    return loads_policy(Path(path).read_text(encoding="utf-8"))
