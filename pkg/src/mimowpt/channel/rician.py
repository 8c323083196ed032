"""Rician channel generation between the TX and the EH node."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from mimowpt.exceptions.errors import DegenerateError, DimensionError, DomainError
from mimowpt.utils.units import db_to_linear

ComplexArray = npt.NDArray[np.complex128]
FloatArray = npt.NDArray[np.float64]

PATH_LOSS_INTERCEPT_DB = 35.3
PATH_LOSS_SLOPE_DB = 37.6


@dataclass(frozen=True)
class ChannelMeta:
    """Provenance of a channel realization."""

    distance: float | None = None  # meter
    rician_k: float | None = None
    seed: int | None = None


@dataclass(frozen=True)
class ChannelMatrix:
    """N_e x N_t complex gain matrix; row p is g_p (path loss included)."""

    g: ComplexArray
    meta: ChannelMeta = field(default_factory=ChannelMeta)

    def __post_init__(self) -> None:
        gain = np.array(self.g, dtype=np.complex128, copy=True)
        if gain.ndim != 2 or gain.shape[0] < 1 or gain.shape[1] < 1:
            raise DimensionError(
                "Channel must be a non-empty N_e x N_t matrix",
                expected="(n_e, n_t)",
                actual=gain.shape,
            )
        if not np.all(np.isfinite(gain)):
            raise DomainError("Channel entries must be finite")
        if np.any(np.linalg.norm(gain, axis=1) <= 0.0):
            raise DegenerateError("Every channel row must have positive norm")
        gain.setflags(write=False)
        object.__setattr__(self, "g", gain)

    @property
    def n_e(self) -> int:
        """Number of rectennas."""
        return int(self.g.shape[0])

    @property
    def n_t(self) -> int:
        """Number of TX antennas."""
        return int(self.g.shape[1])

    @property
    def row_norms(self) -> FloatArray:
        """||g_p|| for every rectenna."""
        return np.linalg.norm(self.g, axis=1)

    def subset(self, n_t: int, n_e: int) -> ChannelMatrix:
        """Leading n_e x n_t block, used for antenna-count sweeps."""
        if not (1 <= n_t <= self.n_t and 1 <= n_e <= self.n_e):
            raise DimensionError(
                "Subset exceeds channel dimensions",
                expected=(self.n_e, self.n_t),
                actual=(n_e, n_t),
            )
        return ChannelMatrix(self.g[:n_e, :n_t], meta=self.meta)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChannelMatrix):
            return NotImplemented
        return self.g.shape == other.g.shape and bool(np.array_equal(self.g, other.g))

    def __hash__(self) -> int:
        return hash((self.g.shape, self.g.tobytes()))


def as_gain_matrix(g: ChannelMatrix | ComplexArray) -> ComplexArray:
    """Return the raw gain matrix of a ChannelMatrix or a 2-D array."""
    if isinstance(g, ChannelMatrix):
        return g.g
    gain = np.asarray(g, dtype=np.complex128)
    if gain.ndim != 2:
        raise DimensionError("Channel must be a 2-D matrix", expected=2, actual=gain.ndim)
    return gain


def gram_matrix(g: ChannelMatrix | ComplexArray) -> ComplexArray:
    """Channel Gram matrix sum_p g_p^H g_p (N_t x N_t)."""
    gain = as_gain_matrix(g)
    return gain.conj().T @ gain


def path_loss_db(distance: float) -> float:
    """Path loss 35.3 + 37.6·log10(d) in dB for a distance in meter."""
    if not (math.isfinite(distance) and distance > 0.0):
        raise DomainError("Distance must be positive", value=distance)
    return PATH_LOSS_INTERCEPT_DB + PATH_LOSS_SLOPE_DB * math.log10(distance)


def los_component(n_t: int, n_e: int) -> ComplexArray:
    """Deterministic unit-modulus phase ramp exp(j·pi·p·q/(n_t + n_e)).

    Indices p (rectenna) and q (TX antenna) start at 1.
    """
    p = np.arange(1, n_e + 1)[:, None]
    q = np.arange(1, n_t + 1)[None, :]
    return np.exp(1j * np.pi * p * q / (n_t + n_e))


def realization_seed(master_seed: int, index: int) -> int:
    """Seed of realization `index`, independent of worker scheduling."""
    state = np.random.SeedSequence([master_seed, index]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def generate_rician(
    seed: int,
    n_t: int,
    n_e: int,
    distance: float,
    k_factor: float,
) -> ChannelMatrix:
    """Draw a Rician channel with per-entry Rician factor and path loss.

    Each entry is sqrt(PL)·(sqrt(K/(K+1))·LOS + sqrt(1/(K+1))·CN(0, 1)).
    Identical arguments give bit-identical matrices.
    """
    if n_t < 1 or n_e < 1:
        raise DimensionError("Antenna counts must be at least 1", actual=(n_e, n_t))
    if not (k_factor >= 0.0):
        raise DomainError("Rician factor must be non-negative", value=k_factor)

    amplitude = math.sqrt(db_to_linear(-path_loss_db(distance)))
    rng = np.random.default_rng(seed)
    nlos = (rng.standard_normal((n_e, n_t)) + 1j * rng.standard_normal((n_e, n_t))) / math.sqrt(2.0)

    if math.isinf(k_factor):
        los_weight, nlos_weight = 1.0, 0.0
    else:
        los_weight = math.sqrt(k_factor / (k_factor + 1.0))
        nlos_weight = math.sqrt(1.0 / (k_factor + 1.0))

    gain = amplitude * (los_weight * los_component(n_t, n_e) + nlos_weight * nlos)
    return ChannelMatrix(
        gain,
        meta=ChannelMeta(distance=distance, rician_k=k_factor, seed=seed),
    )
