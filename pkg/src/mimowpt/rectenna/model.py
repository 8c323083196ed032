"""Non-linear rectenna model and its lifted (matrix) form.

The harvested DC power of one rectenna as a function of the received
ECB signal power q = |z|^2 is

    phi(q) = min(varphi(q), varphi(A_s^2)),
    varphi(q) = [W0(a·e^a·I0(B·sqrt(2q))) / a - 1]^2 · I_s^2 · R_L.

Powers are linear watts throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, overload

import numpy as np
import numpy.typing as npt

from mimowpt.channel.rician import as_gain_matrix
from mimowpt.exceptions.errors import DimensionError, DomainError
from mimowpt.specfn.functions import bessel_ratio, lambert_w0_of_exp, log_bessel_i0

if TYPE_CHECKING:
    from mimowpt.channel.rician import ChannelMatrix

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

HERMITIAN_TOL = 1e-9


@dataclass(frozen=True)
class RectennaParams:
    """Composite constants of the rectenna model."""

    a: float
    b: float  # 1/sqrt(watt), multiplies sqrt(2|z|^2)
    i_s: float  # ampere
    r_l: float  # ohm
    a_s_sq: float  # watt

    def __post_init__(self) -> None:
        for name in ("a", "b", "i_s", "r_l", "a_s_sq"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"Rectenna parameter '{name}' must be positive", value=value)


@dataclass(frozen=True)
class CircuitConstants:
    """Physical rectenna circuit parameters."""

    mu: float  # diode ideality factor
    v_t: float  # volt
    i_s: float  # ampere
    r_s: float  # ohm
    r_l: float  # ohm
    re_inv_za: float  # Re{1/Z_a*}, 1/ohm
    a_s_sq: float  # watt

    def __post_init__(self) -> None:
        for name in ("mu", "v_t", "i_s", "r_l", "re_inv_za", "a_s_sq"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"Circuit constant '{name}' must be positive", value=value)
        # a lossless antenna (r_s = 0) is allowed
        if not (math.isfinite(self.r_s) and self.r_s >= 0.0):
            raise DomainError("Circuit constant 'r_s' must be non-negative", value=self.r_s)
        if not 1.0 <= self.mu <= 2.0:
            raise DomainError("Ideality factor must lie in [1, 2]", value=self.mu)


REFERENCE_PARAMS = RectennaParams(a=1.29, b=1.55e3, i_s=5e-6, r_l=1e4, a_s_sq=25e-6)


def derive_composite_params(c: CircuitConstants) -> RectennaParams:
    """Compute the composite constants a and B from circuit constants."""
    return RectennaParams(
        a=c.i_s * (c.r_l + c.r_s) / (c.mu * c.v_t),
        b=1.0 / (c.mu * c.v_t * math.sqrt(c.re_inv_za)),
        i_s=c.i_s,
        r_l=c.r_l,
        a_s_sq=c.a_s_sq,
    )


def _check_power(z_sq: float | FloatArray) -> FloatArray:
    q = np.asarray(z_sq, dtype=np.float64)
    if not np.all(np.isfinite(q)):
        raise DomainError("Received power must be finite", value=z_sq)
    if np.any(q < 0.0):
        raise DomainError("Received power must be non-negative", value=float(np.min(q)))
    return q


def _lambert_term(p: RectennaParams, q: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Return (u, L) with u = B·sqrt(2q) and L = W0(a·e^a·I0(u))."""
    u = p.b * np.sqrt(2.0 * q)
    t = math.log(p.a) + p.a + np.asarray(log_bessel_i0(u))
    return u, np.asarray(lambert_w0_of_exp(t))


@overload
def harvested_power(p: RectennaParams, z_sq: float) -> float: ...
@overload
def harvested_power(p: RectennaParams, z_sq: FloatArray) -> FloatArray: ...


def harvested_power(p: RectennaParams, z_sq: float | FloatArray) -> float | FloatArray:
    """Power harvested by one rectenna for received power(s) z_sq (watt)."""
    q = _check_power(z_sq)
    q_eff = np.minimum(q, p.a_s_sq)
    _, lam = _lambert_term(p, q_eff)
    phi = (lam / p.a - 1.0) ** 2 * p.i_s**2 * p.r_l
    phi = np.where(q_eff == 0.0, 0.0, phi)
    return float(phi) if q.ndim == 0 else phi


def saturation_power(p: RectennaParams) -> float:
    """Maximum harvested power of a single rectenna, phi(A_s^2)."""
    return harvested_power(p, p.a_s_sq)


@overload
def harvested_power_derivative(p: RectennaParams, z_sq: float) -> float: ...
@overload
def harvested_power_derivative(p: RectennaParams, z_sq: FloatArray) -> FloatArray: ...


def harvested_power_derivative(
    p: RectennaParams, z_sq: float | FloatArray
) -> float | FloatArray:
    """d phi / d q (watt per watt).

    Zero at q = 0 (limit value) and on the saturated side q >= A_s^2,
    including the knee itself.
    """
    q = _check_power(z_sq)
    active = (q > 0.0) & (q < p.a_s_sq)
    q_safe = np.where(active, q, 0.5 * p.a_s_sq)
    u, lam = _lambert_term(p, q_safe)
    ratio = np.asarray(bessel_ratio(u))
    deriv = (
        2.0
        * p.i_s**2
        * p.r_l
        * (lam / p.a - 1.0)
        / p.a
        * (lam / (1.0 + lam))
        * ratio
        * p.b
        / np.sqrt(2.0 * q_safe)
    )
    deriv = np.where(active, deriv, 0.0)
    return float(deriv) if q.ndim == 0 else deriv


def _as_vector(w: ComplexArray | FloatArray, n_t: int) -> ComplexArray:
    vec = np.asarray(w, dtype=np.complex128)
    if vec.ndim != 1 or vec.shape[0] != n_t:
        raise DimensionError(
            "Beam vector length must equal the number of TX antennas",
            expected=n_t,
            actual=vec.shape,
        )
    return vec


def received_powers(g: ChannelMatrix | ComplexArray, w: ComplexArray | FloatArray) -> FloatArray:
    """Per-rectenna received power |g_p w|^2 (watt)."""
    gain = as_gain_matrix(g)
    vec = _as_vector(w, gain.shape[1])
    return np.abs(gain @ vec) ** 2


def total_power(
    p: RectennaParams, g: ChannelMatrix | ComplexArray, w: ComplexArray | FloatArray
) -> float:
    """Total harvested power psi(w) = sum_p phi(|g_p w|^2)."""
    return float(np.sum(harvested_power(p, received_powers(g, w))))


def hermitian_part(w_mat: ComplexArray, n_t: int) -> ComplexArray:
    """Validate a lifted beam matrix and return its Hermitian part.

    Raises:
        DimensionError: If the matrix is not n_t x n_t.
        DomainError: If the anti-Hermitian part exceeds the tolerance.
    """
    mat = np.asarray(w_mat, dtype=np.complex128)
    if mat.shape != (n_t, n_t):
        raise DimensionError(
            "Beam matrix must be square with the TX antenna dimension",
            expected=(n_t, n_t),
            actual=mat.shape,
        )
    scale = max(1.0, float(np.max(np.abs(mat), initial=0.0)))
    asym = float(np.max(np.abs(mat - mat.conj().T), initial=0.0))
    if asym > HERMITIAN_TOL * scale:
        raise DomainError("Beam matrix is not Hermitian", value=asym)
    return 0.5 * (mat + mat.conj().T)


def quadratic_forms(g: ChannelMatrix | ComplexArray, w_mat: ComplexArray) -> FloatArray:
    """Received powers g_p W g_p^H for every rectenna, clipped at zero."""
    gain = as_gain_matrix(g)
    mat = hermitian_part(w_mat, gain.shape[1])
    forms = np.real(np.einsum("pi,ij,pj->p", gain, mat, gain.conj()))
    return np.maximum(forms, 0.0)


def matrix_power(
    p: RectennaParams, g: ChannelMatrix | ComplexArray, w_mat: ComplexArray
) -> float:
    """Lifted objective Psi(W) = sum_p phi(g_p W g_p^H)."""
    return float(np.sum(harvested_power(p, quadratic_forms(g, w_mat))))


def matrix_gradient(
    p: RectennaParams, g: ChannelMatrix | ComplexArray, w_mat: ComplexArray
) -> ComplexArray:
    """Gradient of Psi at W: sum_p phi'(g_p W g_p^H) · g_p^H g_p."""
    gain = as_gain_matrix(g)
    slopes = harvested_power_derivative(p, quadratic_forms(gain, w_mat))
    grad = gain.conj().T @ (slopes[:, None] * gain)
    return 0.5 * (grad + grad.conj().T)
