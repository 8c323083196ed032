"""Real special functions used by the rectenna model.

All functions accept a scalar or a numpy array and return a float for
scalar input and an array of the same shape otherwise.
"""

from __future__ import annotations

import math
from typing import overload

import numpy as np
import numpy.typing as npt
from scipy import special

from mimowpt.exceptions.errors import DomainError

FloatArray = npt.NDArray[np.float64]

EPS_DOMAIN = 1e-12
BRANCH_POINT = -math.exp(-1.0)
_LOG_MAX = math.log(np.finfo(np.float64).max)


def _as_result(values: FloatArray, scalar: bool) -> float | FloatArray:
    return float(values) if scalar else values


def _halley_polish(w: FloatArray, x: FloatArray, steps: int = 2) -> FloatArray:
    """Refine w ≈ W0(x) with Halley steps on w·exp(w) - x = 0."""
    for _ in range(steps):
        ew = np.exp(w)
        f = w * ew - x
        w1 = w + 1.0
        # Halley is singular at the branch point where w = -1
        safe = np.abs(w1) > 1e-8
        w1_safe = np.where(safe, w1, 1.0)
        denom = ew * w1_safe - (w + 2.0) * f / (2.0 * w1_safe)
        step = np.where(safe & (denom != 0.0), f / np.where(denom == 0.0, 1.0, denom), 0.0)
        w = w - step
    return np.maximum(w, -1.0)


@overload
def lambert_w0(x: float) -> float: ...
@overload
def lambert_w0(x: FloatArray) -> FloatArray: ...


def lambert_w0(x: float | FloatArray) -> float | FloatArray:
    """Principal branch of the Lambert-W function for real arguments.

    Args:
        x: Argument(s), x >= -1/e (a slack of 1e-12 is tolerated and clamped
            to the branch point).

    Returns:
        w with w·exp(w) = x and w >= -1.

    Raises:
        DomainError: If any x < -1/e - 1e-12 or x is not finite.
    """
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    if not np.all(np.isfinite(arr)):
        raise DomainError("lambert_w0 argument must be finite", value=x)
    if np.any(arr < BRANCH_POINT - EPS_DOMAIN):
        raise DomainError("lambert_w0 argument below -1/e", value=float(np.min(arr)))

    arr = np.maximum(arr, BRANCH_POINT)
    w = np.real(special.lambertw(arr, 0)).astype(np.float64)
    w = _halley_polish(w, arr)
    return _as_result(w, scalar)


@overload
def lambert_w0_of_exp(t: float) -> float: ...
@overload
def lambert_w0_of_exp(t: FloatArray) -> FloatArray: ...


def lambert_w0_of_exp(t: float | FloatArray) -> float | FloatArray:
    """Evaluate W0(exp(t)) without forming exp(t).

    For large t Newton's method is run on w + log(w) - t = 0, which avoids
    overflow when the rectenna model is driven far past its knee.
    """
    arr = np.asarray(t, dtype=np.float64)
    scalar = arr.ndim == 0
    if not np.all(np.isfinite(arr)):
        raise DomainError("lambert_w0_of_exp argument must be finite", value=t)

    flat = np.atleast_1d(arr).ravel()
    small = flat < 500.0
    out = np.empty_like(flat)
    if np.any(small):
        out[small] = lambert_w0(np.exp(flat[small]))
    if np.any(~small):
        tt = flat[~small]
        w = tt - np.log(tt)
        for _ in range(50):
            step = (w + np.log(w) - tt) / (1.0 + 1.0 / w)
            w = w - step
            if np.all(np.abs(step) <= 1e-15 * w):
                break
        out[~small] = w
    return _as_result(out.reshape(arr.shape), scalar)


def _check_nonnegative(arr: FloatArray, name: str, value: object) -> None:
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} argument must be finite", value=value)
    if np.any(arr < 0.0):
        raise DomainError(f"{name} argument must be non-negative", value=float(np.min(arr)))


@overload
def log_bessel_i0(x: float) -> float: ...
@overload
def log_bessel_i0(x: FloatArray) -> FloatArray: ...


def log_bessel_i0(x: float | FloatArray) -> float | FloatArray:
    """log I0(x) for x >= 0, finite for every finite x."""
    arr = np.asarray(x, dtype=np.float64)
    _check_nonnegative(arr, "log_bessel_i0", x)
    out = np.log(special.i0e(arr)) + arr
    return _as_result(out, arr.ndim == 0)


@overload
def bessel_i0(x: float) -> float: ...
@overload
def bessel_i0(x: FloatArray) -> FloatArray: ...


def bessel_i0(x: float | FloatArray) -> float | FloatArray:
    """Modified Bessel function of the first kind, order 0.

    Raises:
        DomainError: For negative arguments or when I0(x) overflows float64.
    """
    arr = np.asarray(x, dtype=np.float64)
    _check_nonnegative(arr, "bessel_i0", x)
    if np.any(np.log(special.i0e(arr)) + arr > _LOG_MAX):
        raise DomainError("bessel_i0 overflows float64", value=float(np.max(arr)))
    return _as_result(special.i0(arr), arr.ndim == 0)


@overload
def bessel_i1(x: float) -> float: ...
@overload
def bessel_i1(x: FloatArray) -> FloatArray: ...


def bessel_i1(x: float | FloatArray) -> float | FloatArray:
    """Modified Bessel function of the first kind, order 1.

    Raises:
        DomainError: For negative arguments or when I1(x) overflows float64.
    """
    arr = np.asarray(x, dtype=np.float64)
    _check_nonnegative(arr, "bessel_i1", x)
    with np.errstate(divide="ignore"):
        log_val = np.log(special.i1e(arr)) + arr
    if np.any(log_val > _LOG_MAX):
        raise DomainError("bessel_i1 overflows float64", value=float(np.max(arr)))
    return _as_result(special.i1(arr), arr.ndim == 0)


@overload
def bessel_ratio(x: float) -> float: ...
@overload
def bessel_ratio(x: FloatArray) -> FloatArray: ...


def bessel_ratio(x: float | FloatArray) -> float | FloatArray:
    """I1(x)/I0(x), computed from the exponentially scaled functions."""
    arr = np.asarray(x, dtype=np.float64)
    _check_nonnegative(arr, "bessel_ratio", x)
    return _as_result(special.i1e(arr) / special.i0e(arr), arr.ndim == 0)
