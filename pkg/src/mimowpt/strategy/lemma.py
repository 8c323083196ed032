"""Two-point maximization of E{f(nu)} under a mean constraint E{nu} = nu_bar.

For a non-decreasing f the optimum puts mass beta on nu1 <= nu_bar and
1 - beta on nu2 >= nu_bar, where nu1 minimizes over the left points the
steepest chord slope to the right points and nu2 is that chord's right end.
The value equals the concave envelope of f at nu_bar.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from mimowpt.exceptions.errors import DimensionError, DomainError, GridRangeError

FloatArray = npt.NDArray[np.float64]

# relative tolerance for treating nu_bar as lying on a grid point
ON_GRID_RTOL = 1e-12


@dataclass(frozen=True)
class ScalarFunctionTable:
    """Samples f(nu) on a strictly ascending grid."""

    nu: FloatArray
    f: FloatArray
    monotone: bool = True

    def __post_init__(self) -> None:
        nu = np.asarray(self.nu, dtype=np.float64)
        f = np.asarray(self.f, dtype=np.float64)
        if nu.ndim != 1 or nu.shape != f.shape or nu.size == 0:
            raise DimensionError(
                "Table needs equally long, non-empty 1-D arrays",
                expected=nu.shape,
                actual=f.shape,
            )
        if not (np.all(np.isfinite(nu)) and np.all(np.isfinite(f))):
            raise DomainError("Table entries must be finite")
        if np.any(np.diff(nu) <= 0.0):
            raise DomainError("Table grid must be strictly ascending")
        if self.monotone and np.any(np.diff(f) < 0.0):
            raise DomainError("Table values must be non-decreasing")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "f", f)

    def __len__(self) -> int:
        return int(self.nu.size)


@dataclass(frozen=True)
class TwoPointSolution:
    """Optimal two-point distribution on the table grid.

    ``index1`` and ``index2`` point into the table; they coincide for the
    single-point (Jensen) case, where beta is 1.
    """

    nu1: float
    nu2: float
    beta: float
    value: float
    index1: int
    index2: int

    @property
    def degenerate(self) -> bool:
        return self.index1 == self.index2


def split_index(nu: FloatArray, nu_bar: float) -> int:
    """Index n of the smallest grid point with nu[n] >= nu_bar."""
    tol = ON_GRID_RTOL * max(1.0, abs(nu_bar))
    return int(np.searchsorted(nu, nu_bar - tol, side="left"))


def slope_matrix(tab: ScalarFunctionTable, n: int) -> FloatArray:
    """S[i, j - n] = (f_j - f_i) / (nu_j - nu_i) for i < n <= j."""
    left_nu, left_f = tab.nu[:n, None], tab.f[:n, None]
    right_nu, right_f = tab.nu[None, n:], tab.f[None, n:]
    return (right_f - left_f) / (right_nu - left_nu)


def solve_two_point(tab: ScalarFunctionTable, nu_bar: float) -> TwoPointSolution:
    """Optimal (nu1, nu2, beta) on the grid for mean budget ``nu_bar``.

    Ties in the argmin and argmax go to the smallest index. When the
    optimal right end coincides with nu_bar the single point nu_bar is
    returned with beta = 1.

    Raises:
        GridRangeError: If nu_bar lies outside the grid.
    """
    lo, hi = float(tab.nu[0]), float(tab.nu[-1])
    tol = ON_GRID_RTOL * max(1.0, abs(nu_bar))
    if not (lo - tol <= nu_bar <= hi + tol):
        raise GridRangeError(
            f"Budget {nu_bar!r} lies outside the table range [{lo!r}, {hi!r}]",
            budget=nu_bar,
            grid_max=hi,
        )

    n = min(split_index(tab.nu, nu_bar), len(tab) - 1)
    if n == 0:
        return _single_point(tab, 0)

    slopes = slope_matrix(tab, n)
    i_star = int(np.argmin(slopes.max(axis=1)))
    j_star = n + int(np.argmax(slopes[i_star]))

    nu1, nu2 = float(tab.nu[i_star]), float(tab.nu[j_star])
    beta = (nu2 - nu_bar) / (nu2 - nu1)
    if beta <= tol / (nu2 - nu1):
        return _single_point(tab, j_star)

    beta = min(beta, 1.0)
    value = beta * float(tab.f[i_star]) + (1.0 - beta) * float(tab.f[j_star])
    return TwoPointSolution(
        nu1=nu1, nu2=nu2, beta=beta, value=value, index1=i_star, index2=j_star
    )


def _single_point(tab: ScalarFunctionTable, index: int) -> TwoPointSolution:
    nu = float(tab.nu[index])
    return TwoPointSolution(
        nu1=nu, nu2=nu, beta=1.0, value=float(tab.f[index]), index1=index, index2=index
    )


def brute_force_chord(tab: ScalarFunctionTable, nu_bar: float) -> float:
    """Largest chord value at nu_bar over all grid pairs nu_i <= nu_bar <= nu_j."""
    tol = ON_GRID_RTOL * max(1.0, abs(nu_bar))
    best = -np.inf
    for i in range(len(tab)):
        if tab.nu[i] > nu_bar + tol:
            break
        for j in range(i, len(tab)):
            if tab.nu[j] < nu_bar - tol:
                continue
            if j == i:
                best = max(best, float(tab.f[i]))
                continue
            beta = (tab.nu[j] - nu_bar) / (tab.nu[j] - tab.nu[i])
            best = max(best, float(beta * tab.f[i] + (1.0 - beta) * tab.f[j]))
    return float(best)
