"""Canonical representatives of phase-invariant beam vectors."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

ComplexArray = npt.NDArray[np.complex128]

_ZERO_TOL = 1e-300


def canonicalize(w: ComplexArray) -> ComplexArray:
    """Rotate w so that its first nonzero entry is real and positive.

    The harvested power only depends on |g_p w|, so every e^{j theta} w is an
    equally good beam; this picks one representative.
    """
    vec = np.asarray(w, dtype=np.complex128).copy()
    nonzero = np.flatnonzero(np.abs(vec) > _ZERO_TOL)
    if nonzero.size == 0:
        return vec
    lead = vec[nonzero[0]]
    vec *= np.conj(lead) / np.abs(lead)
    vec[nonzero[0]] = np.abs(lead)
    return vec
