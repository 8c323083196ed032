"""Special functions for the energy-harvester model."""

from mimowpt.specfn.functions import (
    BRANCH_POINT,
    EPS_DOMAIN,
    lambert_w0,
    lambert_w0_of_exp,
    bessel_i0,
    bessel_i1,
    log_bessel_i0,
    bessel_ratio,
)

__all__ = [
    "BRANCH_POINT",
    "EPS_DOMAIN",
    "lambert_w0",
    "lambert_w0_of_exp",
    "bessel_i0",
    "bessel_i1",
    "log_bessel_i0",
    "bessel_ratio",
]
