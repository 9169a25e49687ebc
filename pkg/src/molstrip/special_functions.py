"""Modified Bessel functions of the second kind (McDonald functions) K0 and K1.

These enter the screened eikonal phase (through K0) and the momentum-transfer
kernel (through K1).  The evaluation is delegated to scipy's Cephes-based
routines, wrapped with the domain contract used throughout the package:
strictly positive finite arguments, and a hard zero once exp(-x) underflows
(the integrand tails then vanish naturally instead of raising).

Accuracy against the independent high-precision reference in
``molstrip.verification`` is better than 1e-12 relative on x in [1e-8, 700].
"""

import math

from scipy import special as _sp

__all__ = ["bessel_k0", "bessel_k1"]

# exp(-x) underflows to strict zero slightly above this; scipy already
# returns 0.0 there, the constant just documents the policy boundary.
UNDERFLOW_X = 746.0


def _check_domain(x: float, name: str) -> float:
    x = float(x)
    if math.isnan(x) or math.isinf(x) or x <= 0.0:
        raise ValueError(f"{name} requires a positive finite argument, got {x!r}")
    return x


def bessel_k0(x: float) -> float:
    """K0(x) for x > 0; returns 0.0 beyond the underflow threshold."""
    x = _check_domain(x, "bessel_k0")
    return float(_sp.k0(x))


def bessel_k1(x: float) -> float:
    """K1(x) for x > 0; returns 0.0 beyond the underflow threshold."""
    x = _check_domain(x, "bessel_k1")
    return float(_sp.k1(x))
