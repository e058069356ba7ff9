"""Standard normal density, CDF and inverse CDF.

``norm_cdf`` evaluates ``erfc`` from the standard library on a double-double argument so the
lower tail keeps full relative precision.  ``norm_ppf`` starts from a rational approximation
(relative error about 1e-9) and applies one Halley step against ``norm_cdf``, which brings the
relative error to the level of ``norm_cdf`` itself.
"""

from __future__ import annotations

import math

import numpy as np

from ._numerics import as_float_array, restore, two_product

_INV_SQRT2_HI = 0.7071067811865476
_INV_SQRT2_LO = -4.833646656726457e-17  # 1/sqrt(2) - _INV_SQRT2_HI
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)

_erfc = np.frompyfunc(math.erfc, 1, 1)
_erf = np.frompyfunc(math.erf, 1, 1)

# Rational approximation coefficients for the inverse normal CDF (central and tail regions).
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549671010522990e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def norm_pdf(x):
    """phi(x) = exp(-x^2/2)/sqrt(2 pi)."""
    arr, scalar = as_float_array(x)
    return restore(np.exp(-0.5 * arr * arr) / _SQRT_2PI, scalar)


def _lower_tail(x: np.ndarray) -> np.ndarray:
    """Phi(x) = erfc(-x/sqrt(2))/2 with the argument carried in double-double."""
    finite = np.isfinite(x)
    xf = np.where(finite, x, 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        z_hi, z_lo = two_product(-xf, _INV_SQRT2_HI)
        z_lo = z_lo + (-xf) * _INV_SQRT2_LO
        base = np.asarray(_erfc(z_hi), dtype=float)
        # first-order correction for the low part of the argument: d erfc/dz = -2/sqrt(pi) e^{-z^2}
        corr = np.where(base > 0.0, _TWO_OVER_SQRT_PI * np.exp(-z_hi * z_hi) * z_lo, 0.0)
    out = 0.5 * (base - corr)
    return np.where(finite, out, np.where(x > 0, 1.0, np.where(x < 0, 0.0, np.nan)))


def norm_cdf(x):
    """Standard normal CDF Phi(x)."""
    arr, scalar = as_float_array(x)
    return restore(_lower_tail(arr), scalar)


def norm_sf(x):
    """Upper tail 1 - Phi(x), accurate for large positive x."""
    arr, scalar = as_float_array(x)
    return restore(_lower_tail(-arr), scalar)


def _initial_ppf(p: np.ndarray) -> np.ndarray:
    """Rational approximation of Phi^{-1}(p) for 0 < p <= 1/2."""
    out = np.empty_like(p)
    tail = p < _P_LOW
    if np.any(tail):
        q = np.sqrt(-2.0 * np.log(p[tail]))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        out[tail] = num / den
    mid = ~tail
    if np.any(mid):
        q = p[mid] - 0.5
        r = q * q
        num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        out[mid] = num / den
    return out


def _lower_ppf(p: np.ndarray) -> np.ndarray:
    """Phi^{-1}(p) for 0 < p <= 1/2, refined by one Halley step."""
    x = _initial_ppf(p)
    central = p > 0.25
    # Near the median, Phi(x) - p cancels badly; there Phi(x) - 1/2 = erf(x/sqrt 2)/2 and
    # p - 1/2 are both available to full relative precision.
    err = np.where(
        central,
        0.5 * np.asarray(_erf(x * _INV_SQRT2_HI), dtype=float) - (p - 0.5),
        _lower_tail(x) - p,
    )
    u = err * _SQRT_2PI * np.exp(0.5 * x * x)
    x = x - u / (1.0 + 0.5 * x * u)
    return np.where(p == 0.5, 0.0, x)


def _check_open_unit(arr: np.ndarray, name: str) -> None:
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        from .errors import DomainError

        raise DomainError(f"{name} must lie in the open interval (0, 1)")


def norm_ppf(p):
    """Inverse standard normal CDF Phi^{-1}(p) for p in (0, 1)."""
    arr, scalar = as_float_array(p)
    _check_open_unit(arr, "p")
    return restore(_ppf(arr), scalar)


def norm_isf(q):
    """Phi^{-1}(1 - q) computed without forming 1 - q, for q in (0, 1)."""
    arr, scalar = as_float_array(q)
    _check_open_unit(arr, "q")
    return restore(-_ppf(arr), scalar)


def _ppf(p: np.ndarray) -> np.ndarray:
    lower = p <= 0.5
    # 1 - p is exact for p >= 1/2, so the upper half is handled through the lower tail.
    q = np.where(lower, p, 1.0 - p)
    x = _lower_ppf(q)
    return np.where(lower, x, -x)
