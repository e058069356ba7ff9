"""Small floating-point helpers shared by several modules."""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def as_float_array(x) -> tuple[np.ndarray, bool]:
    """Return ``(array, was_scalar)`` so vectorised code can hand back the input's shape."""
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def restore(arr: np.ndarray, was_scalar: bool):
    return float(arr) if was_scalar else arr


def two_product(a, b):
    """Error-free product: returns ``(p, e)`` with ``p + e == a * b`` exactly (Dekker/Veltkamp)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = a * b
    t = _SPLITTER * a
    a_hi = t - (t - a)
    a_lo = a - a_hi
    t = _SPLITTER * b
    b_hi = t - (t - b)
    b_lo = b - b_hi
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def exact_ceil_product(n: int, q):
    """Smallest integer >= n*q, where n*q is the exact real product of the integer n and float q."""
    p, e = two_product(float(n), q)
    c = np.ceil(p)
    # p is the correctly rounded product, so an integer can only lie strictly between p and the
    # exact value when p itself is that integer.
    bump = (c == p) & (e > 0)
    return (c + bump).astype(np.int64)
