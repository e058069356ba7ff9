"""Sorted samples, empirical CDF and quantiles, DKW radius, median and MAD scale.

The empirical quantile follows the order-statistic convention ``F_n^{-1}(q) = X_(ceil(n q))``.
The index is computed from the exact product ``n * q`` so that, for example, ``q = 0.3`` with
``n = 10`` selects ``X_(3)`` rather than ``X_(4)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._numerics import as_float_array, exact_ceil_product, restore
from .errors import ConfigError, DomainError
from .normal import norm_ppf

MAD_CONSISTENCY = 1.0 / norm_ppf(0.75)


@dataclass(frozen=True, eq=False)
class SortedSample:
    """Order statistics ``X_(1) <= ... <= X_(n)`` held in a read-only array."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True).ravel()
        if v.size == 0:
            raise DomainError("a sample needs at least one value")
        if not np.all(np.isfinite(v)):
            raise DomainError("sample values must be finite")
        v.sort(kind="stable")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values) -> "SortedSample":
        return cls(np.asarray(values, dtype=float))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def shifted(self, c: float) -> "SortedSample":
        return SortedSample(self.values + c)

    def scaled(self, s: float) -> "SortedSample":
        return SortedSample(self.values * s)

    def quantile(self, q):
        return empirical_quantile(self, q)

    def cdf(self, x):
        return empirical_cdf(self, x)


def quantile_index(n: int, q):
    """1-based index ``ceil(n q)`` clamped to ``[1, n]``; ``q`` must lie in ``(0, 1]``."""
    arr, scalar = as_float_array(q)
    if np.any(~((arr > 0.0) & (arr <= 1.0))):
        raise DomainError("empirical quantile level must lie in (0, 1]")
    idx = np.clip(exact_ceil_product(n, arr), 1, n)
    return int(idx) if scalar else idx


def empirical_quantile(sample: SortedSample, q):
    """``X_(ceil(n q))`` for ``q`` in ``(0, 1]`` (scalar or array)."""
    arr, scalar = as_float_array(q)
    idx = quantile_index(sample.n, arr)
    return restore(sample.values[np.asarray(idx) - 1], scalar)


def empirical_cdf(sample: SortedSample, x):
    """Fraction of sample values that are ``<= x``."""
    arr, scalar = as_float_array(x)
    counts = np.searchsorted(sample.values, arr, side="right")
    return restore(counts / sample.n, scalar)


def dkw_radius(n: int, alpha: float) -> float:
    """Radius ``sqrt(log(2/alpha) / (2 n))`` of the DKW confidence band for ``F``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def median(sample: SortedSample) -> float:
    return float(empirical_quantile(sample, 0.5))


def median_and_mad(sample: SortedSample) -> tuple[float, float]:
    """Median ``X_(ceil(n/2))`` and the Gaussian-consistent MAD scale ``MAD / Phi^{-1}(3/4)``.

    The MAD itself is the same order-statistic median applied to ``|X_i - median|``.
    """
    m = median(sample)
    dev = np.sort(np.abs(sample.values - m))
    mad = float(dev[quantile_index(sample.n, 0.5) - 1])
    return m, mad * MAD_CONSISTENCY


def ks_distance_to(sample: SortedSample, cdf) -> float:
    """``sup_x |F_n(x) - F(x)|`` for a continuous CDF, evaluated exactly at the order statistics."""
    n = sample.n
    f = np.asarray(cdf(sample.values), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def parse_sample_text(text: str) -> SortedSample:
    """Parse newline-delimited floats, or a single-column CSV with an optional header ``x``."""
    values = []
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, start=1):
        cells = [c.strip() for c in row]
        if not cells or all(c == "" for c in cells):
            continue
        if len(cells) != 1:
            raise ConfigError(f"line {lineno}: expected a single column, got {len(cells)}")
        cell = cells[0]
        if not values and cell.lower() == "x":
            continue
        try:
            values.append(float(cell))
        except ValueError:
            raise ConfigError(f"line {lineno}: cannot parse {cell!r} as a number") from None
    if not values:
        raise ConfigError("no data values found")
    try:
        return SortedSample.from_values(values)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def read_sample(path) -> SortedSample:
    return parse_sample_text(Path(path).read_text())
