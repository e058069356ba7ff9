"""Adaptive robust confidence intervals for a Gaussian location with unknown contamination.

The main construction intersects, over a range of thresholds ``t``, the one-sided intervals

    [ F_n^{-1}(2(1 - Phi(t))) + t sigma - m sigma / t ,  F_n^{-1}(1 - 2(1 - Phi(t))) - t sigma + m sigma / t ]

with ``m = 2`` and ``t`` between ``t_min = 1.6`` and ``Phi^{-1}(1 - dkw_radius)``.  Because the
empirical quantile only changes at the thresholds ``t_j = Phi^{-1}(1 - j/(2n))``, the intersection
is found exactly by evaluating each piece at both sides of every breakpoint instead of scanning
a grid of ``t`` values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._numerics import exact_ceil_product
from .empirical import SortedSample, dkw_radius, median
from .errors import ConfigError, DomainError
from .normal import norm_cdf, norm_isf, norm_pdf, norm_ppf, norm_sf

# ---------------------------------------------------------------------------------------------
# Interval type
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lower, upper]``; empty when ``upper < lower``."""

    lower: float
    upper: float
    diagnostics: tuple = field(default=(), compare=False)

    @classmethod
    def whole_line(cls, *diagnostics: str) -> "Interval":
        return cls(-math.inf, math.inf, tuple(diagnostics))

    @property
    def empty(self) -> bool:
        return self.upper < self.lower

    @property
    def length(self) -> float:
        return max(self.upper - self.lower, 0.0)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lower, other.lower), min(self.upper, other.upper),
                        self.diagnostics + other.diagnostics)

    def shifted(self, c: float) -> "Interval":
        return Interval(self.lower + c, self.upper + c, self.diagnostics)

    def with_diagnostics(self, *extra: str) -> "Interval":
        return Interval(self.lower, self.upper, self.diagnostics + tuple(extra))

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "length": self.length,
            "empty": self.empty,
            "diagnostics": list(self.diagnostics),
        }


# ---------------------------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class EpsMaxMode:
    """Which upper bound on the contamination proportion the interval is calibrated for.

    ``std`` covers ``eps <= 0.05``, ``large049`` covers ``eps <= 0.49`` and ``small`` covers
    ``eps <= eps_max`` for a user-supplied ``eps_max <= 0.05``.
    """

    name: str = "std"
    eps_max: float | None = None

    def __post_init__(self):
        if self.name not in ("std", "large049", "small"):
            raise ConfigError(f"unknown eps_max mode {self.name!r}")
        if self.name == "small":
            if self.eps_max is None or not 0.0 < self.eps_max <= 0.05:
                raise ConfigError("small mode needs 0 < eps_max <= 0.05")
        elif self.eps_max is not None:
            raise ConfigError(f"mode {self.name} takes no eps_max")

    @classmethod
    def parse(cls, text: str) -> "EpsMaxMode":
        name, _, arg = text.strip().lower().partition(":")
        if name == "small":
            try:
                return cls("small", float(arg))
            except ValueError:
                raise ConfigError(f"cannot parse eps_max in {text!r}") from None
        if arg:
            raise ConfigError(f"mode {name!r} takes no argument")
        return cls(name)

    @property
    def bound(self) -> float:
        return {"std": 0.05, "large049": 0.49}.get(self.name, self.eps_max)

    def __str__(self) -> str:
        return f"small:{self.eps_max:g}" if self.name == "small" else self.name


STD005 = EpsMaxMode("std")
LARGE049 = EpsMaxMode("large049")


@dataclass(frozen=True)
class GaussianArciConfig:
    alpha: float = 0.05
    sigma: float = 1.0
    t_min: float = 1.6
    margin_mult: float = 2.0
    mode: EpsMaxMode = STD005

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ConfigError("sigma must be positive and finite")
        if not self.t_min > 0:
            raise ConfigError("t_min must be positive")
        if not self.margin_mult > 0:
            raise ConfigError("margin_mult must be positive")
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", EpsMaxMode.parse(self.mode))


@dataclass(frozen=True)
class TuningParams:
    t_eps: float
    r_eps: float

    def __post_init__(self):
        if not (self.t_eps > 0 and self.r_eps > 0):
            raise DomainError("t_eps and r_eps must be positive")


# ---------------------------------------------------------------------------------------------
# Quantile estimators
# ---------------------------------------------------------------------------------------------


def _index_lower(n: int, s) -> np.ndarray:
    """Index of ``F_n^{-1}(2 s)``: ``ceil(2 n s)`` clamped to ``[1, n]``."""
    return np.clip(exact_ceil_product(2 * n, s), 1, n)


def _index_upper(n: int, s) -> np.ndarray:
    """Index of ``F_n^{-1}(1 - 2 s)`` = ``n - floor(2 n s)`` clamped to ``[1, n]``."""
    floor = -exact_ceil_product(2 * n, -np.asarray(s, dtype=float))
    return np.clip(n - floor, 1, n)


def _clamp_note(n: int, level: float, side: str) -> str | None:
    if level * n < 1.0 or level > 1.0:
        return f"{side}: quantile level {level:.3g} outside [1/n, 1]; index clamped"
    return None


def theta_hat_L(sample: SortedSample, t: float, sigma: float = 1.0, diagnostics: list | None = None) -> float:
    """``F_n^{-1}(2(1 - Phi(t))) + t sigma``."""
    s = norm_sf(t)
    note = _clamp_note(sample.n, 2.0 * s, "theta_hat_L")
    if note and diagnostics is not None:
        diagnostics.append(note)
    k = int(_index_lower(sample.n, s))
    return float(sample.values[k - 1] + t * sigma)


def theta_hat_R(sample: SortedSample, t: float, sigma: float = 1.0, diagnostics: list | None = None) -> float:
    """``F_n^{-1}(1 - 2(1 - Phi(t))) - t sigma``."""
    s = norm_sf(t)
    note = _clamp_note(sample.n, 1.0 - 2.0 * s, "theta_hat_R")
    if note and diagnostics is not None:
        diagnostics.append(note)
    k = int(_index_upper(sample.n, s))
    return float(sample.values[k - 1] - t * sigma)


def t_max_for(n: int, alpha: float) -> float:
    """Largest threshold ``Phi^{-1}(1 - dkw_radius(n, alpha))`` (``-inf`` if the radius is >= 1)."""
    d = dkw_radius(n, alpha)
    return float(norm_isf(d)) if d < 1.0 else -math.inf


def t_epsilon(eps: float, n: int, alpha: float) -> float:
    """``t_eps = Phi^{-1}(1 - eps - dkw_radius(n, alpha))``."""
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    level = eps + dkw_radius(n, alpha)
    if not level < 1.0:
        raise DomainError("eps + dkw_radius must be below 1")
    return float(norm_isf(level))


def tuning_params(eps: float, n: int, alpha: float, margin_mult: float = 2.0) -> TuningParams:
    """``(t_eps, r_eps = margin_mult / t_eps)`` for the Gaussian tests."""
    t = t_epsilon(eps, n, alpha)
    if t <= 0:
        raise DomainError("t_eps is not positive at this (eps, n, alpha)")
    return TuningParams(t, margin_mult / t)


# ---------------------------------------------------------------------------------------------
# Exact optimisation over t
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class _Candidates:
    t: np.ndarray
    k_lower: np.ndarray
    k_upper: np.ndarray
    clamped: bool


def breakpoint_candidates(n: int, t_min: float, t_max: float) -> _Candidates:
    """All ``(t, index)`` pairs needed for the exact optimum over ``[t_min, t_max]``.

    On each piece between breakpoints the lower objective is increasing and the upper one is
    decreasing, so the optimum is the limit at a piece's right end.  Every interior breakpoint
    ``t_j`` is therefore paired with the indices of both adjacent pieces, and the two range
    endpoints are paired with their own indices.
    """
    s_min, s_max = float(norm_sf(t_min)), float(norm_sf(t_max))  # s_min >= s_max
    j_lo = math.floor(2 * n * s_max) + 1
    j_hi = math.ceil(2 * n * s_min) - 1
    j = np.arange(max(j_lo, 1), max(j_hi, 0) + 1)
    j = j[j < 2 * n]
    tj = norm_isf(j / (2.0 * n)) if j.size else np.empty(0)
    keep = (tj > t_min) & (tj < t_max)
    j, tj = j[keep], tj[keep]
    # piece to the left of t_j: quantile level in (j/(2n), (j+1)/(2n)); at and right of t_j: level <= j/(2n)
    k_lo_left, k_lo_at = j + 1, j
    k_up_left, k_up_right = n - j, n - j + 1
    ends = np.array([t_min, t_max])
    s_ends = np.array([s_min, s_max])
    t_all = np.concatenate([ends, tj, tj])
    k_lower = np.concatenate([_index_lower(n, s_ends), k_lo_left, k_lo_at])
    k_upper = np.concatenate([_index_upper(n, s_ends), k_up_left, k_up_right])
    raw = np.concatenate([k_lower, k_upper])
    clamped = bool(np.any(raw < 1) or np.any(raw > n) or 2 * n * s_max < 1 or 1 - 2 * s_min <= 0)
    return _Candidates(t_all, np.clip(k_lower, 1, n), np.clip(k_upper, 1, n), clamped)


def _objective_optimum(sample: SortedSample, t_min: float, t_max: float, sigma: float, margin: float):
    cand = breakpoint_candidates(sample.n, t_min, t_max)
    h = sigma * (cand.t - margin / cand.t)
    x = sample.values
    lower = float(np.max(x[cand.k_lower - 1] + h))
    upper = float(np.min(x[cand.k_upper - 1] - h))
    return lower, upper, cand.clamped


def lower_objective(sample: SortedSample, t, sigma: float = 1.0, margin: float = 2.0):
    """Pointwise ``F_n^{-1}(2(1 - Phi(t))) + t sigma - margin sigma / t`` (vectorised in ``t``)."""
    t = np.asarray(t, dtype=float)
    k = _index_lower(sample.n, norm_sf(t))
    return sample.values[k - 1] + sigma * (t - margin / t)


def upper_objective(sample: SortedSample, t, sigma: float = 1.0, margin: float = 2.0):
    """Pointwise ``F_n^{-1}(1 - 2(1 - Phi(t))) - t sigma + margin sigma / t`` (vectorised in ``t``)."""
    t = np.asarray(t, dtype=float)
    k = _index_upper(sample.n, norm_sf(t))
    return sample.values[k - 1] - sigma * (t - margin / t)


def arci_over_range(sample: SortedSample, t_min: float, t_max: float, sigma: float = 1.0,
                    margin: float = 2.0) -> Interval:
    """Exact intersection over ``t`` in ``[t_min, t_max]`` of the one-sided intervals."""
    if not t_min < t_max:
        return Interval.whole_line(
            f"threshold range is empty (t_min={t_min:.4g} >= t_max={t_max:.4g}); "
            "the sample is too small for this construction"
        )
    lo, hi, clamped = _objective_optimum(sample, t_min, t_max, sigma, margin)
    notes = ("quantile index clamped at the edge of the threshold range",) if clamped else ()
    return Interval(lo, hi, notes)


def arci_gaussian(sample: SortedSample, cfg: GaussianArciConfig = GaussianArciConfig()) -> Interval:
    """Adaptive interval with the thresholds and margin of ``cfg`` (mode is ignored here)."""
    t_max = t_max_for(sample.n, cfg.alpha)
    return arci_over_range(sample, cfg.t_min, t_max, cfg.sigma, cfg.margin_mult)


def radius_049(n: int, alpha: float) -> float:
    """Half-width ``R`` of the median interval used by the ``eps_max = 0.49`` construction."""
    return (1.0 / float(norm_pdf(norm_ppf(0.991)))) * (1.0 / n + dkw_radius(n, alpha) + 0.49)


def arci_gaussian_049(sample: SortedSample, alpha: float, sigma: float = 1.0) -> Interval:
    """Interval valid for contamination up to 0.49: thresholds from 4, margin ``8/t``,
    intersected with ``median +- R sigma``."""
    base = arci_over_range(sample, 4.0, t_max_for(sample.n, alpha), sigma, 8.0)
    cons = conservative_interval(sample, radius_049(sample.n, alpha) * sigma)
    return base.intersect(cons)


def small_epsmax_grid(eps_max: float, size: int = 64) -> np.ndarray:
    """``{0}`` together with ``size`` log-spaced points from ``eps_max * 1e-8`` to ``eps_max``."""
    return np.concatenate([[0.0], np.geomspace(eps_max * 1e-8, eps_max, size)])


def t_epsilon_small(eps, n: int, alpha: float, eps_max: float):
    """Threshold of the small-``eps_max`` tests (vectorised in ``eps``)."""
    eps = np.asarray(eps, dtype=float)
    rate = math.sqrt(2.0 * math.log(2.0 / alpha) / n)
    first = eps_max * math.sqrt(n / (2.0 * math.log(2.0 / alpha)))
    q = 1.0 / (eps_max / (rate + eps) + 10.0 * math.e)
    return np.minimum(first, norm_isf(q))


def interval_from_levels(sample: SortedSample, level, t, r, label: str = "grid point") -> Interval:
    """Intersect ``[F_n^{-1}(level) + t - r, F_n^{-1}(1 - level) - t + r]`` over arrays of
    (level, t, r).  Entries whose quantile levels leave ``(0, 1]`` are skipped with a diagnostic.
    """
    level = np.atleast_1d(np.asarray(level, dtype=float))
    t = np.broadcast_to(np.asarray(t, dtype=float), level.shape)
    r = np.broadcast_to(np.asarray(r, dtype=float), level.shape)
    n = sample.n
    ok = (level > 0.0) & (level <= 1.0) & (1.0 - level > 0.0) & np.isfinite(t) & np.isfinite(r)
    notes = []
    skipped = int(np.count_nonzero(~ok))
    if skipped:
        notes.append(f"{skipped} {label}(s) skipped: quantile level outside (0, 1]")
    if not np.any(ok):
        return Interval.whole_line(*notes, "no usable grid point; returning the whole line")
    lv, tt, rr = level[ok], t[ok], r[ok]
    k_lo = np.clip(exact_ceil_product(n, lv), 1, n)
    # ceil(n (1 - lv)) = n - floor(n lv), evaluated without rounding 1 - lv first.
    k_hi = np.clip(n + exact_ceil_product(n, -lv), 1, n)
    lower = float(np.max(sample.values[k_lo - 1] + tt - rr))
    upper = float(np.min(sample.values[k_hi - 1] - tt + rr))
    return Interval(lower, upper, tuple(notes))


def small_epsmax_calibration_margin(n: int, alpha: float, eps_max: float, grid_size: int = 64) -> float:
    """Smallest slack over the ``eps`` grid of the population condition behind the coverage of
    the small-``eps_max`` tests,

        (1 - eps_max) P(t - r <= Z <= t) - eps_max P(Z >= t) - eps - sqrt(2 log(2/alpha) / n),

    with ``t = t_eps`` and ``r = 6 eps_max / t``.  A positive value means that on the DKW event no
    test rejects the true location.  The slack turns negative once ``n eps_max^2`` is moderately
    large (for example ``eps_max = 0.05`` with ``n >= 10^4``), where ``t_eps`` stays near 1.8 and
    the margin ``6 eps_max / t`` is too small to absorb contamination close to ``eps_max``.
    """
    eps = small_epsmax_grid(eps_max, grid_size)
    t = t_epsilon_small(eps, n, alpha, eps_max)
    r = 6.0 * eps_max / t
    mass = np.asarray(norm_cdf(t)) - np.asarray(norm_cdf(t - r))
    slack = (1.0 - eps_max) * mass - eps_max * np.asarray(norm_sf(t)) - eps - 2.0 * dkw_radius(n, alpha)
    return float(np.min(slack))


def arci_gaussian_small_epsmax(sample: SortedSample, alpha: float, eps_max: float, grid_size: int = 64,
                               sigma: float = 1.0) -> Interval:
    """Interval calibrated for contamination at most ``eps_max <= 0.05``.

    A diagnostic is attached when the calibration slack (``small_epsmax_calibration_margin``) is
    not positive, because coverage is then not guaranteed even for clean data.
    """
    if not 0.0 < eps_max <= 0.05:
        raise DomainError("eps_max must lie in (0, 0.05]")
    n = sample.n
    eps = small_epsmax_grid(eps_max, grid_size)
    t = t_epsilon_small(eps, n, alpha, eps_max)
    d = dkw_radius(n, alpha)
    level = norm_sf(t) + eps + d
    # Upper ends use F_n^{-1}(Phi(t) - eps - d), i.e. the level 1 - `level`.
    iv = interval_from_levels(sample, level, sigma * t, sigma * 6.0 * eps_max / t, label="eps grid point")
    slack = small_epsmax_calibration_margin(n, alpha, eps_max, grid_size)
    if slack <= 0.0:
        iv = iv.with_diagnostics(
            f"calibration slack {slack:.3g} <= 0 at n={n}, eps_max={eps_max:g}: coverage is not guaranteed"
        )
    return iv


def median_interval(sample: SortedSample, eps: float, sigma: float = 1.0) -> Interval:
    """``median +- sqrt(2.1 pi) sigma (1.36/sqrt(n) + eps)``."""
    if not 0.0 <= eps < 1.0:
        raise DomainError("eps must lie in [0, 1)")
    half = math.sqrt(2.1 * math.pi) * sigma * (1.36 / math.sqrt(sample.n) + eps)
    m = median(sample)
    return Interval(m - half, m + half)


def conservative_interval(sample: SortedSample, R: float) -> Interval:
    """``median +- R``."""
    if not R > 0:
        raise DomainError("R must be positive")
    m = median(sample)
    return Interval(m - R, m + R)


def arci(sample: SortedSample, cfg: GaussianArciConfig) -> Interval:
    """Dispatch on ``cfg.mode``."""
    if cfg.mode.name == "std":
        return arci_gaussian(sample, cfg)
    if cfg.mode.name == "large049":
        return arci_gaussian_049(sample, cfg.alpha, cfg.sigma)
    return arci_gaussian_small_epsmax(sample, cfg.alpha, cfg.mode.eps_max, sigma=cfg.sigma)
