"""Robust one-sided tests of a location and their inversion into confidence intervals.

A test of ``theta0`` against ``theta0 - r`` (direction ``MINUS``) rejects when too few points sit
above ``theta0 - r + t``; the test against ``theta0 + r`` (``PLUS``) rejects when too few sit below
``theta0 + r - t``.  Collecting every ``theta0`` accepted by all tests of a grid gives an interval,
which this module computes both by brute force (``run_test``) and in closed form
(``invert_tests``); the two must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distributions import LocationFamily, parse_family
from .empirical import SortedSample, dkw_radius
from .errors import ConfigError
from .gaussian_arci import (
    Interval,
    breakpoint_candidates,
    interval_from_levels,
    small_epsmax_grid,
    t_epsilon_small,
    t_max_for,
)
from .general_arci import general_test_grid
from .normal import norm_sf


class Direction(Enum):
    MINUS = "minus"
    PLUS = "plus"


class Regime(Enum):
    GAUSSIAN005 = "gaussian005"
    GENERAL = "general"
    SMALL_EPS_MAX = "small_eps_max"


class Decision(Enum):
    ACCEPT_NULL = "accept"
    REJECT_NULL = "reject"


@dataclass(frozen=True)
class TestSpec:
    """One robust test: null ``theta0`` against ``theta0 -+ r_eps``."""

    __test__ = False  # not a pytest class

    theta0: float
    direction: Direction
    r_eps: float
    t_eps: float
    threshold: float
    regime: Regime

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError("threshold must lie in [0, 1]")
        if not (self.r_eps > 0 and self.t_eps > 0):
            raise ConfigError("r_eps and t_eps must be positive")


def test_statistic(spec: TestSpec, sample: SortedSample) -> float:
    """Empirical tail fraction used by the test."""
    x = sample.values
    if spec.direction is Direction.MINUS:
        return float(np.count_nonzero(x - (spec.theta0 - spec.r_eps) >= spec.t_eps)) / sample.n
    return float(np.count_nonzero(x - (spec.theta0 + spec.r_eps) <= -spec.t_eps)) / sample.n


test_statistic.__test__ = False


def run_test(spec: TestSpec, sample: SortedSample) -> Decision:
    """MINUS rejects iff the statistic is ``<= threshold``; PLUS rejects iff it is ``< threshold``."""
    stat = test_statistic(spec, sample)
    if spec.direction is Direction.MINUS:
        reject = stat <= spec.threshold
    else:
        reject = stat < spec.threshold
    return Decision.REJECT_NULL if reject else Decision.ACCEPT_NULL


# ---------------------------------------------------------------------------------------------
# Test grids
# ---------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class TestGrid:
    """Parallel arrays ``(threshold, t, r)`` describing one test pair per grid point."""

    __test__ = False

    regime: Regime
    threshold: np.ndarray
    t: np.ndarray
    r: np.ndarray
    notes: tuple = ()

    def usable(self) -> np.ndarray:
        thr = self.threshold
        return np.isfinite(thr) & (thr > 0.0) & (thr < 1.0) & np.isfinite(self.t) & np.isfinite(self.r)

    def specs_at(self, theta0: float) -> list[TestSpec]:
        out = []
        for thr, t, r in zip(self.threshold[self.usable()], self.t[self.usable()], self.r[self.usable()]):
            for d in (Direction.MINUS, Direction.PLUS):
                out.append(TestSpec(theta0, d, float(r), float(t), float(thr), self.regime))
        return out


def gaussian_threshold(t):
    """``2 (1 - Phi(t))``."""
    return 2.0 * np.asarray(norm_sf(t))


def small_epsmax_threshold(t, eps, n: int, alpha: float):
    """``1 - Phi(t) + eps + sqrt(log(2/alpha) / (2 n))``."""
    return np.asarray(norm_sf(t)) + np.asarray(eps) + dkw_radius(n, alpha)


def gaussian_breakpoint_grid(n: int, alpha: float, t_min: float = 1.6) -> np.ndarray:
    """Thresholds that realise every piece of the Gaussian objective: the range ends and each
    interior breakpoint together with points just to either side of it."""
    t_max = t_max_for(n, alpha)
    if not t_min < t_max:
        return np.array([])
    cand = breakpoint_candidates(n, t_min, t_max)
    tj = np.unique(cand.t[2:])
    offset = 1e-13 * tj
    return np.unique(np.concatenate([[t_min, t_max], tj - offset, tj, np.minimum(tj + offset, t_max)]))


def build_test_grid(regime: Regime, n: int, alpha: float, family=None, eps_max: float | None = None,
                    grid=None, t_min: float = 1.6, margin: float = 2.0) -> TestGrid:
    """Grid of tests for a regime.

    ``GAUSSIAN005``: ``grid`` is a set of thresholds ``t`` (default: the breakpoint grid), with
    ``r = margin / t``.  ``GENERAL`` and ``SMALL_EPS_MAX``: ``grid`` is a set of contamination
    levels (default: the grids used by the corresponding intervals).
    """
    regime = Regime(regime)
    if regime is Regime.GAUSSIAN005:
        t = np.asarray(gaussian_breakpoint_grid(n, alpha, t_min) if grid is None else grid, dtype=float)
        return TestGrid(regime, gaussian_threshold(t), t, margin / t)
    if eps_max is None:
        raise ConfigError(f"regime {regime.value} needs eps_max")
    if regime is Regime.SMALL_EPS_MAX:
        eps = np.asarray(small_epsmax_grid(eps_max) if grid is None else grid, dtype=float)
        t = np.asarray(t_epsilon_small(eps, n, alpha, eps_max), dtype=float)
        return TestGrid(regime, small_epsmax_threshold(t, eps, n, alpha), t, 6.0 * eps_max / t)
    fam = family if isinstance(family, LocationFamily) else parse_family(family or "gaussian")
    g = general_test_grid(fam, n, alpha, eps_max, None if grid is None else tuple(np.asarray(grid, float)))
    return TestGrid(regime, g.threshold, g.t, g.r, g.notes)


def invert_grid(sample: SortedSample, grid: TestGrid) -> Interval:
    """Closed-form ``{theta : every test of the grid accepts}``.

    The PLUS test at ``theta`` accepts iff ``X_(ceil(n thr)) <= theta + r - t`` and the MINUS test
    accepts iff ``X_(ceil(n (1 - thr))) >= theta - r + t``.
    """
    ok = grid.usable()
    notes = list(grid.notes)
    if np.any(~ok):
        notes.append(f"{int(np.count_nonzero(~ok))} grid point(s) with threshold outside (0, 1) skipped")
    if not np.any(ok):
        return Interval.whole_line(*notes)
    iv = interval_from_levels(sample, grid.threshold[ok], grid.t[ok], grid.r[ok])
    return iv.with_diagnostics(*notes)


def invert_tests(sample: SortedSample, alpha: float, regime, family=None, eps_max: float | None = None,
                 grid=None) -> Interval:
    return invert_grid(sample, build_test_grid(regime, sample.n, alpha, family, eps_max, grid))


def all_accept(sample: SortedSample, grid: TestGrid, theta0: float) -> bool:
    """Brute force: does every usable test of the grid accept ``theta0``?"""
    return all(run_test(spec, sample) is Decision.ACCEPT_NULL for spec in grid.specs_at(theta0))


def accepted_mask(sample: SortedSample, grid: TestGrid, thetas) -> np.ndarray:
    """Vectorised brute force over many ``theta0`` values (same inequalities as ``run_test``)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    x = sample.values
    n = sample.n
    ok = grid.usable()
    thr, t, r = grid.threshold[ok], grid.t[ok], grid.r[ok]
    accept = np.ones(thetas.shape, dtype=bool)
    for i, theta in enumerate(thetas):
        # x - c is nondecreasing in x under rounding, so each count is a binary search on the
        # literally computed differences.
        minus_count = n - np.array([np.searchsorted(x - (theta - ri), ti, side="left") for ti, ri in zip(t, r)])
        plus_count = np.array([np.searchsorted(x - (theta + ri), -ti, side="right") for ti, ri in zip(t, r)])
        accept[i] = not (np.any(minus_count / n <= thr) or np.any(plus_count / n < thr))
    return accept


__all__ = [
    "Direction", "Regime", "Decision", "TestSpec", "TestGrid", "run_test", "test_statistic",
    "build_test_grid", "invert_grid", "invert_tests", "all_accept", "accepted_mask",
    "gaussian_threshold", "small_epsmax_threshold", "gaussian_breakpoint_grid",
]
