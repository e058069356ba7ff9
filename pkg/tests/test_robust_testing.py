import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from huberband.distributions import sample
from huberband.empirical import SortedSample, dkw_radius
from huberband.errors import ConfigError
from huberband.gaussian_arci import (
    GaussianArciConfig,
    arci_gaussian,
    arci_gaussian_small_epsmax,
    t_epsilon,
    t_max_for,
)
from huberband.general_arci import arci_general
from huberband.normal import norm_sf
from huberband.robust_testing import (
    Decision,
    Direction,
    Regime,
    TestSpec,
    accepted_mask,
    all_accept,
    build_test_grid,
    invert_grid,
    invert_tests,
    run_test,
    test_statistic,
)

ALPHA = 0.05


def _mixed_sample(rng, n):
    m = rng.binomial(n, rng.uniform(0.0, 0.3))
    outliers = rng.normal(rng.uniform(-20, 20), rng.uniform(0.1, 3.0), m)
    return SortedSample.from_values(np.concatenate([rng.normal(size=n - m), outliers]))


def test_point_mass_is_rejected_by_minus_test():
    s = SortedSample.from_values(np.full(50, 3.0))
    spec = TestSpec(3.0, Direction.MINUS, r_eps=0.5, t_eps=2.0, threshold=0.1, regime=Regime.GAUSSIAN005)
    assert test_statistic(spec, s) == 0.0
    assert run_test(spec, s) is Decision.REJECT_NULL


def test_strictness_of_the_two_directions():
    # Ten points, one at or beyond each tail boundary: statistic exactly equals the threshold.
    s = SortedSample.from_values([-5.0] + [0.0] * 8 + [5.0])
    minus = TestSpec(0.0, Direction.MINUS, 1.0, 6.0, 0.1, Regime.GAUSSIAN005)
    plus = TestSpec(0.0, Direction.PLUS, 1.0, 6.0, 0.1, Regime.GAUSSIAN005)
    assert test_statistic(minus, s) == pytest.approx(0.1) and test_statistic(plus, s) == pytest.approx(0.1)
    assert run_test(minus, s) is Decision.REJECT_NULL  # <= rejects
    assert run_test(plus, s) is Decision.ACCEPT_NULL  # < does not


def test_spec_validation():
    with pytest.raises(ConfigError):
        TestSpec(0.0, Direction.PLUS, 1.0, 1.0, 1.5, Regime.GENERAL)
    with pytest.raises(ConfigError):
        TestSpec(0.0, Direction.PLUS, 0.0, 1.0, 0.5, Regime.GENERAL)


def test_threshold_formulas():
    n = 2000
    g = build_test_grid(Regime.GAUSSIAN005, n, ALPHA)
    np.testing.assert_allclose(g.threshold, 2 * np.array([norm_sf(t) for t in g.t]), rtol=1e-15, atol=0)
    np.testing.assert_allclose(g.r, 2.0 / g.t, rtol=1e-15)
    s = build_test_grid(Regime.SMALL_EPS_MAX, 10 ** 4, ALPHA, eps_max=0.01)
    eps = np.asarray(s.threshold) - np.array([norm_sf(t) for t in s.t]) - dkw_radius(10 ** 4, ALPHA)
    assert eps[0] == pytest.approx(0.0, abs=1e-15)
    assert eps[-1] == pytest.approx(0.01, abs=1e-15)
    np.testing.assert_allclose(s.r, 6 * 0.01 / s.t, rtol=1e-15)
    with pytest.raises(ConfigError):
        build_test_grid(Regime.GENERAL, 100, ALPHA)


def test_inverted_gaussian_tests_reproduce_direct_interval():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(10, 501))
        t_min = min(1.6, t_max_for(n, ALPHA) / 2)
        s = _mixed_sample(rng, n)
        direct = arci_gaussian(s, GaussianArciConfig(t_min=t_min))
        inverted = invert_tests(s, ALPHA, Regime.GAUSSIAN005) if t_min == 1.6 else \
            invert_grid(s, build_test_grid(Regime.GAUSSIAN005, n, ALPHA, t_min=t_min))
        assert direct.empty == inverted.empty
        if not direct.empty:
            assert inverted.lower == pytest.approx(direct.lower, abs=1e-9)
            assert inverted.upper == pytest.approx(direct.upper, abs=1e-9)


def test_inverted_general_and_small_regimes_match_their_intervals():
    s = sample("gengauss:2", 0.3, 5000, seed=5)
    a = arci_general(s, "gengauss:2", ALPHA, 0.05)
    b = invert_tests(s, ALPHA, Regime.GENERAL, family="gengauss:2", eps_max=0.05)
    assert (a.lower, a.upper) == (b.lower, b.upper)
    s = sample("gaussian", -1.0, 10 ** 4, seed=6)
    a = arci_gaussian_small_epsmax(s, ALPHA, 0.01)
    b = invert_tests(s, ALPHA, Regime.SMALL_EPS_MAX, eps_max=0.01)
    assert (a.lower, a.upper) == (b.lower, b.upper)


def test_membership_duality_on_theta_grid():
    rng = np.random.default_rng(12)
    for n in (800, 2000):
        s = _mixed_sample(rng, n)
        grid = build_test_grid(Regime.GAUSSIAN005, n, ALPHA)
        iv = invert_grid(s, grid)
        thetas = np.concatenate([np.linspace(iv.lower - 1, iv.upper + 1, 1000), [iv.lower, iv.upper]])
        mask = accepted_mask(s, grid, thetas)
        inside = (thetas >= iv.lower) & (thetas <= iv.upper)
        assert np.array_equal(mask, inside)
        for theta in thetas[::50]:
            assert all_accept(s, grid, float(theta)) == bool((theta >= iv.lower) & (theta <= iv.upper))


@settings(max_examples=40, deadline=None)
@given(hst.integers(700, 1500), hst.integers(0, 2 ** 32 - 1), hst.floats(0.0, 0.3), hst.floats(-15, 15))
def test_duality_property(n, seed, eps, loc):
    rng = np.random.default_rng(seed)
    m = rng.binomial(n, eps)
    s = SortedSample.from_values(np.concatenate([rng.normal(size=n - m), rng.normal(loc, 0.5, m)]))
    grid = build_test_grid(Regime.GAUSSIAN005, n, ALPHA)
    iv = invert_grid(s, grid)
    if iv.empty:
        thetas = np.linspace(-3, 3, 101)
        assert not np.any(accepted_mask(s, grid, thetas))
        return
    thetas = np.linspace(iv.lower - 0.5, iv.upper + 0.5, 201)
    assert np.array_equal(accepted_mask(s, grid, thetas), (thetas >= iv.lower) & (thetas <= iv.upper))


def test_degenerate_data_empty_the_interval():
    # With every point at 0 both order statistics are 0, so the bounds are t - r and r - t.
    s = SortedSample.from_values(np.zeros(2000))
    grid = build_test_grid(Regime.GAUSSIAN005, 2000, ALPHA, grid=[1.7, 1.8])
    assert np.all(grid.t > grid.r)
    iv = invert_grid(s, grid)
    assert iv.empty
    assert not np.any(accepted_mask(s, grid, np.linspace(-2, 2, 401)))


@pytest.mark.slow
def test_type_one_and_type_two_error_rates():
    n, reps = 2000, 400
    t = t_epsilon(0.0, n, ALPHA)
    r = 2.0 / t
    thr = 2 * norm_sf(t)
    accepts, rejects = 0, 0
    for seed in range(reps):
        null = sample("gaussian", 0.0, n, seed=seed)
        alt = sample("gaussian", -r, n, seed=10 ** 6 + seed)
        spec = TestSpec(0.0, Direction.MINUS, r, t, thr, Regime.GAUSSIAN005)
        accepts += run_test(spec, null) is Decision.ACCEPT_NULL
        rejects += run_test(spec, alt) is Decision.REJECT_NULL
    se = math.sqrt(ALPHA * (1 - ALPHA) / reps)
    assert accepts / reps >= 1 - ALPHA - 3 * se
    assert rejects / reps >= 1 - ALPHA - 3 * se
