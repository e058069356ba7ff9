import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

import huberband.list_decodable as ld
from huberband.distributions import sample
from huberband.empirical import SortedSample
from huberband.gaussian_arci import Interval
from huberband.list_decodable import (
    MAX_LIST,
    PACKING_GAP,
    CandidateSet,
    build_list,
    candidate_set,
    confidence_set,
    intersect_union,
    list_decode,
    neighbour_counts,
)


def _brute_membership(s: SortedSample, grid):
    x = np.asarray(grid)[:, None]
    inside = (s.values[None, :] - 2 <= x) & (x <= s.values[None, :] + 2)
    return inside.sum(axis=1) * 200 >= s.n


def test_neighbour_counts_use_closed_neighbourhoods():
    s = SortedSample.from_values([0.0, 1.0, 5.0])
    assert list(neighbour_counts(s, [-2.0, 3.0, 3.5, 7.0, 7.5])) == [1, 2, 1, 1, 0]


def _h_membership(H: CandidateSet, grid):
    return np.array([H.contains(float(x)) for x in grid])


def test_candidate_set_examples():
    assert candidate_set(SortedSample.from_values(np.zeros(1000))).intervals == ((-2.0, 2.0),)
    s = SortedSample.from_values(np.concatenate([np.zeros(990), np.full(10, 100.0)]))
    H = candidate_set(s)
    assert H.intervals == ((-2.0, 2.0), (98.0, 102.0))
    grid = np.linspace(-5, 105, 100_000)
    assert np.array_equal(_h_membership(H, grid), _brute_membership(s, grid))


def test_candidate_set_for_spread_data():
    spread = SortedSample.from_values(np.linspace(0, 1e6, 100))
    assert not candidate_set(spread).empty  # one point is 1% of the sample
    assert candidate_set(SortedSample.from_values(np.linspace(0, 1e6, 10_000))).empty


@settings(max_examples=40, deadline=None)
@given(hst.lists(hst.floats(-30, 30), min_size=1, max_size=500))
def test_candidate_set_matches_brute_force(vals):
    s = SortedSample.from_values(vals)
    H = candidate_set(s)
    ends = np.concatenate([s.values - 2, s.values + 2])
    grid = np.unique(np.concatenate([ends, ends - 1e-9, ends + 1e-9, np.linspace(-35, 35, 701)]))
    assert np.array_equal(_h_membership(H, grid), _brute_membership(s, grid))
    for a, b in H.intervals:
        assert np.min(np.abs(s.values - 2 - a)) == 0 or np.min(np.abs(s.values + 2 - a)) == 0
    assert all(b1 < a2 for (_, b1), (a2, _) in zip(H.intervals, H.intervals[1:]))


def test_build_list_examples():
    assert build_list(CandidateSet(((-2.0, 2.0),))) == [-2.0]
    assert build_list(CandidateSet(((-2.0, 2.0), (98.0, 102.0)))) == [-2.0, 98.0]
    L = build_list(CandidateSet(((0.0, 100.0),)))
    assert len(L) == 25 and L[0] == 0.0


def _brute_max_packing(points, gap=4.0):
    """Largest subset of ``points`` with all pairwise distances > gap (exhaustive DP on a line)."""
    pts = sorted(points)
    best = [1] * len(pts)
    for i, j in itertools.product(range(len(pts)), repeat=2):
        if j < i and pts[i] - pts[j] > gap:
            best[i] = max(best[i], best[j] + 1)
    return max(best)


def test_packing_count_matches_dense_brute_force():
    grid = np.linspace(0.0, 100.0, 2001)
    assert _brute_max_packing(grid) in (24, 25)
    assert len(build_list(CandidateSet(((0.0, 100.0),)))) == _brute_max_packing(grid)


@settings(max_examples=40, deadline=None)
@given(hst.lists(hst.floats(-60, 60), min_size=1, max_size=500))
def test_list_is_a_maximal_packing(vals):
    s = SortedSample.from_values(vals)
    H = candidate_set(s)
    L = build_list(H)
    assert all(b - a > 4 for a, b in zip(L, L[1:]))
    assert all(H.contains(c) for c in L)
    assert len(L) <= MAX_LIST
    for a, b in H.intervals:
        for x in np.linspace(a, b, 50):
            assert min(abs(x - c) for c in L) <= 4.0 + 2 * (PACKING_GAP - 4.0)


def test_list_size_bound_on_many_clusters():
    # 200 clusters each holding exactly 0.5% of the points: one list element per cluster.
    x = np.repeat(np.arange(200) * 10.0, 5)
    L = list_decode(SortedSample.from_values(x))
    assert len(L) == 200


def test_intersect_union():
    base = Interval(0.0, 10.0)
    assert intersect_union(base, [(-5, 1), (0.5, 2), (9, 20)]) == ((0.0, 2.0), (9.0, 10.0))
    assert intersect_union(Interval(5.0, 4.0), [(0, 10)]) == ()


def test_confidence_set_structure():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(100, 3000))
        m = rng.binomial(n, rng.uniform(0, 0.99))
        x = np.concatenate([rng.normal(size=n - m), rng.normal(rng.uniform(-100, 100), 1, m)])
        cs = confidence_set(SortedSample.from_values(x), 0.05)
        assert cs.volume <= 8 * len(cs.candidates) + 1e-9
        assert cs.K <= MAX_LIST + 1
        assert all(u1 < l2 for (_, u1), (l2, _) in zip(cs.intervals, cs.intervals[1:]))


def test_modified_set_is_one_interval_on_clean_data():
    cs = confidence_set(sample("gaussian", 0.0, 10 ** 5, seed=2), 0.05, modified=True)
    assert cs.K == 1 and cs.contains(0.0)


def test_modified_branch_returns_the_short_wide_interval(monkeypatch):
    # A lower threshold range makes the wide interval finite and short at desk sample sizes.
    monkeypatch.setattr(ld, "LIST_T_MIN", 1.6)
    s = sample("gaussian", 0.0, 10 ** 5, seed=2)
    base = ld.wide_interval(s, 0.05)
    assert math.isfinite(base.length) and base.length < 8
    cs = confidence_set(s, 0.05, modified=True)
    assert cs.intervals == ((base.lower, base.upper),) and cs.candidates == ()


def test_to_dict_keys():
    d = confidence_set(sample("gaussian", 0.0, 500, seed=1), 0.05).to_dict()
    assert set(d) >= {"components", "volume", "list"}


@pytest.mark.slow
@pytest.mark.parametrize("eps", [0.5, 0.9, 0.99])
@pytest.mark.parametrize("q", ["point", "gauss"])
def test_list_error_and_coverage(eps, q):
    n, reps = 10 ** 4, 500
    rng = np.random.default_rng(int(eps * 100) + (q == "gauss"))
    hit = cover = 0
    for _ in range(reps):
        m = rng.binomial(n, eps)
        dirty = np.full(m, 1000.0) if q == "point" else rng.normal(50, 1, m)
        s = SortedSample.from_values(np.concatenate([rng.normal(size=n - m), dirty]))
        cs = confidence_set(s, 0.05)
        hit += min(abs(c) for c in cs.candidates) <= 4
        cover += cs.contains(0.0)
    se = math.sqrt(0.05 * 0.95 / reps)
    assert hit / reps >= 0.95 - 3 * se
    assert cover / reps >= 0.95 - 3 * se
