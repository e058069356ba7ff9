import json
import math

import numpy as np
import pytest

from huberband.empirical import empirical_cdf
from huberband.errors import ConfigError, DomainError
from huberband.gaussian_arci import t_epsilon
from huberband.harness import (
    AdversaryRef,
    ContaminationSpec,
    ExperimentSpec,
    GaussianAt,
    MethodSpec,
    PointMass,
    apply_method,
    generate_contaminated,
    parse_q,
    replicate_seed,
    run_coverage_experiment,
    worker_count,
)
from huberband.normal import norm_cdf


def _experiment(method="arci", eps=0.0, q="point:10", n=2000, reps=50, seed=7, **method_kw):
    return ExperimentSpec(ContaminationSpec("gaussian", 0.0, eps, q), MethodSpec(method, **method_kw), n, reps,
                          0.05, seed)


def test_parse_q():
    assert parse_q("point:10") == PointMass(10.0)
    assert parse_q("gauss:5") == GaussianAt(5.0, 1.0)
    assert parse_q("normal:-1,2") == GaussianAt(-1.0, 2.0)
    ref = parse_q("adversary:laplace-exact:side=alt,eps_max=0.05")
    assert isinstance(ref, AdversaryRef) and ref.side == "alt"
    for bad in ("point", "gauss:a", "cauchy:1", "gauss:0,-1", "adversary:laplace-exact:side=up"):
        with pytest.raises(ConfigError):
            parse_q(bad)


def test_specs_validate():
    with pytest.raises((ConfigError, DomainError)):
        ContaminationSpec("gaussian", 0.0, 1.0, "point:1")
    with pytest.raises(ConfigError):
        MethodSpec("bogus")
    with pytest.raises(ConfigError):
        ExperimentSpec(ContaminationSpec("laplace", 0.0, 0.0, "point:1"), MethodSpec("arci"), 100, 1, 0.05, 0)
    with pytest.raises((ConfigError, DomainError)):
        _experiment(reps=0)


def test_clean_sample_when_eps_is_zero():
    spec = ContaminationSpec("gaussian", 2.0, 0.0, "point:1000", sigma=3.0)
    s = generate_contaminated(spec, 500, seed=1)
    assert s.values.max() < 100
    assert abs(np.median(s.values) - 2.0) < 0.5
    assert np.array_equal(s.values, generate_contaminated(spec, 500, seed=1).values)


def test_heavy_contamination_places_points_at_q():
    s = generate_contaminated(ContaminationSpec("gaussian", 0.0, 1 - 1e-9, "point:5"), 100, seed=0)
    assert np.count_nonzero(s.values == 5.0) >= 99


def test_mixture_cdf_within_dkw_band():
    n = 10 ** 5
    s = generate_contaminated(ContaminationSpec("gaussian", 0.0, 0.3, "gauss:4"), n, seed=11)
    x = s.values
    F = 0.7 * norm_cdf(x) + 0.3 * norm_cdf(x - 4.0)
    ks = max(np.max(np.arange(1, n + 1) / n - F), np.max(F - np.arange(0, n) / n))
    assert ks <= math.sqrt(math.log(2 / 0.01) / (2 * n))
    assert empirical_cdf(s, 4.0) == pytest.approx(0.7 * norm_cdf(4.0) + 0.15, abs=0.01)


def test_adversary_contamination_draws_from_q0():
    q = "adversary:gaussian-truncated"
    s = generate_contaminated(ContaminationSpec("gaussian", 0.0, 0.05, q), 2000, seed=3)
    assert s.n == 2000 and np.all(np.isfinite(s.values))


def test_replicate_seed_is_stable():
    assert replicate_seed(7, 0) == replicate_seed(7, 0)
    assert len({replicate_seed(7, i) for i in range(1000)}) == 1000
    assert replicate_seed(7, 3) != replicate_seed(8, 3)
    assert 0 <= replicate_seed(2 ** 63, 5) < 2 ** 64


def test_worker_count(monkeypatch):
    monkeypatch.setenv("HUBERBAND_THREADS", "3")
    assert worker_count() == 3 and worker_count(8) == 3 and worker_count(2) == 2
    monkeypatch.setenv("HUBERBAND_THREADS", "zero")
    with pytest.raises(ConfigError):
        worker_count()
    monkeypatch.delenv("HUBERBAND_THREADS")
    assert worker_count(1) == 1


def test_single_replicate_report_echoes_interval():
    rep = run_coverage_experiment(_experiment(reps=1), workers=1)
    d = rep.to_dict()
    assert rep.coverage in (0.0, 1.0)
    assert d["schema"] == 1 and len(d["interval"]) == 1
    assert d["spec"]["n"] == 2000


def test_report_is_identical_across_worker_counts():
    spec = _experiment(eps=0.02, reps=24)
    a = run_coverage_experiment(spec, workers=1).to_json()
    b = run_coverage_experiment(spec, workers=3).to_json()
    assert a == b
    assert json.loads(a)["coverage"] >= 0.0


def test_empty_intervals_count_as_misses():
    spec = ExperimentSpec(ContaminationSpec("gaussian", 0.0, 0.0, "point:0"),
                          MethodSpec("arci", mode="small:0.05"), 10 ** 4, 3, 0.05, 1)
    rep = run_coverage_experiment(spec, workers=1)
    assert rep.empty_fraction == 1.0 and rep.coverage == 0.0 and rep.length_mean == 0.0


def test_list_methods_report_hits():
    rep = run_coverage_experiment(_experiment("list", eps=0.6, q="gauss:50", n=3000, reps=5), workers=1)
    assert rep.list_hit_fraction == 1.0 and rep.coverage == 1.0


def test_arci_general_method():
    spec = ExperimentSpec(ContaminationSpec("gengauss:2", 0.0, 0.01, "point:20"),
                          MethodSpec("arci-general"), 5000, 3, 0.05, 2)
    assert run_coverage_experiment(spec, workers=1).coverage == 1.0


@pytest.mark.slow
def test_median_interval_with_true_eps_covers():
    rep = run_coverage_experiment(_experiment("median", eps=0.05, n=10 ** 4, reps=2000))
    assert rep.coverage >= 0.95 - 3 * math.sqrt(0.05 * 0.95 / 2000)


@pytest.mark.slow
def test_clean_arci_coverage_and_length():
    n = 2000
    rep = run_coverage_experiment(_experiment("arci", eps=0.0, n=n, reps=1000))
    assert rep.coverage >= 0.95 - 3 * math.sqrt(0.05 * 0.95 / 1000)
    bound = 4 / t_epsilon(0.0, n, 0.05)
    assert bound / 2 <= rep.length_median <= 2 * bound


@pytest.mark.slow
def test_baseline_ordering():
    n, reps, eps = 10 ** 4, 200, 0.01
    cont = ContaminationSpec("gaussian", 0.0, eps, "point:10")
    ordered = 0
    for i in range(reps):
        s = generate_contaminated(cont, n, replicate_seed(99, i))
        lens = []
        for name in ("median", "arci", "conservative"):
            spec = ExperimentSpec(cont, MethodSpec(name), n, 1, 0.05, 0)
            lens.append(apply_method(spec, s).length)
        ordered += lens[0] < lens[1] < lens[2]
    assert ordered / reps >= 0.9
