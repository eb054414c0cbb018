import numpy as np
import pytest
from dataclasses import replace

from finestrat.bayes import McmcConfig
from finestrat.design import SamplingPlan, draw_sample, replication_seed
from finestrat.exceptions import DataError, DegenerateBandwidthError
from finestrat.population import GaussianPopConfig
from finestrat.simulation import (
    ReplicationRecord,
    SimScenario,
    ci_hits,
    metric_ab,
    metric_cp,
    metric_rmse,
    run_replications,
    summarize,
    weight_ablation,
)

from conftest import make_population

FAST = McmcConfig(iterations=300, burn_in=100)


def test_single_replication_trace(tiny_pop):
    sc = SimScenario(population=GaussianPopConfig(H=2), plan=SamplingPlan("srswor", 1), methods=("collapsed",),
                     R=1, seed=42)
    res = run_replications(sc, population=tiny_pop)
    sample = draw_sample(tiny_pop, sc.plan, np.random.default_rng(replication_seed(42, 0, 0)))
    t = 2 * sample.y
    assert res.records[0].estimates["collapsed"] == pytest.approx((t[0] - t[1]) ** 2 / 16)
    assert res.truth_variance == pytest.approx(0.5)
    assert res.truth_mean == 4.0


def test_oracle_estimator_scores_zero():
    records = [ReplicationRecord(r, 1.0, {"oracle": 0.25}) for r in range(10)]
    s = summarize(records, ["oracle"], 0.25, 1.0)["oracle"]
    assert s.ab == 0 and s.rmse == 0 and s.mae == 0


def test_cp_examples():
    assert ci_hits([1.5], [0.0], 1.0)[0] == 0
    assert metric_cp([1.0, 9.0, -5.0], [1e12] * 3, 1.0) == 1.0
    with pytest.raises(DataError):
        metric_cp([1.0], [-0.1], 1.0)


def test_cp_nominal_coverage():
    rng = np.random.default_rng(0)
    R, V = 10_000, 0.3
    ht = 2.0 + rng.normal(0, np.sqrt(V), R)
    cp = metric_cp(ht, np.full(R, V), 2.0)
    assert abs(cp - 0.95) < 3 * np.sqrt(0.95 * 0.05 / R)


def test_rmse_dominates_ab():
    rng = np.random.default_rng(1)
    for _ in range(20):
        v = rng.gamma(2.0, 1.0, 50)
        assert metric_rmse(v, 1.7) >= metric_ab(v, 1.7)


def _small_scenario(**kw):
    base = dict(population=GaussianPopConfig(H=12, N_h=10, phi=2.0, seed=3), plan=SamplingPlan("srswor", 1),
                methods=("collapsed", "kernel", "bayes"), R=6, mcmc=FAST, seed=9)
    base.update(kw)
    return SimScenario(**base)


def test_determinism_and_thread_parity():
    sc = _small_scenario()
    a = run_replications(sc)
    b = run_replications(sc)
    c = run_replications(sc, threads=2)
    for res in (b, c):
        for ra, rb in zip(a.records, res.records):
            assert ra.replication == rb.replication
            assert ra.ht_mean == rb.ht_mean
            assert ra.estimates == rb.estimates
        assert res.summaries == a.summaries


def test_permutation_invariance():
    sc = _small_scenario(methods=("collapsed",), R=20)
    res = run_replications(sc)
    shuffled = list(reversed(res.records))
    assert summarize(shuffled, sc.methods, res.truth_variance, res.truth_mean) == res.summaries


def test_prefix_of_longer_run_is_identical():
    short = run_replications(_small_scenario(methods=("collapsed",), R=5))
    long = run_replications(_small_scenario(methods=("collapsed",), R=12))
    assert [r.estimates for r in short.records] == [r.estimates for r in long.records[:5]]


def test_ablation_equal_weights_coincide():
    weighted, ignored = weight_ablation(_small_scenario(R=3))
    for rw, ri in zip(weighted.records, ignored.records):
        assert rw.estimates["bayes"] == ri.estimates["bayes_ignore_weights"]
        assert rw.ht_mean == ri.ht_mean


def test_ablation_common_samples():
    from finestrat.population import HmtPopConfig

    sc = _small_scenario(population=HmtPopConfig(N=400, H=12, seed=1), plan=SamplingPlan("pps_systematic", 1),
                         methods=("collapsed",), R=4, bandwidth=0.3)
    weighted, ignored = weight_ablation(sc)
    assert [r.ht_mean for r in weighted.records] == [r.ht_mean for r in ignored.records]
    assert "bayes" in weighted.summaries and "bayes_ignore_weights" in ignored.summaries


def test_degenerate_bandwidth_aborts_scenario():
    sc = _small_scenario(methods=("kernel",), bandwidth=1e-4, R=2)
    with pytest.raises(DegenerateBandwidthError):
        run_replications(sc)
    with pytest.raises(DegenerateBandwidthError):
        # the kernel weights are built once per scenario, before any replication
        run_replications(replace(sc, strict=False))


def test_lenient_mode_counts_failures():
    sc = _small_scenario(methods=("collapsed", "unbiased"), R=3, strict=False)
    res = run_replications(sc)
    assert res.summaries["unbiased"].n_failed == 3
    assert res.summaries["collapsed"].n_failed == 0
    assert all("single unit" in r.failures["unbiased"] for r in res.records)


def test_scenario_validation():
    from finestrat.exceptions import ConfigError

    with pytest.raises(ConfigError):
        _small_scenario(R=0)
    with pytest.raises(ConfigError):
        _small_scenario(methods=())
    with pytest.raises(ConfigError):
        _small_scenario(methods=("magic",))
