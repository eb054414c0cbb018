"""Repeated-sampling evaluation of variance estimators on a fixed finite population."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .bayes import McmcConfig, Priors, fit_bayes
from .design import SamplingPlan, draw_sample, replication_seed, true_variance
from .estimators import (
    METHODS,
    collapsed_variance,
    default_bandwidth,
    kernel_variance,
    kernel_weights,
    make_pseudo_strata,
    ht_mean,
    unbiased_variance,
)
from .exceptions import ConfigError, DataError, FinestratError
from .population import (
    FinitePopulation,
    GaussianPopConfig,
    HmtPopConfig,
    gaussian_population,
    hmt_population,
    population_mean,
)
from .spline import make_basis

Z95 = 1.96


@dataclass(frozen=True)
class SimScenario:
    population: GaussianPopConfig | HmtPopConfig = GaussianPopConfig()
    plan: SamplingPlan = SamplingPlan()
    methods: tuple[str, ...] = ("collapsed", "kernel", "bayes")
    R: int = 200
    mcmc: McmcConfig = McmcConfig()
    priors: Priors = Priors()
    bandwidth: float | None = None
    q: int = 2
    L: int = 7
    seed: int = 0
    truth: str = "auto"
    truth_draws: int = 100_000
    strict: bool = True
    name: str = "scenario"

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.R < 1:
            raise ConfigError("R must be >= 1")
        if not self.methods:
            raise ConfigError("at least one method is required")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ConfigError(f"unknown methods {sorted(unknown)}; choose from {METHODS}")


@dataclass
class ReplicationRecord:
    replication: int
    ht_mean: float
    estimates: dict[str, float]
    failures: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class MethodSummary:
    method: str
    ab: float
    mae: float
    rmse: float
    cp: float
    n_ok: int
    n_failed: int


@dataclass
class SimResult:
    scenario: SimScenario
    truth_variance: float
    truth_mean: float
    summaries: dict[str, MethodSummary]
    records: list[ReplicationRecord]
    runtime: float = 0.0

    def subset(self, methods: Sequence[str]) -> "SimResult":
        return SimResult(
            self.scenario,
            self.truth_variance,
            self.truth_mean,
            {m: self.summaries[m] for m in methods},
            self.records,
            self.runtime,
        )


def build_population(cfg) -> FinitePopulation:
    if isinstance(cfg, FinitePopulation):
        return cfg
    if isinstance(cfg, GaussianPopConfig):
        return gaussian_population(cfg)
    if isinstance(cfg, HmtPopConfig):
        return hmt_population(cfg)
    raise ConfigError(f"unsupported population config {type(cfg).__name__}")


def metric_ab(values, truth: float) -> float:
    return float(abs(np.mean(np.asarray(values) - truth)))


def metric_mae(values, truth: float) -> float:
    return float(np.mean(np.abs(np.asarray(values) - truth)))


def metric_rmse(values, truth: float) -> float:
    return float(math.sqrt(np.mean((np.asarray(values) - truth) ** 2)))


def ci_hits(ht_values, var_values, truth_mean: float, z: float = Z95) -> np.ndarray:
    ht = np.asarray(ht_values, dtype=float)
    var = np.asarray(var_values, dtype=float)
    if ht.shape != var.shape:
        raise DataError("ht and variance arrays differ in length")
    if np.any(var < 0):
        raise DataError("negative variance estimate")
    return np.abs(ht - truth_mean) <= z * np.sqrt(var)


def metric_cp(ht_values, var_values, truth_mean: float, z: float = Z95) -> float:
    return float(ci_hits(ht_values, var_values, truth_mean, z).mean())


class _Context:
    """Everything a replication needs; fixed across replications."""

    def __init__(self, sc: SimScenario, pop: FinitePopulation):
        self.sc = sc
        self.pop = pop
        methods = set(sc.methods)
        self.pmap = make_pseudo_strata(pop.x) if "collapsed" in methods else None
        self.kw = None
        if "kernel" in methods:
            b = sc.bandwidth if sc.bandwidth is not None else default_bandwidth(pop.H)
            self.kw = kernel_weights(pop.x, b)
        self.basis = None
        if methods & {"bayes", "bayes_ignore_weights"}:
            self.basis = make_basis(pop.x, sc.q, sc.L)

    def replicate(self, r: int) -> ReplicationRecord:
        sc = self.sc
        sample = draw_sample(self.pop, sc.plan, np.random.default_rng(replication_seed(sc.seed, r, 0)))
        mcmc = replace(sc.mcmc, seed=replication_seed(sc.seed, r, 1))
        rec = ReplicationRecord(r, ht_mean(sample), {})
        for method in sc.methods:
            try:
                if method == "collapsed":
                    est = collapsed_variance(sample, self.pmap)
                elif method == "kernel":
                    est = kernel_variance(sample, self.kw)
                elif method == "unbiased":
                    est = unbiased_variance(sample)
                else:
                    est = fit_bayes(sample, priors=sc.priors, cfg=mcmc, basis=self.basis,
                                    use_weights=method == "bayes").estimate
                rec.estimates[method] = est.value
            except FinestratError as exc:
                if sc.strict:
                    raise
                rec.estimates[method] = math.nan
                rec.failures[method] = f"{type(exc).__name__}: {exc}"
        return rec


_WORKER: _Context | None = None


def _init_worker(ctx: _Context) -> None:
    global _WORKER
    _WORKER = ctx


def _replicate_in_worker(r: int) -> ReplicationRecord:
    return _WORKER.replicate(r)


def summarize(records: Sequence[ReplicationRecord], methods, truth_variance, truth_mean) -> dict[str, MethodSummary]:
    records = sorted(records, key=lambda rec: rec.replication)
    ht = np.array([rec.ht_mean for rec in records])
    out = {}
    for m in methods:
        v = np.array([rec.estimates.get(m, math.nan) for rec in records])
        ok = np.isfinite(v)
        if not ok.any():
            out[m] = MethodSummary(m, math.nan, math.nan, math.nan, math.nan, 0, int((~ok).sum()))
            continue
        out[m] = MethodSummary(
            method=m,
            ab=metric_ab(v[ok], truth_variance),
            mae=metric_mae(v[ok], truth_variance),
            rmse=metric_rmse(v[ok], truth_variance),
            cp=metric_cp(ht[ok], v[ok], truth_mean),
            n_ok=int(ok.sum()),
            n_failed=int((~ok).sum()),
        )
    return out


def run_replications(sc: SimScenario, threads: int = 1, population: FinitePopulation | None = None,
                     truth_variance: float | None = None) -> SimResult:
    """Draw R samples from one fixed population and score every requested estimator."""
    start = time.perf_counter()
    pop = population if population is not None else build_population(sc.population)
    if truth_variance is None:
        truth_variance = true_variance(pop, sc.plan, sc.truth, sc.truth_draws,
                                       replication_seed(sc.seed, 0, 99))
    truth_mean = population_mean(pop)
    ctx = _Context(sc, pop)
    if threads > 1 and sc.R > 1:
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker, initargs=(ctx,)) as ex:
            records = list(ex.map(_replicate_in_worker, range(sc.R), chunksize=max(1, sc.R // (4 * threads))))
    else:
        records = [ctx.replicate(r) for r in range(sc.R)]
    summaries = summarize(records, sc.methods, truth_variance, truth_mean)
    return SimResult(sc, truth_variance, truth_mean, summaries, records, time.perf_counter() - start)


def weight_ablation(sc: SimScenario, threads: int = 1) -> tuple[SimResult, SimResult]:
    """Bayes with and without likelihood weights on identical sample draws and MCMC streams."""
    methods = tuple(m for m in sc.methods if m not in ("bayes", "bayes_ignore_weights"))
    sc = replace(sc, methods=methods + ("bayes", "bayes_ignore_weights"))
    res = run_replications(sc, threads)
    others = list(methods)
    return res.subset(others + ["bayes"]), res.subset(others + ["bayes_ignore_weights"])
