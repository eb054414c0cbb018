"""Estimator-style wrappers.

Each class follows the scikit-learn conventions: hyperparameters in
``__init__``, ``fit`` returns ``self``, learned quantities end in ``_``, and
``get_params``/``set_params``/``clone`` work unchanged.

    >>> est = CollapsedStrataVariance().fit(X, y, strata=h, sample_weight=1 / pi)
    >>> est.mean_, est.variance_, est.confidence_interval()
"""

from __future__ import annotations

import numpy as np
from scipy.stats import norm
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_stratified_sample
from .bayes import McmcConfig, Priors, fit_bayes
from .design import DrawnSample
from .estimators import (
    collapsed_variance,
    default_bandwidth,
    ht_mean,
    kernel_variance,
    kernel_weights,
    make_pseudo_strata,
    unbiased_variance,
)
from .spline import log_variance


class _StratifiedVarianceMixin:
    def fit(self, X, y, *, strata, sample_weight, population_size=None, stratum_sizes=None,
            design="srswor"):
        """Fit on unit-level arrays.

        Args:
            X: collapsing index per sampled unit, shape (n,) or (n, 1).
            y: response per sampled unit.
            strata: stratum label per sampled unit.
            sample_weight: design weight 1/pi per sampled unit.
            population_size: N; defaults to the sum of ``stratum_sizes``.
            stratum_sizes: N_h per stratum in sorted label order; defaults to the
                per-stratum sum of design weights.
            design: "srswor" or "pps_systematic".
        """
        sample = check_stratified_sample(X, y, strata, sample_weight, population_size,
                                         stratum_sizes, design)
        return self.fit_sample(sample)

    def fit_sample(self, sample: DrawnSample):
        self.n_strata_ = sample.H
        self.mean_ = ht_mean(sample)
        self.estimate_ = self._estimate(sample)
        self.variance_ = self.estimate_.value
        return self

    def confidence_interval(self, level: float = 0.95) -> tuple[float, float]:
        check_is_fitted(self, "variance_")
        z = norm.ppf(0.5 + level / 2)
        half = z * np.sqrt(self.variance_)
        return self.mean_ - half, self.mean_ + half


class CollapsedStrataVariance(_StratifiedVarianceMixin, BaseEstimator):
    """Pairs adjacent strata in the collapsing index and pools within pairs."""

    def _estimate(self, sample):
        pmap = make_pseudo_strata(sample.x)
        self.groups_ = pmap.groups
        return collapsed_variance(sample, pmap)


class KernelVariance(_StratifiedVarianceMixin, BaseEstimator):
    """Epanechnikov-weighted neighborhood estimator.

    Args:
        bandwidth: kernel bandwidth on the collapsing-index scale; ``None``
            uses 1.5 / H.
    """

    def __init__(self, bandwidth: float | None = None):
        self.bandwidth = bandwidth

    def _estimate(self, sample):
        b = self.bandwidth if self.bandwidth is not None else default_bandwidth(sample.H)
        kw = kernel_weights(sample.x, b)
        self.bandwidth_ = b
        self.C_d_ = kw.C_d
        return kernel_variance(sample, kw)


class UnbiasedVariance(_StratifiedVarianceMixin, BaseEstimator):
    """Design-unbiased srswor estimator; raises when any stratum has a single unit."""

    def _estimate(self, sample):
        return unbiased_variance(sample)


class BayesVariance(_StratifiedVarianceMixin, BaseEstimator):
    """P-spline mean-variance smoothing with a weighted pseudo-likelihood.

    Uses the single-PSU sampler when every stratum contributes one unit and
    the equicorrelated multi-PSU sampler otherwise. After fitting,
    ``predict`` and ``predict_variance`` return posterior means of the
    stratum mean and variance functions.
    """

    def __init__(self, degree=2, n_knots=7, S_beta=100.0, S_gamma=100.0, a_beta=1.0, b_beta=1.0,
                 a_gamma=1.0, b_gamma=1.0, iterations=4000, burn_in=1000, step_gamma=0.05,
                 step_rho=0.1, adapt=True, use_weights=True, random_state=None):
        self.degree = degree
        self.n_knots = n_knots
        self.S_beta = S_beta
        self.S_gamma = S_gamma
        self.a_beta = a_beta
        self.b_beta = b_beta
        self.a_gamma = a_gamma
        self.b_gamma = b_gamma
        self.iterations = iterations
        self.burn_in = burn_in
        self.step_gamma = step_gamma
        self.step_rho = step_rho
        self.adapt = adapt
        self.use_weights = use_weights
        self.random_state = random_state

    def _estimate(self, sample):
        priors = Priors(self.S_beta, self.S_gamma, self.a_beta, self.b_beta, self.a_gamma, self.b_gamma)
        cfg = McmcConfig(self.iterations, self.burn_in, self.step_gamma, self.step_rho, self.adapt,
                         seed=self.random_state)
        fit = fit_bayes(sample, self.degree, self.n_knots, priors, cfg, self.use_weights)
        self.basis_ = fit.basis
        self.draws_ = fit.draws
        self.posterior_interval_ = fit.estimate.diagnostics["interval"]
        self.acceptance_gamma_ = fit.draws.acceptance_gamma
        self.rho_ = float(fit.draws.rho.mean())
        return fit.estimate

    def predict(self, X):
        check_is_fitted(self, "draws_")
        Z = self.basis_.design_matrix(np.ravel(X))
        return Z @ self.draws_.beta.mean(axis=0)

    def predict_variance(self, X):
        check_is_fitted(self, "draws_")
        Z = self.basis_.design_matrix(np.ravel(X))
        return np.exp(log_variance(Z, self.draws_.gamma.T)).mean(axis=1)
