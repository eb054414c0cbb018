"""Variance estimation for fine-stratification surveys."""

__version__ = "0.1.0"

from .bayes import McmcConfig, PosteriorDraws, Priors, PsuData, fit_bayes, run_mcmc_multi, run_mcmc_single
from .design import DrawnSample, SamplingPlan, draw_sample, normalized_weights, true_variance
from .estimators import (
    VarianceEstimate,
    collapsed_variance,
    ht_mean,
    kernel_variance,
    kernel_weights,
    make_pseudo_strata,
)
from .exceptions import ConfigError, DataError, FinestratError, NotEstimableError, NumericalError
from .population import FinitePopulation, GaussianPopConfig, HmtPopConfig, gaussian_population, hmt_population
from .simulation import SimScenario, run_replications, weight_ablation
from .spline import SplineBasis, make_basis
from .variance import BayesVariance, CollapsedStrataVariance, KernelVariance, UnbiasedVariance
