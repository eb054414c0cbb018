"""Mean-variance smoothing under a weighted pseudo-likelihood.

Stratum means and log-variances are P-splines in the collapsing index.
Each stratum's likelihood contribution is raised to its normalized sampling
weight. Posterior draws come from Metropolis-within-Gibbs: inverse-gamma
updates for the two smoothing variances, a Gaussian update for the mean
coefficients, and random-walk Metropolis for the log-variance coefficients
(and for the within-stratum correlation when strata hold several PSUs).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .design import DrawnSample, normalized_weights
from .estimators import VarianceEstimate
from .exceptions import ConfigError, DataError, NumericalError
from .spline import SplineBasis, log_variance, make_basis

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Priors:
    """N(0, S) on polynomial coefficients, IG(a, b) on the smoothing variances."""

    S_beta: float = 100.0
    S_gamma: float = 100.0
    a_beta: float = 1.0
    b_beta: float = 1.0
    a_gamma: float = 1.0
    b_gamma: float = 1.0

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ConfigError(f"prior hyperparameter {name} must be > 0, got {value}")


@dataclass
class ThetaState:
    beta: np.ndarray
    gamma: np.ndarray
    tau2_beta: float = 1.0
    tau2_gamma: float = 1.0
    rho: float = 0.0


@dataclass(frozen=True)
class McmcConfig:
    iterations: int = 4000
    burn_in: int = 1000
    step_gamma: float = 0.05
    step_rho: float = 0.1
    adapt: bool = True
    target_accept: float = 0.3
    seed: Any = 0

    def __post_init__(self):
        if not 0 <= self.burn_in < self.iterations:
            raise ConfigError(f"need 0 <= burn_in < iterations, got {self.burn_in}, {self.iterations}")
        if not (self.step_gamma > 0 and self.step_rho > 0):
            raise ConfigError("random-walk step sizes must be positive")
        if not 0 < self.target_accept < 1:
            raise ConfigError("target_accept must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class PosteriorDraws:
    """Retained (post burn-in) draws and per-iteration acceptance flags."""

    beta: np.ndarray
    gamma: np.ndarray
    tau2_beta: np.ndarray
    tau2_gamma: np.ndarray
    rho: np.ndarray
    accepted_gamma: np.ndarray
    accepted_rho: np.ndarray | None
    step_gamma: float
    step_rho: float | None
    burn_in: int

    def __len__(self) -> int:
        return self.beta.shape[0]

    @property
    def acceptance_gamma(self) -> float:
        return float(self.accepted_gamma.mean())

    @property
    def acceptance_rho(self) -> float | None:
        if self.accepted_rho is None:
            return None
        return float(self.accepted_rho.mean())

    def to_frame(self):
        import pandas as pd

        cols: dict[str, Any] = {"iteration": self.burn_in + np.arange(len(self))}
        for k in range(self.beta.shape[1]):
            cols[f"beta_{k}"] = self.beta[:, k]
        for k in range(self.gamma.shape[1]):
            cols[f"gamma_{k}"] = self.gamma[:, k]
        cols["tau2_beta"] = self.tau2_beta
        cols["tau2_gamma"] = self.tau2_gamma
        cols["rho"] = self.rho
        cols["accept_gamma"] = self.accepted_gamma.astype(int)
        cols["accept_rho"] = (
            np.zeros(len(self), dtype=int) if self.accepted_rho is None else self.accepted_rho.astype(int)
        )
        return pd.DataFrame(cols)


# -- equicorrelation algebra ------------------------------------------------


def rho_bounds(n_max: int) -> tuple[float, float]:
    """Open interval of rho keeping every R_h(rho) with n_h <= n_max positive definite."""
    lo = -1.0 / (n_max - 1) if n_max >= 2 else -1.0
    return lo, 1.0


def _check_pd(n, rho):
    n_max = int(np.max(n))
    lo, hi = rho_bounds(n_max)
    if not lo < rho < hi:
        raise ConfigError(f"rho={rho} outside the positive-definite range ({lo:.4g}, {hi}) for n={n_max}")


def equicorr_coefficients(n, rho):
    """Eigenvalue factors (c1, c2) of R(rho)^(-1/2) along 1 and its orthogonal complement."""
    n = np.asarray(n, dtype=float)
    c1 = (1.0 + (n - 1.0) * rho) ** -0.5
    c2 = np.full_like(n, (1.0 - rho) ** -0.5)
    return c1, c2


def equicorr_matrix(n: int, rho: float) -> np.ndarray:
    R = np.full((n, n), float(rho))
    np.fill_diagonal(R, 1.0)
    return R


def equicorr_inv_sqrt(n: int, rho: float) -> np.ndarray:
    _check_pd(n, rho)
    c1, c2 = equicorr_coefficients(n, rho)
    J = np.full((n, n), 1.0 / n)
    return float(c1) * J + float(c2) * (np.eye(n) - J)


def equicorr_logdet(n, rho):
    _check_pd(n, rho)
    n = np.asarray(n, dtype=float)
    out = (n - 1.0) * math.log1p(-rho) + np.log1p((n - 1.0) * rho)
    return float(out) if out.ndim == 0 else out


def decorrelate(y_h, m: float, rho: float) -> np.ndarray:
    """R(rho)^(-1/2) (y_h - m 1)."""
    r = np.asarray(y_h, dtype=float) - m
    _check_pd(r.size, rho)
    c1, c2 = equicorr_coefficients(r.size, rho)
    return float(c2) * r + float(c1 - c2) * r.mean()


# -- data containers --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PsuData:
    """Unit-level responses grouped by stratum, with normalized weights."""

    y: np.ndarray
    index: np.ndarray
    x: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        object.__setattr__(self, "index", np.asarray(self.index, dtype=int))
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        if not (self.y.size == self.index.size == self.weights.size):
            raise DataError("y, index and weights must have equal length")
        if np.any(np.bincount(self.index, minlength=self.x.size) == 0):
            raise DataError("every stratum needs at least one PSU")

    @property
    def H(self) -> int:
        return self.x.size

    @property
    def n_h(self) -> np.ndarray:
        return np.bincount(self.index, minlength=self.H)

    @classmethod
    def from_sample(cls, sample: DrawnSample, use_weights: bool = True) -> "PsuData":
        w = normalized_weights(sample) if use_weights else np.ones(sample.y.size)
        return cls(sample.y, sample.index, sample.x, w)


def _single_arrays(sample: DrawnSample, use_weights: bool):
    if np.any(sample.n_h != 1):
        raise DataError("the single-PSU model needs exactly one sampled unit per stratum")
    order = np.argsort(sample.index, kind="stable")
    w = normalized_weights(sample) if use_weights else np.ones(sample.y.size)
    return sample.y[order], sample.x, w[order]


# -- likelihoods ------------------------------------------------------------


def _log_normal(r2, ls):
    return -0.5 * (LOG_2PI + ls) - 0.5 * r2 * np.exp(-ls)


def log_pseudo_likelihood_single(y, x, weights, basis: SplineBasis, beta, gamma) -> float:
    """sum_h w_h log N(y_h; m(x_h), s2(x_h))."""
    Z = basis.design_matrix(x)
    m = Z @ np.asarray(beta, dtype=float)
    ls = log_variance(Z, np.asarray(gamma, dtype=float))
    r = np.asarray(y, dtype=float) - m
    return float(np.sum(np.asarray(weights) * _log_normal(r**2, ls)))


def _decorrelate_all(y, index, n_h, m_h, rho):
    r = y - m_h[index]
    rbar = np.bincount(index, weights=r, minlength=n_h.size) / n_h
    c1, c2 = equicorr_coefficients(n_h, rho)
    return c2[index] * r + (c1 - c2)[index] * rbar[index]


def log_power_likelihood_multi(data: PsuData, basis: SplineBasis, beta, gamma, rho: float) -> float:
    """sum_h [ -1/2 log|R_h| + sum_j w_hj log N(z_hj; 0, s2(x_h)) ] with z_h = R_h^(-1/2) r_h."""
    n_h = data.n_h
    _check_pd(n_h, rho)
    Z = basis.design_matrix(data.x)
    m = Z @ np.asarray(beta, dtype=float)
    ls = log_variance(Z, np.asarray(gamma, dtype=float))
    z = _decorrelate_all(data.y, data.index, n_h, m, rho)
    per_unit = data.weights * _log_normal(z**2, ls[data.index])
    return float(per_unit.sum() - 0.5 * np.sum(equicorr_logdet(n_h, rho)))


# -- conditional updates ----------------------------------------------------


def gibbs_tau2(tail_coefs, a: float, b: float, rng) -> float:
    """Draw from IG(a + L/2, b + sum(c^2)/2)."""
    tail = np.asarray(tail_coefs, dtype=float)
    shape = a + tail.size / 2.0
    scale = b + 0.5 * float(tail @ tail)
    return scale / rng.gamma(shape)


def _prior_precision(basis: SplineBasis, S: float, tau2: float) -> np.ndarray:
    return np.concatenate([np.full(basis.n_fixed, 1.0 / S), np.full(basis.L, 1.0 / tau2)])


def _cholesky(A: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        pass
    jitter = 1e-8 * np.trace(A) / A.shape[0]
    try:
        return np.linalg.cholesky(A + jitter * np.eye(A.shape[0]))
    except np.linalg.LinAlgError:
        cond = np.linalg.cond(A)
        raise NumericalError(
            f"beta precision matrix is not positive definite (condition number {cond:.3g})"
        ) from None


def _beta_system(Z, prec_w, lin_w, prior_prec):
    A = (Z.T * prec_w) @ Z
    A[np.diag_indices_from(A)] += prior_prec
    return A, Z.T @ lin_w


def _draw_from_precision(A, B, rng):
    L = _cholesky(A)
    mean = cho_solve((L, True), B)
    return mean + solve_triangular(L, rng.standard_normal(B.size), lower=True, trans="T")


def _single_terms(y, w, s2):
    return w / s2, w * y / s2


def _multi_terms(data: PsuData, n_h, s2, rho):
    c1, c2 = equicorr_coefficients(n_h, rho)
    idx = data.index
    ybar = np.bincount(idx, weights=data.y, minlength=n_h.size) / n_h
    u = c2[idx] * data.y + (c1 - c2)[idx] * ybar[idx]
    W = np.bincount(idx, weights=data.weights, minlength=n_h.size)
    S = np.bincount(idx, weights=data.weights * u, minlength=n_h.size)
    return c1**2 * W / s2, c1 * S / s2


def beta_conditional_single(y, x, weights, basis, gamma, tau2_beta, priors: Priors):
    """Mean and covariance of beta | rest for one PSU per stratum."""
    Z = basis.design_matrix(x)
    s2 = np.exp(log_variance(Z, np.asarray(gamma, dtype=float)))
    prec_w, lin_w = _single_terms(np.asarray(y, float), np.asarray(weights, float), s2)
    A, B = _beta_system(Z, prec_w, lin_w, _prior_precision(basis, priors.S_beta, tau2_beta))
    cov = np.linalg.inv(A)
    return cov @ B, cov


def beta_conditional_multi(data: PsuData, basis, gamma, rho, tau2_beta, priors: Priors):
    """Mean and covariance of beta | rest; reduces to the single-PSU form when n_h = 1."""
    n_h = data.n_h
    _check_pd(n_h, rho)
    Z = basis.design_matrix(data.x)
    s2 = np.exp(log_variance(Z, np.asarray(gamma, dtype=float)))
    prec_w, lin_w = _multi_terms(data, n_h, s2, rho)
    A, B = _beta_system(Z, prec_w, lin_w, _prior_precision(basis, priors.S_beta, tau2_beta))
    cov = np.linalg.inv(A)
    return cov @ B, cov


def gibbs_beta_single(y, x, weights, basis, gamma, tau2_beta, priors: Priors, rng) -> np.ndarray:
    Z = basis.design_matrix(x)
    s2 = np.exp(log_variance(Z, np.asarray(gamma, dtype=float)))
    prec_w, lin_w = _single_terms(np.asarray(y, float), np.asarray(weights, float), s2)
    A, B = _beta_system(Z, prec_w, lin_w, _prior_precision(basis, priors.S_beta, tau2_beta))
    return _draw_from_precision(A, B, rng)


def gibbs_beta_multi(data: PsuData, basis, gamma, rho, tau2_beta, priors: Priors, rng) -> np.ndarray:
    n_h = data.n_h
    _check_pd(n_h, rho)
    Z = basis.design_matrix(data.x)
    s2 = np.exp(log_variance(Z, np.asarray(gamma, dtype=float)))
    prec_w, lin_w = _multi_terms(data, n_h, s2, rho)
    A, B = _beta_system(Z, prec_w, lin_w, _prior_precision(basis, priors.S_beta, tau2_beta))
    return _draw_from_precision(A, B, rng)


def rw_metropolis_step(current, log_target: Callable, logp_current: float, step: float, rng):
    """One random-walk Metropolis update; returns (state, log density, accepted)."""
    current = np.asarray(current, dtype=float)
    proposal = current + step * rng.standard_normal(current.shape)
    logp_prop = log_target(proposal)
    accepted = bool(math.log(rng.random()) < logp_prop - logp_current)
    if accepted:
        return proposal, logp_prop, True
    return current, logp_current, False


def _gamma_log_prior(gamma, basis, priors, tau2_gamma):
    k = basis.n_fixed
    return -0.5 * float(gamma[:k] @ gamma[:k]) / priors.S_gamma - 0.5 * float(gamma[k:] @ gamma[k:]) / tau2_gamma


def mh_gamma_single(y, x, weights, basis, state: ThetaState, priors: Priors, step: float, rng):
    """RW Metropolis update of the log-variance coefficients; returns (gamma, accepted)."""
    Z = basis.design_matrix(x)
    r2 = (np.asarray(y, float) - Z @ state.beta) ** 2
    w = np.asarray(weights, float)

    def target(g):
        return float(w @ _log_normal(r2, log_variance(Z, g))) + _gamma_log_prior(g, basis, priors, state.tau2_gamma)

    g, _, acc = rw_metropolis_step(state.gamma, target, target(state.gamma), step, rng)
    return g, acc


def mh_rho(data: PsuData, basis, state: ThetaState, priors: Priors, step: float, rng):
    """RW Metropolis update of rho under a uniform prior on the PD range; returns (rho, accepted)."""
    lo, hi = rho_bounds(int(data.n_h.max()))

    def target(r):
        r = float(r)
        if not lo < r < hi:
            return -math.inf
        return log_power_likelihood_multi(data, basis, state.beta, state.gamma, r)

    r, _, acc = rw_metropolis_step(state.rho, target, target(state.rho), step, rng)
    return float(r), acc


# -- samplers ---------------------------------------------------------------


class _SingleModel:
    def __init__(self, y, x, weights, basis):
        self.y = np.asarray(y, float)
        self.w = np.asarray(weights, float)
        self.Z = basis.design_matrix(x)
        self.Zrows = self.Z
        self.yrows = self.y
        self.wrows = self.w
        self.has_rho = False

    def beta_terms(self, s2, rho):
        return _single_terms(self.y, self.w, s2)

    def quad_stats(self, m, rho):
        return self.w, self.w * (self.y - m) ** 2, 0.0


class _MultiModel:
    def __init__(self, data: PsuData, basis):
        self.data = data
        self.n_h = data.n_h
        self.Z = basis.design_matrix(data.x)
        self.Zrows = self.Z[data.index]
        self.yrows = data.y
        self.wrows = data.weights
        self.W = np.bincount(data.index, weights=data.weights, minlength=data.H)
        self.has_rho = bool(self.n_h.max() >= 2)
        self.bounds = rho_bounds(int(self.n_h.max()))

    def beta_terms(self, s2, rho):
        return _multi_terms(self.data, self.n_h, s2, rho)

    def quad_stats(self, m, rho):
        d = self.data
        z = _decorrelate_all(d.y, d.index, self.n_h, m, rho)
        Q = np.bincount(d.index, weights=d.weights * z**2, minlength=d.H)
        logdet = float(np.sum(equicorr_logdet(self.n_h, rho))) if rho != 0.0 else 0.0
        return self.W, Q, logdet


def _loglik(W, Q, logdet, ls):
    return float(np.sum(-0.5 * W * (LOG_2PI + ls) - 0.5 * Q * np.exp(-ls))) - 0.5 * logdet


def initial_state(model, basis: SplineBasis, priors: Priors) -> ThetaState:
    """Ridge-stabilized weighted least squares for beta; gamma intercept at the log residual variance."""
    Zr, yr, wr = model.Zrows, model.yrows, model.wrows
    A, B = _beta_system(Zr, wr, wr * yr, _prior_precision(basis, priors.S_beta, 1.0))
    beta = np.linalg.solve(A, B)
    resid = yr - Zr @ beta
    v = float(np.sum(wr * resid**2) / np.sum(wr))
    gamma = np.zeros(basis.p)
    gamma[0] = math.log(max(v, 1e-12))
    return ThetaState(beta=beta, gamma=gamma, tau2_beta=1.0, tau2_gamma=1.0, rho=0.0)


def _adapt(log_step, accepted, target, t):
    return log_step + (float(accepted) - target) / (t + 1.0) ** 0.6


def _run_chain(model, basis: SplineBasis, priors: Priors, cfg: McmcConfig, sample_rho: bool) -> PosteriorDraws:
    rng = np.random.default_rng(cfg.seed)
    state = initial_state(model, basis, priors)
    Z, k, p = model.Z, basis.n_fixed, basis.p
    keep = cfg.iterations - cfg.burn_in
    out_beta = np.empty((keep, p))
    out_gamma = np.empty((keep, p))
    out_tb = np.empty(keep)
    out_tg = np.empty(keep)
    out_rho = np.empty(keep)
    acc_g = np.zeros(keep, dtype=bool)
    acc_r = np.zeros(keep, dtype=bool) if sample_rho else None
    log_sg = math.log(cfg.step_gamma)
    log_sr = math.log(cfg.step_rho)
    lo, hi = getattr(model, "bounds", (-1.0, 1.0))

    for it in range(cfg.iterations):
        state.tau2_beta = gibbs_tau2(state.beta[k:], priors.a_beta, priors.b_beta, rng)
        state.tau2_gamma = gibbs_tau2(state.gamma[k:], priors.a_gamma, priors.b_gamma, rng)

        ls = log_variance(Z, state.gamma)
        prec_w, lin_w = model.beta_terms(np.exp(ls), state.rho)
        A, B = _beta_system(Z, prec_w, lin_w, _prior_precision(basis, priors.S_beta, state.tau2_beta))
        state.beta = _draw_from_precision(A, B, rng)

        m = Z @ state.beta
        W, Q, logdet = model.quad_stats(m, state.rho)

        def target_gamma(g):
            return _loglik(W, Q, logdet, log_variance(Z, g)) + _gamma_log_prior(g, basis, priors, state.tau2_gamma)

        state.gamma, _, ag = rw_metropolis_step(
            state.gamma, target_gamma, target_gamma(state.gamma), math.exp(log_sg), rng
        )

        ar = False
        if sample_rho:
            ls = log_variance(Z, state.gamma)

            def target_rho(r):
                r = float(r)
                if not lo < r < hi:
                    return -math.inf
                W_, Q_, ld_ = model.quad_stats(m, r)
                return _loglik(W_, Q_, ld_, ls)

            rho, _, ar = rw_metropolis_step(state.rho, target_rho, target_rho(state.rho), math.exp(log_sr), rng)
            state.rho = float(rho)

        if it < cfg.burn_in:
            if cfg.adapt:
                log_sg = _adapt(log_sg, ag, cfg.target_accept, it)
                if sample_rho:
                    log_sr = _adapt(log_sr, ar, cfg.target_accept, it)
            continue
        i = it - cfg.burn_in
        out_beta[i] = state.beta
        out_gamma[i] = state.gamma
        out_tb[i] = state.tau2_beta
        out_tg[i] = state.tau2_gamma
        out_rho[i] = state.rho
        acc_g[i] = ag
        if sample_rho:
            acc_r[i] = ar

    return PosteriorDraws(
        beta=out_beta,
        gamma=out_gamma,
        tau2_beta=out_tb,
        tau2_gamma=out_tg,
        rho=out_rho,
        accepted_gamma=acc_g,
        accepted_rho=acc_r,
        step_gamma=math.exp(log_sg),
        step_rho=math.exp(log_sr) if sample_rho else None,
        burn_in=cfg.burn_in,
    )


def run_mcmc_single(y, x, weights, basis: SplineBasis, priors: Priors = Priors(),
                    cfg: McmcConfig = McmcConfig()) -> PosteriorDraws:
    """Sampler for one PSU per stratum; ``y``, ``x``, ``weights`` are per-stratum arrays."""
    return _run_chain(_SingleModel(y, x, weights, basis), basis, priors, cfg, sample_rho=False)


def run_mcmc_multi(data: PsuData, basis: SplineBasis, priors: Priors = Priors(),
                   cfg: McmcConfig = McmcConfig(), fix_rho: bool = False) -> PosteriorDraws:
    """Sampler for one or more PSUs per stratum with equicorrelated PSUs.

    rho stays at 0 when ``fix_rho`` is set or when no stratum has two PSUs.
    """
    model = _MultiModel(data, basis)
    if not model.has_rho and not fix_rho:
        warnings.warn("no stratum has two PSUs; rho is not identified and is fixed at 0", stacklevel=2)
    return _run_chain(model, basis, priors, cfg, sample_rho=model.has_rho and not fix_rho)


# -- variance functionals ---------------------------------------------------


def _summarize(method, per_draw, s2_hat, draws: PosteriorDraws):
    lo, hi = np.quantile(per_draw, [0.025, 0.975])
    diag = {
        "s2_hat": s2_hat,
        "interval": (float(lo), float(hi)),
        "acceptance_gamma": draws.acceptance_gamma,
        "mean_rho": float(draws.rho.mean()),
    }
    if draws.acceptance_rho is not None:
        diag["acceptance_rho"] = draws.acceptance_rho
    return VarianceEstimate(method, float(per_draw.mean()), diag)


def var_bayes_single(draws: PosteriorDraws, basis: SplineBasis, sample: DrawnSample,
                     method: str = "bayes") -> VarianceEstimate:
    """N^-2 sum_h w_h^2 E[s2(x_h)] with w_h = 1/pi_h and the expectation over retained draws."""
    if len(draws) == 0:
        raise DataError("no posterior draws")
    if np.any(sample.n_h != 1):
        raise DataError("var_bayes_single needs one unit per stratum")
    order = np.argsort(sample.index, kind="stable")
    w2 = (1.0 / sample.pi[order]) ** 2
    s2 = np.exp(log_variance(basis.design_matrix(sample.x), draws.gamma.T)).T
    per_draw = s2 @ w2 / sample.N**2
    return _summarize(method, per_draw, s2.mean(axis=0), draws)


def var_bayes_multi(draws: PosteriorDraws, basis: SplineBasis, sample: DrawnSample,
                    method: str = "bayes") -> VarianceEstimate:
    """N^-2 sum_h w_h' E[s2(x_h) R_h(rho)] w_h with w_hj = 1/pi_hj."""
    if len(draws) == 0:
        raise DataError("no posterior draws")
    w = 1.0 / sample.pi
    sw = np.bincount(sample.index, weights=w, minlength=sample.H)
    sw2 = np.bincount(sample.index, weights=w**2, minlength=sample.H)
    s2 = np.exp(log_variance(basis.design_matrix(sample.x), draws.gamma.T)).T
    rho = draws.rho[:, None]
    quad = (1.0 - rho) * sw2[None, :] + rho * sw[None, :] ** 2
    per_draw = np.sum(s2 * quad, axis=1) / sample.N**2
    return _summarize(method, per_draw, s2.mean(axis=0), draws)


@dataclass
class BayesFit:
    draws: PosteriorDraws
    basis: SplineBasis
    estimate: VarianceEstimate
    multi: bool


def fit_bayes(sample: DrawnSample, q: int = 2, L: int = 7, priors: Priors = Priors(),
              cfg: McmcConfig = McmcConfig(), use_weights: bool = True,
              basis: SplineBasis | None = None) -> BayesFit:
    """Run the appropriate sampler for ``sample`` and return draws plus the variance estimate."""
    basis = basis if basis is not None else make_basis(sample.x, q, L)
    method = "bayes" if use_weights else "bayes_ignore_weights"
    if np.all(sample.n_h == 1):
        y, x, w = _single_arrays(sample, use_weights)
        draws = run_mcmc_single(y, x, w, basis, priors, cfg)
        return BayesFit(draws, basis, var_bayes_single(draws, basis, sample, method), False)
    data = PsuData.from_sample(sample, use_weights)
    draws = run_mcmc_multi(data, basis, priors, cfg)
    return BayesFit(draws, basis, var_bayes_multi(draws, basis, sample, method), True)
