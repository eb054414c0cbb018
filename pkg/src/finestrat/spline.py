"""Truncated power basis shared by the mean and log-variance functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, DataError

LOG_VARIANCE_CLAMP = 50.0


@dataclass(frozen=True, eq=False)
class SplineBasis:
    """Basis (1, x, ..., x^q, (x - k_1)_+^q, ..., (x - k_L)_+^q)."""

    q: int
    knots: np.ndarray

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float).ravel()
        if self.q < 1:
            raise ConfigError("degree q must be >= 1")
        if knots.size > 1 and not np.all(np.diff(knots) > 0):
            raise ConfigError("knots must be strictly increasing")
        object.__setattr__(self, "knots", knots)

    @property
    def L(self) -> int:
        return self.knots.size

    @property
    def p(self) -> int:
        return self.q + 1 + self.L

    @property
    def n_fixed(self) -> int:
        """Number of unpenalized polynomial coefficients."""
        return self.q + 1

    def design_matrix(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        poly = x[:, None] ** np.arange(self.q + 1)
        trunc = np.maximum(x[:, None] - self.knots[None, :], 0.0) ** self.q
        return np.hstack([poly, trunc])

    def summary(self) -> dict:
        return {"q": self.q, "L": self.L, "knots": [float(k) for k in self.knots]}


def place_knots(x, L: int) -> np.ndarray:
    """Knots at the l/(L+1) sample quantiles of x, l = 1..L."""
    x = np.asarray(x, dtype=float)
    if L < 1:
        raise ConfigError("L must be >= 1")
    if np.unique(x).size < L + 2:
        raise DataError(f"need at least {L + 2} distinct x values for {L} knots")
    knots = np.quantile(x, np.arange(1, L + 1) / (L + 1))
    return np.unique(knots)


def make_basis(x, q: int = 2, L: int = 7) -> SplineBasis:
    return SplineBasis(q, place_knots(x, L))


def basis_eval(basis: SplineBasis, x: float) -> np.ndarray:
    return basis.design_matrix([x])[0]


def _check_dim(basis, coef):
    coef = np.asarray(coef, dtype=float)
    if coef.shape[-1] != basis.p:
        raise ConfigError(f"coefficient length {coef.shape[-1]} != basis dimension {basis.p}")
    return coef


def mean_at(basis: SplineBasis, beta, x):
    beta = _check_dim(basis, beta)
    out = basis.design_matrix(x) @ beta
    return out if np.ndim(x) else float(out[0])


def log_variance(Z: np.ndarray, gamma) -> np.ndarray:
    return np.clip(Z @ gamma, -LOG_VARIANCE_CLAMP, LOG_VARIANCE_CLAMP)


def variance_at(basis: SplineBasis, gamma, x):
    gamma = _check_dim(basis, gamma)
    out = np.exp(log_variance(basis.design_matrix(x), gamma))
    return out if np.ndim(x) else float(out[0])
