"""Design-based point and variance estimators for stratified samples.

All variance estimators here operate on the per-stratum HT totals
``yhat_h = sum_{j in u_h} y_hj / pi_hj``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .design import DrawnSample
from .exceptions import ConfigError, DegenerateBandwidthError, NotEstimableError
from .population import FinitePopulation

METHODS = ("collapsed", "kernel", "bayes", "bayes_ignore_weights", "unbiased")


@dataclass
class VarianceEstimate:
    method: str
    value: float
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def interval(self, center: float, z: float = 1.959963984540054) -> tuple[float, float]:
        half = z * np.sqrt(self.value)
        return center - half, center + half


def ht_totals(sample: DrawnSample) -> np.ndarray:
    return np.bincount(sample.index, weights=sample.y / sample.pi, minlength=sample.H)


def ht_mean(sample: DrawnSample) -> float:
    return float(ht_totals(sample).sum() / sample.N)


def unbiased_variance(sample: DrawnSample) -> VarianceEstimate:
    """Textbook stratified srswor variance; needs two or more units per stratum."""
    if sample.design != "srswor":
        raise NotEstimableError("unbiased variance is implemented for srswor only")
    n = sample.n_h
    if np.any(n < 2):
        bad = (np.flatnonzero(n < 2) + 1).tolist()
        raise NotEstimableError(
            f"not estimable under fine stratification: strata {bad[:10]} have a single unit"
        )
    idx = sample.index
    mean = np.bincount(idx, weights=sample.y, minlength=sample.H) / n
    ss = np.bincount(idx, weights=(sample.y - mean[idx]) ** 2, minlength=sample.H)
    s2 = ss / (n - 1)
    N_h = sample.N_h
    value = np.sum(N_h**2 * (1 - n / N_h) * s2 / n) / sample.N**2
    return VarianceEstimate("unbiased", float(value))


@dataclass(frozen=True)
class PseudoStrataMap:
    """Partition of stratum ids (1-based) into collapsed groups."""

    groups: tuple[tuple[int, ...], ...]

    @property
    def H(self) -> int:
        return sum(len(g) for g in self.groups)

    def indicator(self) -> np.ndarray:
        """c[h, l] = 1 when h != l share a group."""
        c = np.zeros((self.H, self.H))
        for g in self.groups:
            ix = np.asarray(g) - 1
            c[np.ix_(ix, ix)] = 1.0
        np.fill_diagonal(c, 0.0)
        return c

    def partner_weights(self) -> np.ndarray:
        """Row h averages the other members of h's group."""
        c = self.indicator()
        return c / c.sum(axis=1, keepdims=True)

    def scale(self) -> np.ndarray:
        """Per-stratum factor (g - 1)/g; 1/2 for pairs."""
        out = np.empty(self.H)
        for g in self.groups:
            out[np.asarray(g) - 1] = (len(g) - 1) / len(g)
        return out


def make_pseudo_strata(x: Sequence[float], ids: Sequence[int] | None = None) -> PseudoStrataMap:
    """Pair strata that are adjacent in x; with odd H the three largest-x strata form one group."""
    x = np.asarray(x, dtype=float)
    H = x.size
    if H < 2:
        raise ConfigError("collapsing needs at least two strata")
    ids = np.arange(1, H + 1) if ids is None else np.asarray(ids, dtype=int)
    order = ids[np.lexsort((ids, x))]
    cut = H - 3 if H % 2 else H
    groups = [tuple(sorted(order[i : i + 2].tolist())) for i in range(0, cut, 2)]
    if H % 2:
        groups.append(tuple(sorted(order[cut:].tolist())))
    return PseudoStrataMap(tuple(groups))


def _collapsed_sum(values: np.ndarray, pmap: PseudoStrataMap) -> float:
    dev = values - pmap.partner_weights() @ values
    return float(np.sum(pmap.scale() * dev**2))


def collapsed_variance(sample: DrawnSample, pmap: PseudoStrataMap) -> VarianceEstimate:
    if pmap.H != sample.H:
        raise ConfigError(f"pseudo-strata cover {pmap.H} strata, sample has {sample.H}")
    value = _collapsed_sum(ht_totals(sample), pmap) / sample.N**2
    return VarianceEstimate("collapsed", value, {"groups": len(pmap.groups)})


def collapsed_bias_exact(pop: FinitePopulation, pmap: PseudoStrataMap) -> float:
    """Design bias of the collapsed estimator from the population stratum totals."""
    return _collapsed_sum(pop.totals, pmap) / pop.N**2


def epanechnikov(u):
    u = np.asarray(u, dtype=float)
    return np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u**2), 0.0)


@dataclass(frozen=True, eq=False)
class KernelWeights:
    d: np.ndarray
    bandwidth: float
    C_d: float


def kernel_weights(x: Sequence[float], b: float) -> KernelWeights:
    """Row-normalized Epanechnikov weights d[h, l] and the constant C_d."""
    if not b > 0:
        raise ConfigError(f"bandwidth must be positive, got {b}")
    x = np.asarray(x, dtype=float)
    K = epanechnikov((x[:, None] - x[None, :]) / b)
    d = K / K.sum(axis=1, keepdims=True)
    C_d = float(np.mean(1.0 - 2.0 * np.diag(d) + np.sum(d**2, axis=1)))
    if C_d <= 1e-12:
        raise DegenerateBandwidthError(
            f"C_d = {C_d:.3g} at bandwidth {b}: every stratum only weights itself; increase b"
        )
    return KernelWeights(d, float(b), C_d)


def default_bandwidth(H: int) -> float:
    """Midpoint of the recommended interval (1/H, 2/H)."""
    if H < 2:
        raise ConfigError("H must be >= 2")
    return 1.5 / H


def kernel_variance(sample: DrawnSample, kw: KernelWeights) -> VarianceEstimate:
    if kw.d.shape[0] != sample.H:
        raise ConfigError("kernel weights do not match the number of strata")
    if kw.C_d <= 1e-12:
        raise DegenerateBandwidthError(f"C_d = {kw.C_d:.3g}")
    t = ht_totals(sample)
    dev = t - kw.d @ t
    value = float(np.sum(dev**2) / kw.C_d / sample.N**2)
    return VarianceEstimate("kernel", value, {"C_d": kw.C_d, "bandwidth": kw.bandwidth})
