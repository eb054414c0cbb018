"""Stratified sampling designs and design-variance oracles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .exceptions import ConfigError, DataError
from .population import FinitePopulation

DesignKind = Literal["srswor", "pps_systematic"]
DESIGNS = ("srswor", "pps_systematic")


def replication_seed(base_seed: int, replication: int, stream: int = 0) -> np.random.SeedSequence:
    """Counter-derived substream for one replication.

    SeedSequence hashes (entropy, spawn_key) so streams do not depend on the
    order in which replications are run.
    """
    return np.random.SeedSequence(int(base_seed), spawn_key=(int(replication), int(stream)))


@dataclass(frozen=True)
class SamplingPlan:
    kind: DesignKind = "srswor"
    n_h: int | tuple[int, ...] = 1

    def __post_init__(self):
        if self.kind not in DESIGNS:
            raise ConfigError(f"unknown design {self.kind!r}; expected one of {DESIGNS}")
        if not isinstance(self.n_h, (int, np.integer)):
            object.__setattr__(self, "n_h", tuple(int(v) for v in self.n_h))

    def sizes_for(self, pop: FinitePopulation) -> np.ndarray:
        if isinstance(self.n_h, tuple):
            if len(self.n_h) != pop.H:
                raise ConfigError(f"plan lists {len(self.n_h)} stratum sizes for H={pop.H}")
            n = np.array(self.n_h, dtype=int)
        else:
            n = np.full(pop.H, int(self.n_h))
        N_h = pop.stratum_sizes
        bad = np.flatnonzero((n < 1) | (n > N_h))
        if bad.size:
            h = bad[0]
            raise ConfigError(f"stratum {h + 1}: n_h={n[h]} outside [1, N_h={N_h[h]}]")
        return n


@dataclass(frozen=True, eq=False)
class DrawnSample:
    """A stratified sample in long format.

    ``stratum`` holds 1-based stratum ids per selected unit; ``unit`` is the
    0-based position of the unit within its stratum. ``x`` and ``N_h`` are
    per-stratum arrays of length H.
    """

    stratum: np.ndarray
    unit: np.ndarray
    y: np.ndarray
    pi: np.ndarray
    x: np.ndarray
    N_h: np.ndarray
    design: str = "srswor"

    def __post_init__(self):
        for name, dtype in (("stratum", int), ("unit", int), ("y", float), ("pi", float),
                            ("x", float), ("N_h", float)):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=dtype))
        n = self.y.size
        if not (self.stratum.size == self.unit.size == self.pi.size == n):
            raise DataError("sample columns have different lengths")
        if np.any(~(self.pi > 0)) or np.any(self.pi > 1 + 1e-12):
            raise DataError("inclusion probabilities must lie in (0, 1]")
        H = self.x.size
        if self.N_h.size != H:
            raise DataError("x and N_h must both have one entry per stratum")
        if n and (self.stratum.min() < 1 or self.stratum.max() > H):
            raise DataError("stratum ids must lie in 1..H")
        if np.any(np.bincount(self.stratum - 1, minlength=H) == 0):
            raise DataError("every stratum needs at least one sampled unit")

    @property
    def H(self) -> int:
        return self.x.size

    @property
    def N(self) -> float:
        return float(self.N_h.sum())

    @property
    def index(self) -> np.ndarray:
        """0-based stratum index per unit."""
        return self.stratum - 1

    @property
    def n_h(self) -> np.ndarray:
        return np.bincount(self.index, minlength=self.H)

    def with_y(self, y) -> "DrawnSample":
        return DrawnSample(self.stratum, self.unit, y, self.pi, self.x, self.N_h, self.design)


def _assemble(pop, chosen, pis, kind) -> DrawnSample:
    stratum = np.concatenate([np.full(c.size, h + 1) for h, c in enumerate(chosen)])
    unit = np.concatenate(chosen)
    y = np.concatenate([pop.strata[h].units[c] for h, c in enumerate(chosen)])
    return DrawnSample(
        stratum=stratum,
        unit=unit,
        y=y,
        pi=np.concatenate(pis),
        x=pop.x,
        N_h=pop.stratum_sizes,
        design=kind,
    )


def draw_srswor(pop: FinitePopulation, plan: SamplingPlan, rng) -> DrawnSample:
    if plan.kind != "srswor":
        raise ConfigError("draw_srswor needs an srswor plan")
    rng = np.random.default_rng(rng)
    n = plan.sizes_for(pop)
    chosen, pis = [], []
    for h, s in enumerate(pop.strata):
        idx = np.sort(rng.choice(s.size, size=n[h], replace=False))
        chosen.append(idx)
        pis.append(np.full(n[h], n[h] / s.size))
    return _assemble(pop, chosen, pis, "srswor")


def pps_inclusion(sizes: np.ndarray, n: int) -> np.ndarray:
    pi = n * sizes / sizes.sum()
    if pi.max() > 1 + 1e-12:
        raise ConfigError(
            f"certainty unit: n_h * size / total = {pi.max():.3f} > 1; reduce n_h or remove the unit"
        )
    return np.minimum(pi, 1.0)


def systematic_points(sizes: np.ndarray, n: int, starts: np.ndarray) -> np.ndarray:
    """Selected positions for systematic pps; one row per random start in [0, 1)."""
    cum = np.cumsum(sizes)
    step = cum[-1] / n
    points = (np.asarray(starts)[..., None] + np.arange(n)) * step
    idx = np.searchsorted(cum, points, side="right")
    return np.minimum(idx, sizes.size - 1)


def draw_pps_systematic(pop: FinitePopulation, plan: SamplingPlan, rng) -> DrawnSample:
    if plan.kind != "pps_systematic":
        raise ConfigError("draw_pps_systematic needs a pps_systematic plan")
    if not pop.has_sizes:
        raise DataError("pps_systematic needs a size measure for every unit")
    rng = np.random.default_rng(rng)
    n = plan.sizes_for(pop)
    chosen, pis = [], []
    for h, s in enumerate(pop.strata):
        pi_all = pps_inclusion(s.sizes, n[h])
        idx = systematic_points(s.sizes, n[h], rng.random())
        chosen.append(idx)
        pis.append(pi_all[idx])
    return _assemble(pop, chosen, pis, "pps_systematic")


def draw_sample(pop: FinitePopulation, plan: SamplingPlan, rng) -> DrawnSample:
    if plan.kind == "srswor":
        return draw_srswor(pop, plan, rng)
    return draw_pps_systematic(pop, plan, rng)


def normalized_weights(sample: DrawnSample | np.ndarray) -> np.ndarray:
    """Inverse-probability weights rescaled to average one over all sampled units."""
    pi = sample.pi if isinstance(sample, DrawnSample) else np.asarray(sample, dtype=float)
    inv = 1.0 / pi
    return inv / inv.mean()


def true_variance_exact_srswor(pop: FinitePopulation, plan: SamplingPlan) -> float:
    """V(ybar_HT) = N^-2 sum_h N_h^2 (1 - f_h) S_h^2 / n_h."""
    if plan.kind != "srswor":
        raise ConfigError("exact variance is only available for srswor")
    n = plan.sizes_for(pop)
    total = 0.0
    for h, s in enumerate(pop.strata):
        if s.size < 2:
            continue
        S2 = s.units.var(ddof=1)
        total += s.size**2 * (1 - n[h] / s.size) * S2 / n[h]
    return total / pop.N**2


def true_variance_exact_pps1(pop: FinitePopulation) -> float:
    """Exact V(ybar_HT) for a single pps draw per stratum: sum_j pi_j (y_j/pi_j - T_h)^2."""
    if not pop.has_sizes:
        raise DataError("pps variance needs size measures")
    total = 0.0
    for s in pop.strata:
        pi = pps_inclusion(s.sizes, 1)
        total += np.sum(pi * (s.units / pi - s.total) ** 2)
    return total / pop.N**2


def _mc_totals_srswor(y, n, draws, rng, chunk):
    out = np.empty(draws)
    N = y.size
    for lo in range(0, draws, chunk):
        m = min(chunk, draws - lo)
        if n == N:
            out[lo : lo + m] = y.sum()
            continue
        keys = rng.random((m, N))
        idx = np.argpartition(keys, n - 1, axis=1)[:, :n]
        out[lo : lo + m] = y[idx].sum(axis=1) * (N / n)
    return out


def _mc_totals_pps(y, sizes, n, draws, rng, chunk):
    out = np.empty(draws)
    pi = pps_inclusion(sizes, n)
    ratio = y / pi
    for lo in range(0, draws, chunk):
        m = min(chunk, draws - lo)
        idx = systematic_points(sizes, n, rng.random(m))
        out[lo : lo + m] = ratio[idx].sum(axis=1)
    return out


def true_variance_mc(
    pop: FinitePopulation, plan: SamplingPlan, draws: int = 100_000, seed=0, chunk: int = 20_000
) -> tuple[float, float]:
    """Monte Carlo V(ybar_HT) and its standard error."""
    if draws < 1000:
        raise ConfigError("true_variance_mc needs at least 1000 draws")
    rng = np.random.default_rng(seed)
    n = plan.sizes_for(pop)
    totals = np.zeros(draws)
    for h, s in enumerate(pop.strata):
        if plan.kind == "srswor":
            totals += _mc_totals_srswor(s.units, n[h], draws, rng, chunk)
        else:
            if s.sizes is None:
                raise DataError("pps design needs size measures")
            totals += _mc_totals_pps(s.units, s.sizes, n[h], draws, rng, chunk)
    est = totals / pop.N
    dev2 = (est - est.mean()) ** 2
    value = dev2.sum() / (draws - 1)
    se = dev2.std(ddof=1) / np.sqrt(draws)
    return float(value), float(se)


def true_variance(pop: FinitePopulation, plan: SamplingPlan, method: str = "auto",
                  draws: int = 100_000, seed=0) -> float:
    """Design variance of the HT mean; ``auto`` uses a closed form whenever one exists."""
    if method not in ("auto", "exact", "mc"):
        raise ConfigError(f"unknown truth method {method!r}")
    if method != "mc":
        if plan.kind == "srswor":
            return true_variance_exact_srswor(pop, plan)
        if np.all(plan.sizes_for(pop) == 1):
            return true_variance_exact_pps1(pop)
        if method == "exact":
            raise ConfigError("no closed-form variance for systematic pps with n_h > 1")
    return true_variance_mc(pop, plan, draws, seed)[0]
