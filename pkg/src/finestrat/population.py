"""Finite stratified populations.

Two synthetic generators are provided: a Gaussian super-population with a
linear mean in the stratum index, and a gamma-based HMT population whose
strata have approximately equal totals of the size variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import ConfigError, DataError


@dataclass(frozen=True, eq=False)
class Stratum:
    """One stratum of the frame.

    ``x`` is the stratum-level collapsing index. ``x_unit`` keeps the unit-level
    covariate when it varies within the stratum (HMT); ``sizes`` is the pps
    size measure.
    """

    id: int
    x: float
    units: np.ndarray
    sizes: np.ndarray | None = None
    x_unit: np.ndarray | None = None

    def __post_init__(self):
        units = np.asarray(self.units, dtype=float)
        if units.ndim != 1 or units.size < 1:
            raise DataError(f"stratum {self.id}: needs at least one unit")
        if not np.all(np.isfinite(units)):
            raise DataError(f"stratum {self.id}: non-finite y value")
        object.__setattr__(self, "units", units)
        if self.sizes is not None:
            sizes = np.asarray(self.sizes, dtype=float)
            if sizes.shape != units.shape:
                raise DataError(f"stratum {self.id}: sizes length {sizes.size} != N_h {units.size}")
            if not np.all(sizes > 0):
                raise DataError(f"stratum {self.id}: size measures must be positive")
            object.__setattr__(self, "sizes", sizes)
        if self.x_unit is not None:
            xu = np.asarray(self.x_unit, dtype=float)
            if xu.shape != units.shape:
                raise DataError(f"stratum {self.id}: x_unit length mismatch")
            object.__setattr__(self, "x_unit", xu)

    @property
    def size(self) -> int:
        return self.units.size

    @property
    def total(self) -> float:
        return float(self.units.sum())


@dataclass(frozen=True, eq=False)
class FinitePopulation:
    strata: tuple[Stratum, ...]
    N: int = field(init=False)

    def __post_init__(self):
        strata = tuple(self.strata)
        if not strata:
            raise DataError("population has no strata")
        ids = [s.id for s in strata]
        if ids != list(range(1, len(strata) + 1)):
            raise DataError("stratum ids must be 1..H in order")
        object.__setattr__(self, "strata", strata)
        object.__setattr__(self, "N", int(sum(s.size for s in strata)))

    @property
    def H(self) -> int:
        return len(self.strata)

    @property
    def x(self) -> np.ndarray:
        """Per-stratum collapsing index."""
        return np.array([s.x for s in self.strata])

    @property
    def stratum_sizes(self) -> np.ndarray:
        return np.array([s.size for s in self.strata], dtype=int)

    @property
    def totals(self) -> np.ndarray:
        return np.array([s.total for s in self.strata])

    @property
    def has_sizes(self) -> bool:
        return all(s.sizes is not None for s in self.strata)


@dataclass(frozen=True)
class GaussianPopConfig:
    H: int = 50
    N_h: int = 60
    phi: float = 5.0
    seed: int = 0

    def validate(self) -> None:
        if self.H < 2:
            raise ConfigError(f"H must be >= 2, got {self.H}")
        if self.N_h < 1:
            raise ConfigError(f"N_h must be >= 1, got {self.N_h}")
        if not self.phi >= 0:
            raise ConfigError(f"phi must be >= 0, got {self.phi}")


@dataclass(frozen=True)
class HmtPopConfig:
    """HMT population settings.

    x ~ Gamma(x_shape, x_scale); y | x ~ Gamma with mean
    ``intercept + slope * x`` and variance ``var_mult * x ** var_power``.
    """

    N: int = 2000
    H: int = 20
    seed: int = 0
    x_shape: float = 2.0
    x_scale: float = 2.0
    intercept: float = 0.4
    slope: float = 0.25
    var_power: float = 1.5
    var_mult: float = 0.085

    def validate(self) -> None:
        if self.H < 2:
            raise ConfigError(f"H must be >= 2, got {self.H}")
        if self.N < self.H:
            raise ConfigError(f"N ({self.N}) must be >= H ({self.H})")
        for name in ("x_shape", "x_scale", "intercept", "slope", "var_power", "var_mult"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0")


def gaussian_mean_function(x):
    """Rescaled mean 2 (g(x) - min g) / (max g - min g) with g(x) = 1 + 2(x - 0.5) on [0, 1]."""
    g = lambda t: 1.0 + 2.0 * (t - 0.5)
    # g is increasing, so the extrema over [0, 1] sit at the endpoints
    g_min, g_max = g(0.0), g(1.0)
    return 2.0 * (g(np.asarray(x, dtype=float)) - g_min) / (g_max - g_min)


def gaussian_population(cfg: GaussianPopConfig) -> FinitePopulation:
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    x = np.arange(1, cfg.H + 1) / cfg.H
    mean = gaussian_mean_function(x)
    noise = rng.standard_normal((cfg.H, cfg.N_h))
    y = mean[:, None] + cfg.phi * noise
    strata = tuple(
        Stratum(id=h + 1, x=float(x[h]), units=y[h], x_unit=np.full(cfg.N_h, x[h]))
        for h in range(cfg.H)
    )
    return FinitePopulation(strata)


def standardize_index(values: Sequence[float]) -> np.ndarray:
    """Min-max scale onto [0, 1]."""
    v = np.asarray(values, dtype=float)
    lo, hi = v.min(), v.max()
    if not hi > lo:
        raise DataError("cannot standardize a constant index")
    return (v - lo) / (hi - lo)


def equal_total_strata(x_sorted: np.ndarray, H: int) -> np.ndarray:
    """Stratum labels (0-based) cutting sorted ``x`` into H runs of roughly equal total."""
    cum = np.cumsum(x_sorted)
    target = cum[-1] / H
    labels = np.ceil(cum / target).astype(int) - 1
    return np.clip(labels, 0, H - 1)


def hmt_population(cfg: HmtPopConfig) -> FinitePopulation:
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    x = rng.gamma(cfg.x_shape, cfg.x_scale, size=cfg.N)
    ey = cfg.intercept + cfg.slope * x
    vy = cfg.var_mult * x**cfg.var_power
    y = rng.gamma(ey**2 / vy, vy / ey)

    order = np.argsort(x, kind="stable")
    x, y = x[order], y[order]
    if not x[-1] > x[0]:
        raise DataError("degenerate HMT draw: all x equal")
    labels = equal_total_strata(x, cfg.H)
    counts = np.bincount(labels, minlength=cfg.H)
    if np.any(counts == 0):
        raise ConfigError("equal-total stratification left an empty stratum; lower H")
    x_std = standardize_index(x)

    strata = []
    for h in range(cfg.H):
        sel = labels == h
        strata.append(
            Stratum(
                id=h + 1,
                x=float(x_std[sel].mean()),
                units=y[sel],
                sizes=x[sel],
                x_unit=x_std[sel],
            )
        )
    return FinitePopulation(tuple(strata))


def population_mean(pop: FinitePopulation) -> float:
    total = sum(s.total for s in pop.strata)
    return total / pop.N


def population_from_arrays(stratum_id, y, x_unit, size=None) -> FinitePopulation:
    """Build a population from unit-level columns; stratum x is the mean of ``x_unit``."""
    stratum_id = np.asarray(stratum_id, dtype=int)
    y = np.asarray(y, dtype=float)
    x_unit = np.asarray(x_unit, dtype=float)
    if size is not None:
        size = np.asarray(size, dtype=float)
        if np.all(np.isnan(size)):
            size = None
        elif np.any(np.isnan(size)):
            raise DataError("size column is partially missing")
    ids = np.unique(stratum_id)
    if not np.array_equal(ids, np.arange(1, ids.size + 1)):
        raise DataError("stratum_id values must be 1..H")
    strata = []
    for h in ids:
        sel = stratum_id == h
        strata.append(
            Stratum(
                id=int(h),
                x=float(x_unit[sel].mean()),
                units=y[sel],
                sizes=None if size is None else size[sel],
                x_unit=x_unit[sel],
            )
        )
    return FinitePopulation(tuple(strata))
