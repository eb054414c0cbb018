"""Input checks that turn array-style arguments into a DrawnSample."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array, check_consistent_length

from .design import DrawnSample
from .exceptions import DataError


def check_stratified_sample(X, y, strata, sample_weight, population_size=None,
                            stratum_sizes=None, design: str = "srswor") -> DrawnSample:
    """Validate unit-level inputs.

    X is the collapsing index as a single column and must be constant within a
    stratum. ``sample_weight`` holds design weights 1/pi. Strata labels may be
    arbitrary; they are mapped to 1..H in sorted order.
    """
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise DataError(f"X must have exactly one column (the collapsing index), got {X.shape[1]}")
        X = X[:, 0]
    y = check_array(y, ensure_2d=False, dtype=float)
    w = check_array(sample_weight, ensure_2d=False, dtype=float)
    strata = np.asarray(strata)
    check_consistent_length(X, y, strata, w)
    if np.any(w < 1.0 - 1e-12):
        raise DataError("design weights 1/pi must be >= 1")

    labels, index = np.unique(strata, return_inverse=True)
    H = labels.size
    x_h = np.bincount(index, weights=X, minlength=H) / np.bincount(index, minlength=H)
    if np.any(np.abs(X - x_h[index]) > 1e-9 * np.maximum(1.0, np.abs(x_h[index]))):
        raise DataError("the collapsing index must be constant within each stratum")

    if stratum_sizes is not None:
        N_h = np.asarray(stratum_sizes, dtype=float)
        if N_h.shape != (H,):
            raise DataError(f"stratum_sizes needs {H} entries")
    else:
        N_h = np.bincount(index, weights=w, minlength=H)
    if population_size is not None:
        N_h = N_h * (float(population_size) / N_h.sum())

    unit = np.zeros(y.size, dtype=int)
    for h in range(H):
        sel = np.flatnonzero(index == h)
        unit[sel] = np.arange(sel.size)
    return DrawnSample(index + 1, unit, y, np.minimum(1.0 / w, 1.0), x_h, N_h, design)
