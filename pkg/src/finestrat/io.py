"""CSV readers and writers.

Every file is UTF-8 with a header row. Files written by the CLI start with a
single ``#`` provenance line which the readers skip.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np
import pandas as pd

from .design import DrawnSample
from .exceptions import DataError
from .population import FinitePopulation, population_from_arrays

POPULATION_COLUMNS = ("stratum_id", "unit_id", "y", "x_unit", "size")
SAMPLE_COLUMNS = ("stratum_id", "unit_id", "y", "pi", "x_stratum")
SAMPLE_OPTIONAL = ("N_stratum", "design")


def write_csv(df: pd.DataFrame, path, provenance: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if provenance:
            fh.write(f"# {provenance}\n")
        df.to_csv(fh, index=False, lineterminator="\n")


def read_csv(path) -> pd.DataFrame:
    try:
        return pd.read_csv(path, comment="#", encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"no such file: {path}") from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: cannot parse CSV ({exc})") from None


def _require(df: pd.DataFrame, columns: Iterable[str], path) -> None:
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise DataError(f"{path}: missing required column(s) {', '.join(missing)}")


def _numeric(df: pd.DataFrame, col: str, path, allow_missing: bool = False) -> np.ndarray:
    values = pd.to_numeric(df[col], errors="coerce")
    bad = values.isna() & (~df[col].isna() if allow_missing else True)
    if bad.any():
        # +2: one header row, 1-based numbering
        rows = (np.flatnonzero(bad.to_numpy()) + 2).tolist()
        raise DataError(f"{path}: column {col!r} is missing or non-numeric at data row(s) {rows[:10]}")
    return values.to_numpy(dtype=float)


def population_frame(pop: FinitePopulation) -> pd.DataFrame:
    rows = []
    for s in pop.strata:
        x_unit = s.x_unit if s.x_unit is not None else np.full(s.size, s.x)
        rows.append(
            pd.DataFrame(
                {
                    "stratum_id": s.id,
                    "unit_id": np.arange(1, s.size + 1),
                    "y": s.units,
                    "x_unit": x_unit,
                    "size": s.sizes if s.sizes is not None else np.nan,
                }
            )
        )
    return pd.concat(rows, ignore_index=True)


def write_population(pop: FinitePopulation, path, provenance: str | None = None) -> None:
    write_csv(population_frame(pop), path, provenance)


def read_population(path) -> FinitePopulation:
    df = read_csv(path)
    _require(df, POPULATION_COLUMNS, path)
    return population_from_arrays(
        _numeric(df, "stratum_id", path).astype(int),
        _numeric(df, "y", path),
        _numeric(df, "x_unit", path),
        _numeric(df, "size", path, allow_missing=True),
    )


def sample_frame(sample: DrawnSample) -> pd.DataFrame:
    idx = sample.index
    return pd.DataFrame(
        {
            "stratum_id": sample.stratum,
            "unit_id": sample.unit + 1,
            "y": sample.y,
            "pi": sample.pi,
            "x_stratum": sample.x[idx],
            "N_stratum": sample.N_h[idx],
            "design": sample.design,
        }
    )


def write_sample(sample: DrawnSample, path, provenance: str | None = None) -> None:
    write_csv(sample_frame(sample), path, provenance)


def read_sample(path) -> DrawnSample:
    """Read a sample file; ``N_stratum`` defaults to the per-stratum sum of 1/pi."""
    df = read_csv(path)
    _require(df, SAMPLE_COLUMNS, path)
    stratum = _numeric(df, "stratum_id", path).astype(int)
    y = _numeric(df, "y", path)
    pi = _numeric(df, "pi", path)
    bad = np.flatnonzero(~((pi > 0) & (pi <= 1)))
    if bad.size:
        raise DataError(f"{path}: pi outside (0, 1] at data row(s) {(bad + 2).tolist()[:10]}")
    x_unit = _numeric(df, "x_stratum", path)
    ids = np.unique(stratum)
    if not np.array_equal(ids, np.arange(1, ids.size + 1)):
        raise DataError(f"{path}: stratum_id values must be 1..H")
    H = ids.size
    index = stratum - 1
    x = np.zeros(H)
    x[index] = x_unit
    if np.any(x_unit != x[index]):
        raise DataError(f"{path}: x_stratum differs within a stratum")
    if "N_stratum" in df.columns:
        Nu = _numeric(df, "N_stratum", path)
        N_h = np.zeros(H)
        N_h[index] = Nu
    else:
        N_h = np.bincount(index, weights=1.0 / pi, minlength=H)
    design = str(df["design"].iloc[0]) if "design" in df.columns else "srswor"
    unit = _numeric(df, "unit_id", path).astype(int) - 1
    return DrawnSample(stratum, unit, y, pi, x, N_h, design)
