"""Command-line interface.

    finestrat generate --config pop.ini --out pop.csv
    finestrat draw --population pop.csv --set design.n_h=2 --out sample.csv
    finestrat simulate --preset gaussian-1psu --threads 4 --out results.csv
    finestrat estimate sample.csv --methods collapsed,kernel,bayes --out est.csv
    finestrat analyze nsfg_psu.csv --y AGEPREG,EDUCAT --x POVERTY --psus-per-stratum 1

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import logging
import sys
from dataclasses import replace
from typing import Any, Callable

import numpy as np
import pandas as pd

from . import __version__
from .bayes import McmcConfig, Priors, fit_bayes
from .design import SamplingPlan, draw_sample, normalized_weights
from .estimators import (
    METHODS,
    VarianceEstimate,
    collapsed_variance,
    default_bandwidth,
    ht_mean,
    kernel_variance,
    kernel_weights,
    make_pseudo_strata,
    unbiased_variance,
)
from .design import DrawnSample
from .exceptions import ConfigError, DataError, FinestratError, NumericalError
from .io import read_csv, read_population, read_sample, write_csv, write_population, write_sample
from .population import GaussianPopConfig, HmtPopConfig, standardize_index
from .simulation import SimScenario, build_population, ci_hits, run_replications

log = logging.getLogger("finestrat")


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_float(text: str):
    t = str(text).strip().lower()
    return None if t in ("", "auto", "none") else float(t)


def _opt_int(text: str):
    t = str(text).strip().lower()
    return None if t in ("", "all", "none") else int(t)


def _str_list(text: str) -> list[str]:
    return [p.strip() for p in str(text).split(",") if p.strip()]


# section -> key -> (parser, default)
SCHEMA: dict[str, dict[str, tuple[Callable, Any]]] = {
    "run": {"seed": (int, 0), "name": (str, "scenario")},
    "population": {
        "kind": (str, "gaussian"),
        "seed": (_opt_int, None),
        "path": (str, ""),
        "H": (_opt_int, None),  # 50 for gaussian, 20 for hmt
        "N_h": (int, 60),
        "phi": (float, 5.0),
        "N": (int, 2000),
        "x_shape": (float, 2.0),
        "x_scale": (float, 2.0),
        "intercept": (float, 0.4),
        "slope": (float, 0.25),
        "var_power": (float, 1.5),
        "var_mult": (float, 0.085),
    },
    "design": {"kind": (str, "srswor"), "n_h": (int, 1)},
    "simulation": {
        "R": (int, 200),
        "methods": (_str_list, ["collapsed", "kernel", "bayes"]),
        "truth": (str, "auto"),
        "truth_draws": (int, 100_000),
        "strict": (_bool, True),
    },
    "kernel": {"bandwidth": (_opt_float, None)},
    "spline": {"q": (int, 2), "L": (int, 7)},
    "mcmc": {
        "iterations": (int, 4000),
        "burn_in": (int, 1000),
        "step_gamma": (float, 0.05),
        "step_rho": (float, 0.1),
        "adapt": (_bool, True),
        "target_accept": (float, 0.3),
    },
    "priors": {
        "S_beta": (float, 100.0),
        "S_gamma": (float, 100.0),
        "a_beta": (float, 1.0),
        "b_beta": (float, 1.0),
        "a_gamma": (float, 1.0),
        "b_gamma": (float, 1.0),
    },
    "analyze": {
        "stratum": (str, "stratum_id"),
        "psu": (str, "psu_id"),
        "weight": (str, "weight"),
        "x": (str, "x"),
        "y": (_str_list, []),
        "psus_per_stratum": (_opt_int, None),
        "weighted_psu_means": (_bool, False),
        "population_size": (_opt_float, None),
    },
}

PRESETS: dict[str, dict[str, Any]] = {
    "gaussian-1psu": {
        "run.name": "gaussian_phi5_1psu",
        "population.kind": "gaussian", "population.H": 50, "population.N_h": 60, "population.phi": 5.0,
        "design.kind": "srswor", "design.n_h": 1, "simulation.R": 200,
    },
    "gaussian-2psu": {
        "run.name": "gaussian_phi5_2psu",
        "population.kind": "gaussian", "population.H": 50, "population.N_h": 60, "population.phi": 5.0,
        "design.kind": "srswor", "design.n_h": 2, "simulation.R": 100,
    },
    "hmt-srswor": {
        "run.name": "hmt_srswor_1psu",
        "population.kind": "hmt", "population.N": 2000, "population.H": 20,
        "design.kind": "srswor", "design.n_h": 1, "simulation.R": 200, "kernel.bandwidth": 0.06,
    },
    "hmt-systematic": {
        "run.name": "hmt_systematic_1psu",
        "population.kind": "hmt", "population.N": 2000, "population.H": 20,
        "design.kind": "pps_systematic", "design.n_h": 1, "simulation.R": 200, "kernel.bandwidth": 0.06,
    },
    "ablation": {
        "run.name": "hmt_systematic_weight_ablation",
        "population.kind": "hmt", "population.N": 2000, "population.H": 20,
        "design.kind": "pps_systematic", "design.n_h": 1, "simulation.R": 100, "kernel.bandwidth": 0.06,
        "simulation.methods": ["collapsed", "kernel", "bayes", "bayes_ignore_weights"],
    },
}

FULL_SCALE = {"simulation.R": 1000, "mcmc.iterations": 10_000, "mcmc.burn_in": 3000}


class RunConfig:
    """Resolved key-value configuration; unknown keys are rejected."""

    def __init__(self):
        self.values = {sec: {k: d for k, (_, d) in keys.items()} for sec, keys in SCHEMA.items()}

    def set(self, dotted: str, value) -> None:
        try:
            section, key = dotted.split(".", 1)
        except ValueError:
            raise ConfigError(f"config keys are written section.key, got {dotted!r}") from None
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        if key not in SCHEMA[section]:
            raise ConfigError(f"unknown config key {key!r} in [{section}]")
        parser = SCHEMA[section][key][0]
        if isinstance(value, str):
            try:
                value = parser(value)
            except ValueError as exc:
                raise ConfigError(f"{dotted}: {exc}") from None
        self.values[section][key] = value

    def get(self, dotted: str):
        section, key = dotted.split(".", 1)
        return self.values[section][key]

    def load_file(self, path: str) -> None:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        try:
            with open(path, encoding="utf-8") as fh:
                cp.read_file(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
        for section in cp.sections():
            for key, value in cp.items(section):
                self.set(f"{section}.{key}", value)

    def resolved(self, sections) -> dict:
        return {s: dict(self.values[s]) for s in sections}


def _provenance(command: str, cfg: RunConfig, sections) -> str:
    resolved = cfg.resolved(sections)
    text = json.dumps(resolved, sort_keys=True, separators=(",", ":"), default=str)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return f"finestrat {__version__} {command} seed={cfg.get('run.seed')} config_sha256={digest} config={text}"


def _emit(df: pd.DataFrame, out: str | None, provenance: str) -> None:
    if out in (None, "-"):
        sys.stdout.write(f"# {provenance}\n")
        df.to_csv(sys.stdout, index=False, lineterminator="\n")
    else:
        write_csv(df, out, provenance)


def _population_config(cfg: RunConfig):
    kind = cfg.get("population.kind")
    seed = cfg.get("population.seed")
    seed = cfg.get("run.seed") if seed is None else seed
    if kind == "gaussian":
        H = cfg.get("population.H")
        return GaussianPopConfig(50 if H is None else H, cfg.get("population.N_h"),
                                 cfg.get("population.phi"), seed)
    if kind == "hmt":
        return HmtPopConfig(
            cfg.get("population.N"), cfg.get("population.H") or 20, seed,
            *(cfg.get(f"population.{k}") for k in
              ("x_shape", "x_scale", "intercept", "slope", "var_power", "var_mult")),
        )
    if kind == "csv":
        path = cfg.get("population.path")
        if not path:
            raise ConfigError("population.kind=csv needs population.path")
        return read_population(path)
    raise ConfigError(f"unknown population kind {kind!r}; use gaussian, hmt or csv")


def _population(cfg: RunConfig):
    spec = _population_config(cfg)
    return build_population(spec)


def _mcmc(cfg: RunConfig, seed) -> McmcConfig:
    return McmcConfig(
        cfg.get("mcmc.iterations"), cfg.get("mcmc.burn_in"), cfg.get("mcmc.step_gamma"),
        cfg.get("mcmc.step_rho"), cfg.get("mcmc.adapt"), cfg.get("mcmc.target_accept"), seed,
    )


def _priors(cfg: RunConfig) -> Priors:
    return Priors(*(cfg.get(f"priors.{k}") for k in ("S_beta", "S_gamma", "a_beta", "b_beta", "a_gamma", "b_gamma")))


def _plan(cfg: RunConfig) -> SamplingPlan:
    return SamplingPlan(cfg.get("design.kind"), cfg.get("design.n_h"))


def _estimate_all(sample: DrawnSample, methods, cfg: RunConfig, seed, chain_dump: str | None = None,
                  label: str = "") -> list[VarianceEstimate]:
    out = []
    for method in methods:
        if method == "collapsed":
            out.append(collapsed_variance(sample, make_pseudo_strata(sample.x)))
        elif method == "kernel":
            b = cfg.get("kernel.bandwidth")
            out.append(kernel_variance(sample, kernel_weights(sample.x, b if b is not None else default_bandwidth(sample.H))))
        elif method == "unbiased":
            out.append(unbiased_variance(sample))
        elif method in ("bayes", "bayes_ignore_weights"):
            fit = fit_bayes(sample, cfg.get("spline.q"), cfg.get("spline.L"), _priors(cfg),
                            _mcmc(cfg, seed), use_weights=method == "bayes")
            if chain_dump:
                path = chain_dump if not label else chain_dump.replace(".csv", f"_{label}.csv")
                write_csv(fit.draws.to_frame(), path)
            out.append(fit.estimate)
        else:
            raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")
    return out


def _estimate_rows(sample, estimates, variable=None):
    center = ht_mean(sample)
    rows = []
    for est in estimates:
        lo, hi = est.interval(center, 1.96)
        row = {"method": est.method, "ht_mean": center, "variance": est.value, "ci_lower": lo, "ci_upper": hi}
        if variable is not None:
            row = {"variable": variable, **row}
        rows.append(row)
    return rows


# -- commands ---------------------------------------------------------------


def cmd_generate(args, cfg: RunConfig) -> int:
    pop = _population(cfg)
    if not args.out or args.out == "-":
        raise ConfigError("generate needs --out")
    write_population(pop, args.out, _provenance("generate", cfg, ["run", "population"]))
    log.info("wrote %d units in %d strata to %s", pop.N, pop.H, args.out)
    return 0


def cmd_draw(args, cfg: RunConfig) -> int:
    if args.population:
        cfg.set("population.kind", "csv")
        cfg.set("population.path", args.population)
    pop = _population(cfg)
    sample = draw_sample(pop, _plan(cfg), np.random.default_rng(cfg.get("run.seed")))
    if not args.out or args.out == "-":
        raise ConfigError("draw needs --out")
    write_sample(sample, args.out, _provenance("draw", cfg, ["run", "population", "design"]))
    return 0


def _scenario(cfg: RunConfig) -> SimScenario:
    return SimScenario(
        population=_population_config(cfg),
        plan=_plan(cfg),
        methods=tuple(cfg.get("simulation.methods")),
        R=cfg.get("simulation.R"),
        mcmc=_mcmc(cfg, 0),
        priors=_priors(cfg),
        bandwidth=cfg.get("kernel.bandwidth"),
        q=cfg.get("spline.q"),
        L=cfg.get("spline.L"),
        seed=cfg.get("run.seed"),
        truth=cfg.get("simulation.truth"),
        truth_draws=cfg.get("simulation.truth_draws"),
        strict=cfg.get("simulation.strict"),
        name=cfg.get("run.name"),
    )


def cmd_simulate(args, cfg: RunConfig) -> int:
    sc = _scenario(cfg)
    res = run_replications(sc, threads=args.threads)
    rows = []
    for m, s in res.summaries.items():
        row = {
            "scenario": sc.name, "method": m, "AB": s.ab, "MAE": s.mae, "RMSE": s.rmse, "CP": s.cp,
            "R": sc.R, "n_ok": s.n_ok, "n_failed": s.n_failed, "truth_variance": res.truth_variance,
        }
        if args.record_runtime:
            row["runtime_s"] = round(res.runtime, 3)
        rows.append(row)
    sections = ["run", "population", "design", "simulation", "kernel", "spline", "mcmc", "priors"]
    prov = _provenance("simulate", cfg, sections)
    _emit(pd.DataFrame(rows), args.out, prov)

    if args.per_replication or args.plot_data:
        ht = np.array([r.ht_mean for r in res.records])
        long = []
        for m in sc.methods:
            v = np.array([r.estimates.get(m, np.nan) for r in res.records])
            ok = np.isfinite(v)
            hit = np.zeros(v.size, dtype=int)
            hit[ok] = ci_hits(ht[ok], v[ok], res.truth_mean)
            for i, rec in enumerate(res.records):
                long.append({"method": m, "replication": rec.replication, "ht_mean": rec.ht_mean,
                             "variance": v[i], "hit": hit[i], "truth": res.truth_variance})
        long = pd.DataFrame(long)
        if args.per_replication:
            write_csv(long[["replication", "method", "ht_mean", "variance", "hit"]], args.per_replication, prov)
        if args.plot_data:
            write_csv(long[["method", "replication", "variance", "truth"]], args.plot_data, prov)

    failed = sum(s.n_failed for s in res.summaries.values())
    if failed and sc.strict:
        log.error("%d estimator failures in strict mode", failed)
        return 3
    return 0


def cmd_estimate(args, cfg: RunConfig) -> int:
    sample = read_sample(args.sample)
    methods = cfg.get("simulation.methods")
    estimates = _estimate_all(sample, methods, cfg, cfg.get("run.seed"), args.chain_dump)
    _emit(pd.DataFrame(_estimate_rows(sample, estimates)), args.out,
          _provenance("estimate", cfg, ["run", "simulation", "kernel", "spline", "mcmc", "priors"]))
    return 0


def psu_level_sample(df: pd.DataFrame, variable: str, cfg: RunConfig) -> DrawnSample:
    """Aggregate unit rows to PSUs, pick PSUs per stratum and build a DrawnSample."""
    s_col, p_col, w_col, x_col = (cfg.get(f"analyze.{k}") for k in ("stratum", "psu", "weight", "x"))
    cols = [s_col, p_col, w_col, x_col, variable]
    missing = [c for c in cols if c not in df.columns]
    if missing:
        raise DataError(f"dataset lacks column(s) {', '.join(missing)}")
    sub = df[cols]
    bad = sub.isna().any(axis=1).to_numpy()
    if bad.any():
        raise DataError(f"missing values in selected columns at data row(s) {(np.flatnonzero(bad) + 2).tolist()[:10]}")
    if (sub[w_col] <= 0).any():
        raise DataError("survey weights must be positive")

    sub = sub.assign(_w=sub[w_col].astype(float))
    if cfg.get("analyze.weighted_psu_means"):
        agg = sub.assign(_wy=sub[variable] * sub["_w"], _wx=sub[x_col] * sub["_w"]).groupby([s_col, p_col]).agg(
            wy=("_wy", "sum"), wx=("_wx", "sum"), wsum=("_w", "sum"), weight=("_w", "mean"), rows=("_w", "size"))
        agg["y"] = agg["wy"] / agg["wsum"]
        agg["x"] = agg["wx"] / agg["wsum"]
    else:
        agg = sub.groupby([s_col, p_col]).agg(
            y=(variable, "mean"), x=(x_col, "mean"), weight=("_w", "mean"), rows=("_w", "size"))
    agg = agg.reset_index()

    k = cfg.get("analyze.psus_per_stratum")
    counts = agg.groupby(s_col).size()
    stratum_weight = agg.groupby(s_col)["weight"].sum()
    if k is not None:
        if k < 1:
            raise ConfigError("psus_per_stratum must be >= 1")
        short = counts[counts < k]
        if len(short):
            raise DataError(f"strata with fewer than {k} PSUs: {short.index.tolist()}")
        agg = (agg.sort_values([s_col, "rows", p_col], ascending=[True, False, True])
                  .groupby(s_col, sort=True).head(k))
    agg = agg.sort_values([s_col, p_col])

    labels = np.sort(agg[s_col].unique())
    index = np.searchsorted(labels, agg[s_col].to_numpy())
    H = labels.size
    m_h = counts.loc[labels].to_numpy(dtype=float)
    n_h = np.bincount(index, minlength=H).astype(float)
    # selected PSUs carry the weight of the unselected ones in their stratum
    weight = agg["weight"].to_numpy(dtype=float) * (m_h / n_h)[index]
    if np.any(weight < 1.0):
        raise DataError("PSU weights below 1 imply inclusion probabilities above 1")
    N_h = stratum_weight.loc[labels].to_numpy(dtype=float)
    N_pop = cfg.get("analyze.population_size")
    if N_pop is not None:
        N_h = N_h * (N_pop / N_h.sum())
    x_h = np.bincount(index, weights=agg["x"].to_numpy(float), minlength=H) / n_h
    x_h = standardize_index(x_h)
    unit = np.concatenate([np.arange(c) for c in n_h.astype(int)])
    return DrawnSample(index + 1, unit, agg["y"].to_numpy(float), 1.0 / weight, x_h, N_h, "srswor")


def cmd_analyze(args, cfg: RunConfig) -> int:
    df = read_csv(args.dataset)
    variables = cfg.get("analyze.y")
    if not variables:
        raise ConfigError("analyze needs at least one response column (--y)")
    methods = cfg.get("simulation.methods")
    rows = []
    for var in variables:
        sample = psu_level_sample(df, var, cfg)
        estimates = _estimate_all(sample, methods, cfg, cfg.get("run.seed"), args.chain_dump, label=var)
        rows.extend(_estimate_rows(sample, estimates, variable=var))
    _emit(pd.DataFrame(rows), args.out,
          _provenance("analyze", cfg, ["run", "analyze", "simulation", "kernel", "spline", "mcmc", "priors"]))
    return 0


# -- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI-style config file with [section] key = value entries")
    common.add_argument("--seed", type=int, help="base RNG seed (run.seed)")
    common.add_argument("--threads", type=int, default=1, help="worker processes for replications")
    common.add_argument("--out", help="output CSV path (stdout when omitted)")
    common.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override any config key; repeatable")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="finestrat", description="Variance estimation under fine stratification")
    p.add_argument("--version", action="version", version=f"finestrat {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", parents=[common], help="write a synthetic population CSV")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("draw", parents=[common], help="draw one stratified sample to CSV")
    d.add_argument("--population", help="population CSV (otherwise generated from the config)")
    d.add_argument("--preset", choices=sorted(PRESETS))
    d.set_defaults(func=cmd_draw)

    s = sub.add_parser("simulate", parents=[common], help="run a Monte Carlo comparison")
    s.add_argument("--preset", choices=sorted(PRESETS))
    s.add_argument("--methods", help=f"comma list from {','.join(METHODS)}")
    s.add_argument("--ablation", choices=["weights"], help="add the ignore-weights Bayes arm")
    s.add_argument("--full-scale", action="store_true", help="R=1000 and 10000/3000 MCMC")
    s.add_argument("--per-replication", metavar="PATH")
    s.add_argument("--plot-data", metavar="PATH")
    s.add_argument("--record-runtime", action="store_true",
                   help="add a runtime column (makes output run-dependent)")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("estimate", parents=[common], help="estimate variances for a sample CSV")
    e.add_argument("sample")
    e.add_argument("--methods")
    e.add_argument("--bandwidth", type=float)
    e.add_argument("--chain-dump", metavar="PATH")
    e.set_defaults(func=cmd_estimate)

    a = sub.add_parser("analyze", parents=[common], help="PSU-level analysis of a survey dataset")
    a.add_argument("dataset")
    a.add_argument("--y", help="comma list of response columns")
    a.add_argument("--x", help="collapsing covariate column")
    a.add_argument("--stratum", help="stratum column (default stratum_id)")
    a.add_argument("--psu", help="PSU column (default psu_id)")
    a.add_argument("--weight", help="weight column (default weight)")
    a.add_argument("--psus-per-stratum", type=int, help="keep the k PSUs with the most rows")
    a.add_argument("--weighted-psu-means", action="store_true")
    a.add_argument("--population-size", type=float)
    a.add_argument("--methods")
    a.add_argument("--bandwidth", type=float)
    a.add_argument("--chain-dump", metavar="PATH")
    a.set_defaults(func=cmd_analyze)
    return p


def resolve_config(args) -> RunConfig:
    cfg = RunConfig()
    preset = getattr(args, "preset", None)
    if preset:
        for k, v in PRESETS[preset].items():
            cfg.set(k, v)
    if getattr(args, "full_scale", False):
        for k, v in FULL_SCALE.items():
            cfg.set(k, v)
    if args.config:
        cfg.load_file(args.config)
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        cfg.set(key.strip(), value.strip())
    if args.seed is not None:
        cfg.set("run.seed", args.seed)
    if getattr(args, "methods", None):
        cfg.set("simulation.methods", args.methods)
    if getattr(args, "ablation", None) == "weights":
        methods = [m for m in cfg.get("simulation.methods") if m not in ("bayes", "bayes_ignore_weights")]
        cfg.set("simulation.methods", methods + ["bayes", "bayes_ignore_weights"])
    if getattr(args, "bandwidth", None) is not None:
        cfg.set("kernel.bandwidth", args.bandwidth)
    for flag, key in (("y", "analyze.y"), ("x", "analyze.x"), ("stratum", "analyze.stratum"),
                      ("psu", "analyze.psu"), ("weight", "analyze.weight"),
                      ("population_size", "analyze.population_size")):
        value = getattr(args, flag, None)
        if value is not None:
            cfg.set(key, value)
    if getattr(args, "psus_per_stratum", None) is not None:
        cfg.set("analyze.psus_per_stratum", args.psus_per_stratum)
    if getattr(args, "weighted_psu_means", False):
        cfg.set("analyze.weighted_psu_means", True)
    unknown = set(cfg.get("simulation.methods")) - set(METHODS)
    if unknown:
        raise ConfigError(f"unknown methods {sorted(unknown)}; choose from {METHODS}")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"finestrat: config error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"finestrat: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (DataError, OSError) as exc:
        print(f"finestrat: data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
