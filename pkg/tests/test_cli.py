import hashlib
import json

import numpy as np
import pandas as pd
import pytest

from finestrat.bayes import McmcConfig, fit_bayes
from finestrat.cli import PRESETS, RunConfig, main, psu_level_sample
from finestrat.estimators import collapsed_variance, kernel_variance, kernel_weights, make_pseudo_strata
from finestrat.io import read_csv, read_sample

FAST = ["--set", "mcmc.iterations=300", "--set", "mcmc.burn_in=100"]


def _header(path):
    with open(path, encoding="utf-8") as fh:
        return fh.readline()


def test_generate_gaussian_and_hmt(tmp_path):
    g = tmp_path / "g.csv"
    assert main(["generate", "--seed", "1", "--out", str(g)]) == 0
    assert len(read_csv(g)) == 3000
    h = tmp_path / "h.csv"
    assert main(["generate", "--set", "population.kind=hmt", "--out", str(h)]) == 0
    df = read_csv(h)
    assert len(df) == 2000 and df["stratum_id"].nunique() == 20


def test_generate_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["generate", "--seed", "5", "--out", str(a)])
    main(["generate", "--seed", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_provenance_header(tmp_path):
    out = tmp_path / "p.csv"
    main(["generate", "--seed", "3", "--out", str(out)])
    line = _header(out)
    assert line.startswith("# finestrat") and "seed=3" in line
    config = line.split("config=", 1)[1].strip()
    digest = hashlib.sha256(config.encode()).hexdigest()
    assert f"config_sha256={digest}" in line
    assert json.loads(config)["population"]["kind"] == "gaussian"


def test_config_file_and_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[population]\nH = 10\nN_h = 4\n", encoding="utf-8")
    out = tmp_path / "pop.csv"
    assert main(["generate", "--config", str(cfg), "--out", str(out)]) == 0
    assert len(read_csv(out)) == 40
    cfg.write_text("[population]\ncolour = blue\n", encoding="utf-8")
    assert main(["generate", "--config", str(cfg), "--out", str(out)]) == 1
    assert "colour" in capsys.readouterr().err
    assert main(["generate", "--set", "nosuch.key=1", "--out", str(out)]) == 1
    assert main(["generate", "--set", "population.H=abc", "--out", str(out)]) == 1


def test_usage_errors_exit_1():
    assert pytest.raises(SystemExit, main, ["simulate", "--bogus"]).value.code == 1
    assert pytest.raises(SystemExit, main, []).value.code == 1


def test_round_trip_generate_draw_estimate(tmp_path):
    pop, sample, est = tmp_path / "pop.csv", tmp_path / "s.csv", tmp_path / "e.csv"
    assert main(["generate", "--seed", "2", "--set", "population.H=20", "--out", str(pop)]) == 0
    assert main(["draw", "--population", str(pop), "--seed", "4", "--out", str(sample)]) == 0
    assert main(["estimate", str(sample), "--methods", "collapsed,kernel,bayes", "--seed", "6", *FAST,
                 "--out", str(est)]) == 0
    got = read_csv(est).set_index("method")["variance"]

    s = read_sample(sample)
    assert got["collapsed"] == collapsed_variance(s, make_pseudo_strata(s.x)).value
    assert got["kernel"] == kernel_variance(s, kernel_weights(s.x, 1.5 / 20)).value
    fit = fit_bayes(s, cfg=McmcConfig(300, 100, seed=6))
    assert got["bayes"] == fit.estimate.value


def test_estimate_hand_built_sample(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("stratum_id,unit_id,y,pi,x_stratum\n1,1,1,0.5,0.5\n2,1,5,0.5,1.0\n", encoding="utf-8")
    out = tmp_path / "e.csv"
    assert main(["estimate", str(path), "--methods", "collapsed", "--out", str(out)]) == 0
    row = read_csv(out).iloc[0]
    assert row["ht_mean"] == 3.0 and row["variance"] == 4.0


def test_estimate_schema_errors(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("stratum_id,unit_id,y,x_stratum\n1,1,1,0.5\n", encoding="utf-8")
    assert main(["estimate", str(path)]) == 2
    assert "pi" in capsys.readouterr().err
    path.write_text("stratum_id,unit_id,y,pi,x_stratum\n1,1,1,0.5,0.5\n2,1,oops,0.5,1.0\n", encoding="utf-8")
    assert main(["estimate", str(path)]) == 2
    assert "row(s) [3]" in capsys.readouterr().err


def test_estimate_numerical_failure_exit_3(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("stratum_id,unit_id,y,pi,x_stratum\n1,1,1,0.5,0.0\n2,1,5,0.5,0.5\n3,1,2,0.5,1.0\n",
                    encoding="utf-8")
    assert main(["estimate", str(path), "--methods", "kernel", "--bandwidth", "0.01"]) == 3


def test_simulate_preset_and_filters(tmp_path):
    out = tmp_path / "r.csv"
    small = ["--set", "simulation.R=2", *FAST]
    assert main(["simulate", "--preset", "gaussian-1psu", *small, "--out", str(out)]) == 0
    df = read_csv(out)
    assert list(df["method"]) == ["collapsed", "kernel", "bayes"]
    assert {"scenario", "AB", "RMSE", "CP", "R", "n_ok", "n_failed", "truth_variance"} <= set(df.columns)
    assert "runtime_s" not in df.columns

    assert main(["simulate", "--preset", "gaussian-1psu", "--methods", "collapsed", *small, "--out", str(out),
                 "--record-runtime"]) == 0
    df = read_csv(out)
    assert list(df["method"]) == ["collapsed"] and "runtime_s" in df.columns


def test_simulate_ablation_and_side_outputs(tmp_path):
    out, per, plot = tmp_path / "r.csv", tmp_path / "per.csv", tmp_path / "plot.csv"
    args = ["simulate", "--preset", "hmt-systematic", "--ablation", "weights", "--set", "simulation.R=2", *FAST,
            "--set", "population.N=400", "--set", "population.H=12", "--set", "kernel.bandwidth=0.3",
            "--out", str(out), "--per-replication", str(per), "--plot-data", str(plot)]
    assert main(args) == 0
    assert set(read_csv(out)["method"]) == {"collapsed", "kernel", "bayes", "bayes_ignore_weights"}
    assert len(read_csv(per)) == 8
    assert list(read_csv(plot).columns) == ["method", "replication", "variance", "truth"]


def test_presets_resolve():
    for name, values in PRESETS.items():
        cfg = RunConfig()
        for k, v in values.items():
            cfg.set(k, v)


def _nsfg_like(tmp_path, strata=18, psus=4, rows=6, seed=0, constant=False):
    rng = np.random.default_rng(seed)
    recs = []
    for h in range(1, strata + 1):
        for p in range(1, psus + 1):
            n = rows + p  # PSU p has more rows than p - 1
            pov = rng.uniform(50, 500) + 10 * h
            for _ in range(n):
                recs.append({
                    "SEST": h, "SECU": p, "WGT": rng.uniform(2000, 9000),
                    "POVERTY": pov + rng.normal(0, 20),
                    "AGEPREG": 25.0 if constant else 20 + 0.01 * pov + rng.normal(0, 4),
                    "EDUCAT": 12.0 if constant else 10 + 0.005 * pov + rng.normal(0, 2),
                })
    path = tmp_path / "survey.csv"
    pd.DataFrame(recs).to_csv(path, index=False)
    return path


ANALYZE = ["--stratum", "SEST", "--psu", "SECU", "--weight", "WGT", "--x", "POVERTY"]


def test_analyze_one_psu_layout(tmp_path):
    data = _nsfg_like(tmp_path)
    out = tmp_path / "a.csv"
    assert main(["analyze", str(data), *ANALYZE, "--y", "AGEPREG,EDUCAT", "--psus-per-stratum", "1", *FAST,
                 "--out", str(out)]) == 0
    df = read_csv(out)
    assert len(df) == 6
    assert list(df.columns) == ["variable", "method", "ht_mean", "variance", "ci_lower", "ci_upper"]
    assert list(df["method"][:3]) == ["collapsed", "kernel", "bayes"]
    assert np.all(df["ci_lower"] < df["ht_mean"]) and np.all(df["ht_mean"] < df["ci_upper"])


def test_analyze_selects_largest_psus(tmp_path):
    data = _nsfg_like(tmp_path)
    cfg = RunConfig()
    for k, v in (("analyze.stratum", "SEST"), ("analyze.psu", "SECU"), ("analyze.weight", "WGT"),
                 ("analyze.x", "POVERTY"), ("analyze.psus_per_stratum", 2)):
        cfg.set(k, v)
    df = pd.read_csv(data)
    s = psu_level_sample(df, "AGEPREG", cfg)
    assert s.H == 18 and np.all(s.n_h == 2)
    # the two largest PSUs are 3 and 4 (most rows)
    assert set(s.unit.tolist()) == {0, 1}
    psu_w = df.groupby(["SEST", "SECU"])["WGT"].mean()
    np.testing.assert_allclose(s.N_h, psu_w.groupby(level=0).sum().to_numpy())
    np.testing.assert_allclose(1 / s.pi[:2], psu_w.loc[1].to_numpy()[2:] * 2)
    assert s.x.min() == 0 and s.x.max() == 1
    fit = fit_bayes(s, cfg=McmcConfig(300, 100, seed=1))
    assert fit.multi and fit.draws.acceptance_rho is not None


def test_analyze_constant_response(tmp_path):
    data = _nsfg_like(tmp_path, constant=True)
    out = tmp_path / "a.csv"
    assert main(["analyze", str(data), *ANALYZE, "--y", "AGEPREG", "--psus-per-stratum", "1",
                 "--methods", "collapsed,kernel", "--out", str(out)]) == 0
    df = read_csv(out).set_index("method")
    # totals differ only through the weights; with equal per-PSU means the deviation is weight-driven
    assert df.loc["collapsed", "ht_mean"] == pytest.approx(25.0, rel=0.2)


def test_analyze_identical_psus_give_zero_collapsed(tmp_path):
    recs = [{"stratum_id": h, "psu_id": p, "weight": 100.0, "x": float(h), "y": 7.0}
            for h in range(1, 9) for p in (1, 2) for _ in range(3)]
    path = tmp_path / "flat.csv"
    pd.DataFrame(recs).to_csv(path, index=False)
    out = tmp_path / "a.csv"
    assert main(["analyze", str(path), "--y", "y", "--psus-per-stratum", "1", "--methods", "collapsed,kernel",
                 "--out", str(out)]) == 0
    df = read_csv(out).set_index("method")
    assert df.loc["collapsed", "variance"] == 0.0
    assert df.loc["kernel", "variance"] == pytest.approx(0.0, abs=1e-20)
    assert df.loc["collapsed", "ht_mean"] == 7.0


def test_analyze_errors(tmp_path, capsys):
    data = _nsfg_like(tmp_path, strata=4, psus=2)
    assert main(["analyze", str(data), *ANALYZE, "--y", "AGEPREG", "--psus-per-stratum", "3",
                 "--methods", "collapsed"]) == 2
    assert "fewer than 3 PSUs" in capsys.readouterr().err
    assert main(["analyze", str(data), *ANALYZE, "--y", "MISSING", "--methods", "collapsed"]) == 2
    assert main(["analyze", str(data), *ANALYZE, "--methods", "collapsed"]) == 1
    df = pd.read_csv(data)
    df.loc[3, "AGEPREG"] = np.nan
    df.to_csv(data, index=False)
    assert main(["analyze", str(data), *ANALYZE, "--y", "AGEPREG", "--methods", "collapsed"]) == 2
    assert "row(s) [5]" in capsys.readouterr().err


def test_chain_dump(tmp_path):
    path = tmp_path / "tiny.csv"
    rows = ["stratum_id,unit_id,y,pi,x_stratum"] + [f"{h},1,{h % 3 + 0.1 * h},0.25,{h / 12}" for h in range(1, 13)]
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    dump = tmp_path / "chain.csv"
    assert main(["estimate", str(path), "--methods", "bayes", *FAST, "--chain-dump", str(dump),
                 "--set", "spline.L=3"]) == 0
    chain = read_csv(dump)
    assert len(chain) == 200
    assert {"beta_0", "gamma_0", "tau2_beta", "tau2_gamma", "rho", "accept_gamma"} <= set(chain.columns)
