"""实验配置、结果存储、作图与命令行"""

import json
import math
from fractions import Fraction

import pandas as pd
import pytest

from rffkim.core.config import GuardLimits
from rffkim.core.constants import T_C
from rffkim.core.exceptions import ConfigException, GuardException, RffkimException, SchemaError
from rffkim.harness import (
    SWEEP_COLUMNS,
    ChainSettings,
    ExperimentConfig,
    ResultStore,
    build_registry,
    emit_plot,
    run_experiment,
    run_key,
)
from rffkim.harness.cli import main
from rffkim.harness.plot import schedule_label


def _small_config(**kwargs) -> ExperimentConfig:
    defaults = dict(
        name="small",
        temperature=2.0,
        n_list=[1],
        chain=ChainSettings(burn_in=5, samples=20),
        disorder_count=1,
    )
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


class TestConfig:
    def test_ini_round_trip(self):
        config = ExperimentConfig(
            name="rt",
            model="rfim",
            temperature=2.0,
            n_list=[2, 4],
            theta=0.5,
            alphas=["1/2", "auto"],
            chain=ChainSettings(samples=10, burn_in=3),
            disorder_count=3,
            plot=True,
            output_dir="out/figs",
            guards=GuardLimits(max_total_sweeps=1000),
        )
        assert ExperimentConfig.parse_ini(config.to_ini()) == config
        assert config.cache_dict() == config.model_copy(update={"output_dir": None}).cache_dict()

    def test_regime_only(self):
        config = ExperimentConfig(regime="crit", n_list=[4])
        assert ExperimentConfig.parse_ini(config.to_ini()) == config
        assert config.T == T_C
        assert config.resolved_regime == "crit"
        assert config.alpha_value("auto") == Fraction(15, 16)
        assert config.alpha_value("1/2") == Fraction(1, 2)
        assert config.boundary_name == "wired"
        assert ExperimentConfig(model="rfim", temperature=1.0).boundary_name == "plus"

    def test_invalid(self):
        with pytest.raises(ConfigException):
            ExperimentConfig.parse_ini("[unknown]\nx = 1\n")
        with pytest.raises(ConfigException):
            ExperimentConfig.parse_ini("[experiment]\nmodel = rffk\n")
        with pytest.raises(ConfigException):
            ExperimentConfig.parse_ini("no header\n")
        with pytest.raises(ConfigException):
            ExperimentConfig.parse_ini("[experiment]\ntemperature = 2\nmodel = potts\n")
        with pytest.raises(ConfigException):
            ExperimentConfig.parse_ini("[experiment]\ntemperature = 2\n[schedule]\nalphas = half\n")

    def test_load_missing(self, tmp_path):
        with pytest.raises(ConfigException):
            ExperimentConfig.load(tmp_path / "missing.ini")

    def test_save_load(self, tmp_path):
        config = _small_config()
        assert ExperimentConfig.load(config.save(tmp_path / "c.ini")) == config

    def test_total_sweeps(self):
        # 每个外场两条链，每条 2 副本 × (5 + 20)
        assert _small_config().total_sweeps() == 100


class TestStore:
    def test_run_key(self):
        config = _small_config().to_dict()
        assert run_key(config) == run_key(dict(config))
        assert run_key(config) != run_key(config, version="0.0.0")
        assert len(run_key(config)) == 64

    def test_append_only(self, tmp_path):
        store = ResultStore(tmp_path)
        store.begin("abc")
        entry = store.commit("abc", {"name": "x"})
        assert store.has("abc")
        assert store.get("abc").cache_hit
        assert entry.file("manifest.json").exists()
        assert list(store.keys()) == ["abc"]
        with pytest.raises(RffkimException):
            store.begin("abc")


class TestExperiment:
    def test_small_run(self, tmp_path):
        store = ResultStore(tmp_path)
        config = _small_config(plot=True)
        entry = run_experiment(config, store=store)
        assert not entry.cache_hit
        sweep = pd.read_csv(entry.file(config.csv_name))
        assert list(sweep.columns) == SWEEP_COLUMNS
        assert len(sweep) == 1
        row = sweep.iloc[0]
        assert row["N"] == 1 and row["epsilon"] == pytest.approx(1.0)
        assert 0.0 <= row["tv_mean"] <= 1.0
        assert row["z_hat"] > 0
        assert entry.file("tv_vs_n.svg").exists()
        assert entry.file("details.csv").exists()

        again = run_experiment(config, store=store)
        assert again.cache_hit
        assert again.key == entry.key
        assert list(store.keys()) == [entry.key]

    def test_empty_grid(self, tmp_path):
        config = _small_config(n_list=[])
        entry = run_experiment(config, store=ResultStore(tmp_path))
        text = entry.file(config.csv_name).read_text()
        assert text == ",".join(SWEEP_COLUMNS) + "\n"
        assert entry.manifest["rows"] == 0

    def test_guard_before_work(self, tmp_path):
        store = ResultStore(tmp_path)
        config = _small_config(guards=GuardLimits(max_total_sweeps=1))
        with pytest.raises(GuardException):
            run_experiment(config, store=store)
        assert list(store.keys()) == []
        assert not store.has(run_key(config.cache_dict()))

    def test_deterministic(self, tmp_path):
        config = _small_config()
        a = run_experiment(config, store=ResultStore(tmp_path / "a"), threads=1)
        b = run_experiment(config, store=ResultStore(tmp_path / "b"), threads=3)
        assert a.file(config.csv_name).read_bytes() == b.file(config.csv_name).read_bytes()

    def test_rfim_skips_fk_statistics(self, tmp_path):
        config = _small_config(model="rfim")
        entry = run_experiment(config, store=ResultStore(tmp_path))
        sweep = pd.read_csv(entry.file(config.csv_name))
        assert sweep["p2_exceed"].isna().all()
        assert sweep["p3_exceed"].isna().all()
        assert sweep["tv_mean"].between(0.0, 1.0).all()

        fk = run_experiment(_small_config(), store=ResultStore(tmp_path))
        assert pd.read_csv(fk.file("sweep.csv"))["p2_exceed"].between(0.0, 1.0).all()

    def test_output_dir(self, tmp_path):
        out = tmp_path / "figures"
        config = _small_config(plot=True, output_dir=str(out))
        entry = run_experiment(config, store=ResultStore(tmp_path / "store"))
        assert (out / config.csv_name).read_bytes() == entry.file(config.csv_name).read_bytes()
        assert (out / "tv_vs_n.svg").exists()

        # 输出目录不影响缓存键，命中缓存时照样复制
        elsewhere = tmp_path / "elsewhere"
        again = run_experiment(config.model_copy(update={"output_dir": str(elsewhere)}), store=ResultStore(tmp_path / "store"))
        assert again.cache_hit and again.key == entry.key
        assert (elsewhere / config.csv_name).exists()

    def test_no_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        run_experiment(_small_config(), store=ResultStore(tmp_path / "store"))
        assert not (tmp_path / "sweep.csv").exists()


class TestPlot:
    def _csv(self, tmp_path):
        path = tmp_path / "sweep.csv"
        pd.DataFrame(
            {
                "N": [4, 8, 4, 8],
                "alpha": [0.9375, 0.9375, 0.5, 0.5],
                "tv_mean": [0.1, 0.2, 0.3, 0.6],
                "tv_se": [0.01, 0.02, 0.01, 0.03],
            }
        ).to_csv(path, index=False)
        return path

    def test_labels(self):
        assert schedule_label(15 / 16) == "α=15/16"
        assert schedule_label(0.5) == "α=1/2"
        assert schedule_label(1.0) == "α=1"

    def test_byte_stable(self, tmp_path):
        csv = self._csv(tmp_path)
        a = emit_plot(csv, tmp_path / "a.svg", title="t")
        b = emit_plot(csv, tmp_path / "b.svg", title="t")
        assert a.read_bytes() == b.read_bytes()
        assert b"15/16" in a.read_bytes()

    def test_schema(self, tmp_path):
        path = tmp_path / "bad.csv"
        pd.DataFrame({"N": [1], "alpha": [0.5]}).to_csv(path, index=False)
        with pytest.raises(SchemaError):
            emit_plot(path, tmp_path / "x.svg")


class TestCli:
    def test_registry(self):
        names = build_registry().list_commands()
        assert {
            "exact-tv", "sample", "stats", "pstats", "sweep", "ldp-tail", "boundary-influence", "corr-length", "plot",
        } <= set(names)

    def test_exact_tv(self, capsys):
        assert main(["exact-tv", "--n", "1", "--temp", "2.0", "--epsilon", "0.5", "--seed", "3"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert 0.0 < result["tv"] < 1.0
        assert result["vertices"] == 9
        assert result["log_zh"] == pytest.approx(result["log_z0"] - math.log(result["z_ratio"]))
        assert result["boundary"] == "zero"

    def test_exact_tv_fk(self, capsys):
        argv = ["exact-tv", "--model", "fk", "--width", "2", "--height", "2", "--temp", str(T_C), "--epsilon", "0.5"]
        assert main([*argv, "--boundary", "wired"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["boundary"] == "wired"
        assert {"tv", "z_ratio", "log_z0", "log_zh"} <= set(result)

    @pytest.mark.parametrize(
        "model, boundary", [("fk", "plus"), ("fk", "zero"), ("ising", "wired")], ids=["fk-plus", "fk-zero", "ising-wired"]
    )
    def test_exact_tv_rejects_boundary(self, model, boundary):
        assert main(["exact-tv", "--model", model, "--boundary", boundary, "--temp", "2.0"]) == 2

    def test_stats_single_vertex(self, tmp_path, capsys):
        path = tmp_path / "config.bits"
        path.write_text("")
        assert main(["stats", "--in", str(path), "--n", "0", "--boundary", "wired"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["kappa"] == 1
        assert result["boundary_size"] == 1

    @pytest.mark.parametrize(
        "code, boundary, kappa, max_size",
        [("0", "wired", 2, 8), ("0", "free", 9, 1), (hex(2**12 - 1), "free", 1, 9)],
        ids=["closed-wired", "closed-free", "open"],
    )
    def test_stats_box(self, tmp_path, capsys, code, boundary, kappa, max_size):
        path = tmp_path / "config.bits"
        path.write_text(code + "\n")
        assert main(["stats", "--in", str(path), "--boundary", boundary]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["kappa"] == kappa
        assert result["max_size"] == max_size

    def test_stats_bad_input(self, tmp_path):
        assert main(["stats", "--in", str(tmp_path / "missing.bits")]) == 2
        path = tmp_path / "wide.bits"
        path.write_text(str(2**12))
        assert main(["stats", "--in", str(path)]) == 2
        path.write_text("zz")
        assert main(["stats", "--in", str(path)]) == 2

    def test_sample_csv(self, tmp_path, capsys):
        out = tmp_path / "samples.csv"
        argv = [
            "sample", "--model", "rffk", "--n", "1", "--temp", "2.0", "--epsilon", "0.3", "--boundary", "wired",
            "--sweeps", "6", "--thin", "2", "--replicas", "2", "--seed", "7", "--burn-in", "3", "--out", str(out),
        ]
        assert main(argv) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["samples"] == 6
        assert result["plan"]["seed"] == 7 and result["field_seed"] == 7
        header = out.read_text().splitlines()[0].split(",")
        assert header[:9] == [
            "replica", "sweep", "kappa", "max_cluster", "sum_sq", "sum_quartic", "boundary_cluster", "F_value", "magnetization",
        ]
        frame = pd.read_csv(out)
        assert sorted(frame["sweep"].unique().tolist()) == [5, 7, 9]

    def test_sample_seed_overrides(self, capsys):
        argv = ["sample", "--n", "1", "--temp", "2.0", "--samples", "2", "--replicas", "1", "--burn-in", "1", "--seed", "3"]
        assert main([*argv, "--chain-seed", "11", "--field-seed", "5"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["plan"]["seed"] == 11 and result["field_seed"] == 5
        assert main([*argv, "--sweeps", "1", "--thin", "2"]) == 2

    def test_missing_temperature(self):
        assert main(["exact-tv", "--n", "1"]) == 2

    def test_guard_exit_code(self):
        assert main(["exact-tv", "--n", "3", "--temp", "2.0"]) == 3

    def test_sweep_config_guard(self, tmp_path):
        config = _small_config(guards=GuardLimits(max_total_sweeps=1))
        path = config.save(tmp_path / "c.ini")
        assert main(["sweep", "--config", str(path), "--store", str(tmp_path / "store")]) == 3
        assert main(["sweep", "--config", str(tmp_path / "missing.ini")]) == 2

    def test_sweep_cache(self, tmp_path, capsys):
        argv = [
            "sweep", "--temp", "2.0", "--n-list", "1", "--disorder-seeds", "1",
            "--burn-in", "5", "--samples", "20", "--store", str(tmp_path / "store"), "--out", str(tmp_path / "s.csv"),
        ]
        assert main(argv) == 0
        first = json.loads(capsys.readouterr().out)
        assert main(argv) == 0
        second = json.loads(capsys.readouterr().out)
        assert not first["cache_hit"] and second["cache_hit"]
        assert first["key"] == second["key"]
        assert (tmp_path / "s.csv").read_text().splitlines()[0] == ",".join(SWEEP_COLUMNS)
