import json
import math

import numpy as np
import pytest

import hotuner.harness as harness
from hotuner import cli
from hotuner.harness import (
    ConfigError,
    ExperimentConfig,
    preset,
    repro,
    run_experiment,
    sweep_csv_text,
    sweep_gamma,
)


def minimal_config(**overrides):
    d = {
        "schema_version": 1,
        "horizon": 10,
        "objective": {"kind": "log_sum_exp", "a": 5.0, "b": 7.0, "c": 0.0},
        "optimizers": [
            {"name": "gd", "kind": "gd", "normalizer": 49.0, "init": [5.0]},
        ],
    }
    d.update(overrides)
    return d


class TestConfigValidation:
    def test_minimal_roundtrip(self):
        cfg = ExperimentConfig.from_dict(minimal_config())
        assert cfg.horizon == 10 and cfg.optimizers[0].name == "gd"

    @pytest.mark.parametrize(
        "mutate",
        [
            {"schema_version": 2},
            {"horizon": 0},
            {"objective": {"kind": "mystery"}},
            {"optimizers": []},
            {"optimizers": [{"name": "a", "kind": "nope", "init": [0.0]}]},
            {"optimizers": [{"name": "a", "kind": "gd", "init": [0.0]}]},  # no normalizer
            {
                "optimizers": [
                    {"name": "a", "kind": "gd", "normalizer": 49.0, "init": [0.0]},
                    {"name": "a", "kind": "gd", "normalizer": 49.0, "init": [0.0]},
                ]
            },
            {"optimizers": [{"name": "a", "kind": "gd", "normalizer": 49.0, "init": [0.0, 1.0]}]},
            {"optimizers": [{"name": "a", "kind": "ht", "gamma": [[5, 1.0]], "mu": 1.0, "beta": 0.5, "normalizer": 49.0, "init": [0.0]}]},
        ],
    )
    def test_rejects_malformed(self, mutate):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(minimal_config(**mutate))

    def test_missing_ht_field(self):
        bad = minimal_config(
            optimizers=[{"name": "h", "kind": "ht", "gamma": 1.5, "mu": 1.0, "init": [0.0]}]
        )
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(bad)


class TestRunExperiment:
    def test_single_row_at_optimum(self):
        cfg = ExperimentConfig.from_dict(
            minimal_config(horizon=1, optimizers=[{"name": "gd", "kind": "gd", "normalizer": 49.0, "init": [0.0]}])
        )
        trace = run_experiment(cfg)
        run = trace.runs[0]
        assert run.rows == 1
        assert run.f[0] == pytest.approx(math.log(10.0), rel=1e-15)
        assert run.delta_v[0] == 0.0
        assert run.decrease_bound[0] == 0.0
        assert run.V[0] == 0.0
        assert bool(run.certified[0])

    def test_csv_contract(self):
        trace = run_experiment(ExperimentConfig.from_dict(minimal_config()))
        lines = trace.csv_text().splitlines()
        assert lines[0] == "t,optimizer,x0,f,grad_norm,V,W,delta_V,decrease_bound,certified,diverged"
        assert len(lines) == 1 + 10
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "gd"
        # floats round-trip through the 17-significant-digit format
        assert float(first[3]) == trace.runs[0].f[0]

    def test_divergence_truncates_rows(self):
        cfg = ExperimentConfig.from_dict(
            {
                "schema_version": 1,
                "horizon": 60,
                "objective": {"kind": "diagonal_quadratic", "weights": [1.0]},
                "optimizers": [
                    {"name": "unstable", "kind": "gd", "normalizer": 0.1, "init": [5.0]},
                    {"name": "stable", "kind": "gd", "normalizer": 1.0, "init": [5.0]},
                ],
            }
        )
        trace = run_experiment(cfg)
        unstable = trace.run("unstable")
        assert unstable.diverged_at is not None
        assert unstable.rows == unstable.diverged_at + 1
        assert unstable.rows < 60
        # the diverged row is the last one and is flagged in the CSV
        rows = [l.split(",") for l in trace.csv_text().splitlines()[1:] if l.split(",")[1] == "unstable"]
        assert rows[-1][-1] == "true"
        assert all(r[-1] == "false" for r in rows[:-1])
        assert trace.run("stable").rows == 60

    def test_divergence_isolation(self):
        full = repro("fig2")
        solo_cfg = preset("fig2")
        solo_cfg.optimizers = [s for s in solo_cfg.optimizers if s.name == "ht"]
        solo = run_experiment(solo_cfg)
        np.testing.assert_array_equal(full.run("ht").xs, solo.run("ht").xs)
        assert full.run("ht").f.tolist() == solo.run("ht").f.tolist()

    def test_reruns_are_byte_identical(self):
        a = repro("fig1").csv_text()
        b = repro("fig1").csv_text()
        assert a == b

    def test_no_violations_on_presets(self):
        for name in ("fig1", "fig2", "fig3"):
            assert repro(name).total_violations == 0


class TestPresets:
    def test_fig1_structure(self):
        trace = repro("fig1")
        names = [r.name for r in trace.runs]
        assert names[:2] == ["gd", "nagd"]
        assert "ht_gamma_1" in names and "ht_gamma_10" in names and "ht_gamma_1.5" in names
        assert all(r.rows == 100 for r in trace.runs)

    def test_fig1_ht_unit_gamma_equals_gd_row_for_row(self):
        trace = repro("fig1")
        np.testing.assert_array_equal(trace.run("gd").xs, trace.run("ht_gamma_1").xs)

    def test_fig1_uncertified_above_boundary(self):
        trace = repro("fig1")
        assert not trace.run("ht_gamma_2").certified.any()
        assert trace.run("ht_gamma_1.5").certified.all()

    def test_fig3_row_count(self):
        trace = repro("fig3")
        assert sum(r.rows for r in trace.runs) == 400 * 3

    def test_example1_second_coordinate_frozen_before_switch(self):
        tau = 50
        trace = repro("example1", tau=tau)
        for run in trace.runs:
            assert np.all(run.xs[:tau, 1] == 0.0), run.name
            assert np.any(run.xs[tau + 1 :, 1] != 0.0), run.name

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset("fig9")

    def test_gap_metric_needs_an_optimum(self):
        from hotuner.metrics import UnsupportedMetricError

        trace = repro("example1", tau=10)
        with pytest.raises(UnsupportedMetricError):
            trace.runs[0].gaps(trace.config.objective)


class TestSweep:
    def test_examples_on_coarse_grid(self):
        rows = sweep_gamma(1.25, 2.0, 4)
        by_gamma = {round(r.gamma, 6): r for r in rows}
        r = by_gamma[1.25]
        assert (r.c_grad, r.c_cross) == (-0.875, 3.0)
        assert r.c_dist == pytest.approx(-24.0, abs=1e-12)
        assert r.discriminant == pytest.approx(75.0, abs=1e-9)
        assert r.verdict
        r = by_gamma[1.5]
        assert r.discriminant == pytest.approx(0.0, abs=1e-9)
        assert r.verdict
        r = by_gamma[2.0]
        assert not r.verdict

    def test_csv_shape(self):
        text = sweep_csv_text(sweep_gamma(1.0, 2.0, 5))
        lines = text.splitlines()
        assert lines[0] == "gamma,c_grad,c_cross,c_dist,discriminant,verdict"
        assert len(lines) == 6

    def test_validation(self):
        with pytest.raises(ConfigError):
            sweep_gamma(2.0, 1.0, 10)
        with pytest.raises(ConfigError):
            sweep_gamma(0.5, 2.0, 10)
        with pytest.raises(ConfigError):
            sweep_gamma(1.0, 2.0, 1)


class TestCli:
    def test_run_roundtrip(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        out_path = tmp_path / "trace.csv"
        cfg_path.write_text(json.dumps(minimal_config()))
        assert cli.main(["run", "--config", str(cfg_path), "--out", str(out_path)]) == 0
        text = out_path.read_text()
        assert text.startswith("t,optimizer,")
        assert len(text.splitlines()) == 11

    def test_config_error_exit_code(self, tmp_path):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps(minimal_config(schema_version=99)))
        assert cli.main(["run", "--config", str(cfg_path)]) == 2

    def test_missing_config_exit_code(self):
        assert cli.main(["run", "--config", "/nonexistent/cfg.json"]) == 2

    def test_io_error_exit_code(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(minimal_config()))
        assert cli.main(["run", "--config", str(cfg_path), "--out", "/nonexistent-dir/x.csv"]) == 3

    def test_monitor_violation_exit_code(self, tmp_path, monkeypatch):
        # impossible under correct certified dynamics; force it by flipping
        # the tolerance sign to exercise the exit path
        monkeypatch.setattr(harness, "MONITOR_TOL_SCALE", -1.0)
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(minimal_config()))
        assert cli.main(["run", "--config", str(cfg_path)]) == 4

    def test_repro_writes_companion_for_fig3(self, tmp_path):
        out = tmp_path / "fig3.csv"
        assert cli.main(["repro", "fig3", "--out", str(out)]) == 0
        assert out.exists()
        companion = tmp_path / "fig3_regret.csv"
        assert companion.exists()
        header = companion.read_text().splitlines()[0]
        assert header.startswith("t,xbar0,xstar0,avg_comparator_cost,avg_regret_")
        assert header.endswith("regret_floor")

    def test_sweep_cli(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert cli.main(["sweep", "--gamma-min", "1.0", "--gamma-max", "2.0", "--steps", "11", "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 12

    def test_certify_cli(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(minimal_config()))
        assert cli.main(["certify", "--config", str(cfg_path)]) == 0
        out = capsys.readouterr().out
        assert "gd: 10/10 steps certified" in out
