"""
Tests for the simulator: configuration, Monte Carlo helpers, plotting,
the experiment graph and the CLI.
"""

import csv
import importlib
import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from shared.errors import ConfigError, TableConsistencyError
from shared.models.config import ExperimentConfig, PlotSpec
from shared.numerics.rng import RngStream
from shared.providers import FixedPrior
from shared.utils.progress import ProgressTracker
from skills.simulator.graph.experiment_graph import route_after_build, route_on_errors
from skills.simulator.main import main
from skills.simulator.montecarlo import (
    batch_plan,
    binomial_ci,
    exceedance,
    roc_curve,
    simulate_statistics,
)
from skills.simulator.plotting import build_figure, read_columns, render_svg
from skills.simulator.runner import (
    run_avg_pfa,
    run_experiment,
    run_pd,
    run_pfa,
    run_roc,
    run_training,
)


def small_config(tmp_path, **overrides) -> ExperimentConfig:
    values = dict(
        m=1, p=1, n=16, n_trials=2000, batch_size=500, K=5, n_gamma=8,
        snr_db=[-5.0], table_cache=False, quiet=True, output_dir=str(tmp_path / "out"),
    )
    values.update(overrides)
    return ExperimentConfig(**values)


def read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


class TestExperimentConfig:
    """Configuration loading and validation."""

    def test_desk_defaults(self):
        config = ExperimentConfig()
        assert (config.m, config.p, config.n) == (2, 2, 500)
        assert config.n_trials == 100_000
        assert config.rho == [0.0]

    def test_load_with_overrides(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"m": 3, "n": 100, "rho": [0.0, 0.1]}))
        config = ExperimentConfig.load(str(path), {"n": 200, "seed": None})
        assert config.m == 3
        assert config.n == 200
        assert config.seed == 2024

    def test_output_dir_from_environment(self, isolated_home):
        assert ExperimentConfig().output_dir == str(isolated_home / "results")

    @pytest.mark.parametrize("overrides", [
        {"n1": 100, "n2": 300},
        {"n1": 100},
        {"m": 7},
        {"rho": [-0.1]},
        {"n_trials": 0},
        {"snr_db": []},
    ])
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigError):
            ExperimentConfig.load(overrides=overrides)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError):
            ExperimentConfig.load(str(tmp_path / "missing.json"))

    def test_non_object_file(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            ExperimentConfig.load(str(path))

    def test_training_splits(self):
        config = ExperimentConfig(n=500, n1=100, n2=400, splits=[[250, 250]])
        assert config.training_splits() == [(100, 400), (250, 250)]

    def test_resolved_copy(self, tmp_path):
        path = ExperimentConfig(m=1).write_resolved(tmp_path / "run")
        assert json.loads(path.read_text())["m"] == 1


class TestMonteCarlo:
    """Batch plan and empirical summaries."""

    def test_batch_plan(self):
        assert batch_plan(2500, 1000) == [(0, 1000), (1, 1000), (2, 500)]

    def test_exceedance_is_strict(self):
        np.testing.assert_allclose(exceedance(np.array([1.0, 2.0, 3.0, 4.0]), np.array([0.0, 2.0, 4.0])), [1.0, 0.5, 0.0])

    def test_binomial_bounds(self):
        low, high = binomial_ci(np.array([0.0, 0.01, 1.0]), 100_000)
        assert low[0] == 0.0 and high[2] == 1.0
        assert high[1] - 0.01 == pytest.approx(3 * math.sqrt(0.01 * 0.99 / 100_000))

    def test_roc_of_separated_samples(self):
        h0 = np.linspace(0.0, 1.0, 1001)
        np.testing.assert_allclose(roc_curve(h0, h0 + 5.0, np.array([0.01, 0.5])), 1.0)

    def test_thread_count_does_not_change_results(self, colored_scenario, colored_tables):
        kwargs = dict(sigma=colored_scenario.composite.sigma, batch_size=300, quiet=True)
        one = simulate_statistics([colored_tables], np.zeros((4, 20)), RngStream(seed=1), 1000, threads=1, **kwargs)
        two = simulate_statistics([colored_tables], np.zeros((4, 20)), RngStream(seed=1), 1000, threads=2, **kwargs)
        np.testing.assert_array_equal(one[0], two[0])

    def test_point_mass_prior_matches_fixed_covariance(self, colored_scenario, colored_tables):
        mean = np.zeros((4, 20))
        fixed = simulate_statistics([colored_tables], mean, RngStream(seed=2), 600,
                                    sigma=colored_scenario.composite.sigma, batch_size=200, quiet=True)
        prior = simulate_statistics([colored_tables], mean, RngStream(seed=2), 600,
                                    prior=FixedPrior(colored_scenario.sigma_n), batch_size=200, quiet=True)
        np.testing.assert_allclose(prior[0], fixed[0])

    def test_needs_one_noise_source(self, colored_tables):
        with pytest.raises(ValueError):
            simulate_statistics([colored_tables], np.zeros((4, 20)), RngStream(seed=1), 10)


class TestPlotting:
    """CSV to SVG rendering."""

    @pytest.fixture
    def csv_path(self, tmp_path):
        path = tmp_path / "curve.csv"
        path.write_text("gamma,a,b\n1,0.5,0.4\n10,0.05,0.04\n100,0.005,0.004\n")
        return path

    def test_writes_well_formed_svg(self, csv_path):
        svg = render_svg(csv_path, PlotSpec(x="gamma", y=["a", "b"], log_y=True, title="t"))
        assert svg == csv_path.with_suffix(".svg")
        assert ET.parse(svg).getroot().tag.endswith("svg")

    def test_empty_csv_writes_nothing(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("gamma,a\n")
        with pytest.raises(ConfigError):
            render_svg(path, PlotSpec(x="gamma", y=["a"]))
        assert not path.with_suffix(".svg").exists()

    def test_non_numeric_cell(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("gamma,a\n1,x\n")
        with pytest.raises(ConfigError):
            read_columns(path)

    def test_missing_column(self, csv_path):
        with pytest.raises(ConfigError):
            build_figure(read_columns(csv_path), PlotSpec(x="gamma", y=["c"]))

    def test_log_axis_spaces_decades_equally(self, csv_path):
        _, ax = build_figure(read_columns(csv_path), PlotSpec(x="gamma", y=["a"], log_x=True))
        points = ax.transData.transform([[1.0, 0.1], [10.0, 0.1], [100.0, 0.1]])
        assert points[1, 0] - points[0, 0] == pytest.approx(points[2, 0] - points[1, 0])


class TestProgress:
    """Per-node progress lines."""

    def test_lines_and_timings(self, capsys):
        tracker = ProgressTracker(enabled=True)
        tracker.start("Running pfa")
        tracker.update("build_detector", "running")
        tracker.update("build_detector", "complete")
        tracker.update("run_pfa", "running")
        out = capsys.readouterr().out
        assert "Running pfa..." in out
        assert "[3/6] Building detector tables... done" in out
        assert "build_detector" in tracker.durations

    def test_disabled_tracker_is_silent(self, capsys):
        tracker = ProgressTracker(enabled=False)
        tracker.start()
        tracker.update("write_results", "running")
        tracker.update("write_results", "error")
        tracker.finish()
        assert capsys.readouterr().out == ""
        assert "write_results" in tracker.durations


class TestGraphRouting:
    """Conditional edges of the experiment graph."""

    def test_route_on_errors(self):
        assert route_on_errors({"failure": None}) == "continue"
        assert route_on_errors({"failure": "numeric"}) == "end"

    def test_route_after_build(self):
        assert route_after_build({"failure": None, "experiment": "roc"}) == "run_roc"
        assert route_after_build({"failure": "config", "experiment": "roc"}) == "end"


class TestExperiments:
    """End-to-end runs at tiny scale."""

    def test_pfa_files_and_theory(self, tmp_path):
        paths = run_pfa(small_config(tmp_path))
        assert [p.split("/")[-1] for p in paths] == ["pfa_rho0.csv"]
        rows = read_csv(paths[0])
        assert list(rows[0].keys()) == ["gamma", "pfa_theory", "pfa_empirical", "ci_low", "ci_high"]
        for row in rows:
            assert float(row["pfa_theory"]) == pytest.approx(math.exp(-float(row["gamma"]) / 2), rel=1e-9)
            assert float(row["ci_low"]) <= float(row["pfa_empirical"]) <= float(row["ci_high"])
        out_dir = tmp_path / "out" / "pfa"
        assert (out_dir / "config.resolved.json").exists()
        assert (out_dir / "pfa_rho0.svg").exists()
        summary = json.loads((out_dir / "summary.json").read_text())
        assert 0.0 <= summary["rho=0"]["ks_statistic"] <= 1.0

    def test_rerun_is_byte_identical(self, tmp_path):
        first = run_pfa(small_config(tmp_path / "a"))[0]
        second = run_pfa(small_config(tmp_path / "b", threads=2))[0]
        with open(first, "rb") as a, open(second, "rb") as b:
            assert a.read() == b.read()

    def test_avg_pfa(self, tmp_path):
        paths = run_avg_pfa(small_config(tmp_path, rho=[0.0, 0.1]))
        assert sorted(p.split("/")[-1] for p in paths) == ["avg_pfa_rho0.1.csv", "avg_pfa_rho0.csv"]
        for row in read_csv(paths[0]):
            expected = math.exp(-float(row["gamma"]) / 2)
            assert float(row["pfa_taylor"]) == pytest.approx(expected, rel=1e-8)
            assert float(row["pfa_direct"]) == pytest.approx(expected, rel=1e-8)
        summary = json.loads((tmp_path / "out" / "avg_pfa" / "summary.json").read_text())
        assert any("K = 5" in w for w in summary["warnings"])

    def test_pd(self, tmp_path):
        paths = run_pd(small_config(tmp_path))
        rows = read_csv(paths[0])
        assert paths[0].endswith("pd_snr-5_rho0.csv")
        assert list(rows[0].keys()) == ["gamma", "pd_exact", "pd_low_snr", "pd_empirical", "ci_low", "ci_high"]
        assert float(rows[0]["gamma"]) == 0.0
        assert float(rows[0]["pd_exact"]) == pytest.approx(1.0, abs=1e-6)
        pd_exact = [float(r["pd_exact"]) for r in rows]
        assert all(a >= b - 1e-9 for a, b in zip(pd_exact, pd_exact[1:]))

    def test_roc(self, tmp_path):
        paths = run_roc(small_config(tmp_path))
        rows = read_csv(paths[0])
        assert float(rows[-1]["pfa"]) == pytest.approx(1.0)
        assert float(rows[-1]["pd_proposed"]) > 0.9
        assert float(rows[-1]["pd_white"]) > 0.9

    def test_training(self, tmp_path):
        config = small_config(tmp_path, n=40, n1=20, n2=20, n_estimates=2, n_trials=400, batch_size=100)
        paths = run_training(config)
        assert paths[0].endswith("training_snr-5_n120_n220.csv")
        rows = read_csv(paths[0])
        assert list(rows[0].keys()) == ["n1", "n2", "pfa_grid", "pd_proposed", "pd_white", "pd_known_cov"]
        assert rows[0]["n1"] == "20"
        for row in rows:
            for key in ("pd_proposed", "pd_white", "pd_known_cov"):
                assert 0.0 <= float(row[key]) <= 1.0

    def test_training_requires_split(self, tmp_path):
        with pytest.raises(ConfigError):
            run_training(small_config(tmp_path))

    def test_unknown_experiment(self, tmp_path):
        state = run_experiment("sweep", small_config(tmp_path))
        assert state["failure"] == "config"
        assert state["csv_paths"] == []


@pytest.mark.slow
class TestNullAcceptance:
    """Null distribution at desk scale."""

    def test_false_alarm_at_one_percent(self, tmp_path):
        config = ExperimentConfig(
            n_trials=100_000, n_gamma=10, threads=2, quiet=True,
            table_cache=False, output_dir=str(tmp_path)
        )
        run_pfa(config)
        summary = json.loads((tmp_path / "pfa" / "summary.json").read_text())["rho=0"]
        sigma = math.sqrt(0.01 * 0.99 / 100_000)
        assert abs(summary["pfa_at_nominal_threshold"] - 0.01) < 3 * sigma
        assert summary["ks_statistic"] < 1.63 / math.sqrt(100_000)


@pytest.mark.slow
class TestReducedAcceptance:
    """Mismatch, low-SNR and ROC behaviour at reduced scale (m = p = 2, n = 100)."""

    TRIALS = 20_000

    def _config(self, tmp_path, **overrides) -> ExperimentConfig:
        values = dict(
            m=2, p=2, n=100, rho=[0.0], n_trials=self.TRIALS, batch_size=2000, n_gamma=10,
            tol=1e-6, threads=2, quiet=True, table_cache=False, output_dir=str(tmp_path),
        )
        values.update(overrides)
        return ExperimentConfig(**values)

    def test_cfar_threshold_restores_false_alarm(self, tmp_path):
        run_pfa(self._config(tmp_path, rho=[0.1]))
        entry = json.loads((tmp_path / "pfa" / "summary.json").read_text())["rho=0.1"]
        sigma = math.sqrt(0.01 * 0.99 / self.TRIALS)
        assert abs(entry["pfa_at_cfar_threshold"] - 0.01) < 4 * sigma + 0.002

        drifted = 0.01 ** (1.0 / entry["variance_ratio"])
        drift_sigma = math.sqrt(drifted * (1 - drifted) / self.TRIALS)
        assert abs(entry["pfa_at_nominal_threshold"] - drifted) < 4 * drift_sigma + 0.002

    def test_low_snr_approximation_degrades_with_snr(self, tmp_path):
        run_pd(self._config(tmp_path, snr_db=[-20.0, -7.0]))
        summary = json.loads((tmp_path / "pd" / "summary.json").read_text())
        weak, strong = summary["snr=-20,rho=0"], summary["snr=-7,rho=0"]
        assert strong["mean_abs_error_low_snr"] > weak["mean_abs_error_low_snr"]
        for entry in (weak, strong):
            assert entry["mean_abs_error_exact"] <= entry["mean_abs_error_low_snr"] + 2e-3

    def test_colored_detector_dominates_white_baseline(self, tmp_path):
        rows = read_csv(run_roc(self._config(tmp_path, snr_db=[-10.0]))[0])
        for row in rows:
            assert float(row["pd_proposed_high"]) >= float(row["pd_white_low"])
        proposed = np.mean([float(r["pd_proposed"]) for r in rows])
        white = np.mean([float(r["pd_white"]) for r in rows])
        assert proposed >= white - 0.01

    def test_long_training_tracks_known_covariance(self, tmp_path):
        trials = 4000
        config = self._config(
            tmp_path, n=2100, n1=2000, n2=100, n_estimates=2, n_trials=trials,
            batch_size=250, snr_db=[-10.0]
        )
        rows = read_csv(run_training(config)[0])
        for row in rows:
            known = float(row["pd_known_cov"])
            sigma = math.sqrt(max(known * (1 - known), 1e-4) / trials)
            assert float(row["pd_proposed"]) == pytest.approx(known, abs=4 * sigma + 0.03)


class TestCli:
    """Exit codes of the command-line interface."""

    def _run(self, argv):
        with pytest.raises(SystemExit) as excinfo:
            main(argv)
        return excinfo.value.code

    def test_success(self, tmp_path):
        code = self._run(["pfa", "--m", "1", "--p", "1", "--n", "16", "--n-trials", "500",
                          "--rho", "0", "--out", str(tmp_path), "--quiet", "--no-cache"])
        assert code == 0
        assert (tmp_path / "pfa" / "pfa_rho0.csv").exists()

    def test_config_error(self, tmp_path):
        assert self._run(["training", "--n1", "10", "--out", str(tmp_path), "--quiet"]) == 2

    def test_config_error_inside_graph(self, tmp_path):
        assert self._run(["training", "--m", "1", "--p", "1", "--n", "16", "--out", str(tmp_path), "--quiet"]) == 2

    def test_numeric_failure(self, tmp_path, monkeypatch):
        module = importlib.import_module("skills.simulator.nodes.build_detector")

        def failing(*args, **kwargs):
            raise TableConsistencyError("orthant probabilities do not sum to one")

        monkeypatch.setattr(module, "build_noise_tables", failing)
        code = self._run(["pfa", "--m", "1", "--p", "1", "--n", "16", "--n-trials", "100",
                          "--out", str(tmp_path), "--quiet", "--no-cache"])
        assert code == 3

    def test_library_error_is_numeric(self, tmp_path, monkeypatch):
        """Errors raised outside the package still end as a numeric failure."""
        module = importlib.import_module("skills.simulator.nodes.build_detector")

        def failing(*args, **kwargs):
            raise ValueError("array must not contain infs or NaNs")

        monkeypatch.setattr(module, "build_noise_tables", failing)
        state = run_experiment("pfa", small_config(tmp_path))
        assert state["failure"] == "numeric"
        assert "ValueError" in state["errors"][-1]
        code = self._run(["pfa", "--m", "1", "--p", "1", "--n", "16", "--n-trials", "100",
                          "--out", str(tmp_path), "--quiet", "--no-cache"])
        assert code == 3

    def test_plot(self, tmp_path):
        path = tmp_path / "curve.csv"
        path.write_text("pfa,pd\n0.001,0.2\n0.01,0.5\n1,1\n")
        assert self._run(["plot", str(path), "--x", "pfa", "--y", "pd", "--log-x"]) == 0
        assert path.with_suffix(".svg").exists()

    def test_plot_empty_csv(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("pfa,pd\n")
        assert self._run(["plot", str(path), "--x", "pfa", "--y", "pd"]) == 2
        assert not path.with_suffix(".svg").exists()

    def test_no_command(self):
        assert self._run([]) == 1
