import json
import math

import pytest

from su11sim import InterferometerConfig, cli, sweep
from su11sim.errors import DomainError
from su11sim.metrics import ShotNoiseConvention


def make_spec(**overrides):
    kwargs = dict(
        axis="theta",
        lo=0.0,
        hi=math.pi,
        steps=5,
        fixed=InterferometerConfig(g1=0.1, g2=0.1),
        metrics=("mean", "visibility"),
    )
    kwargs.update(overrides)
    return sweep.SweepSpec(**kwargs)


class TestSweepSpec:
    def test_unknown_axis_rejected(self):
        with pytest.raises(DomainError):
            make_spec(axis="bogus")

    def test_unknown_metric_rejected(self):
        with pytest.raises(DomainError):
            make_spec(metrics=("mean", "bogus"))

    def test_empty_metrics_rejected(self):
        with pytest.raises(DomainError):
            make_spec(metrics=())

    def test_step_bounds(self):
        with pytest.raises(DomainError):
            make_spec(steps=1)
        with pytest.raises(DomainError):
            make_spec(steps=sweep.MAX_STEPS + 1)

    def test_transmission_axis_range(self):
        with pytest.raises(DomainError):
            make_spec(axis="t_s2", lo=0.0, hi=1.5)

    def test_base_transmission_range(self):
        with pytest.raises(DomainError):
            make_spec(base_ts2=0.0)
        with pytest.raises(DomainError):
            make_spec(base_ti2=1.2)


class TestConfigAt:
    def test_theta_axis(self):
        spec = make_spec()
        assert sweep.config_at(spec, 1.25).theta == 1.25

    def test_base_composition(self):
        spec = make_spec(axis="t_s2", lo=0.0, hi=1.0, base_ts2=0.5)
        cfg = sweep.config_at(spec, 0.5)
        assert cfg.t_s**2 == pytest.approx(0.25)

    def test_axis_total_overrides_base(self):
        spec = make_spec(axis="t_s2", lo=0.0, hi=1.0, base_ts2=0.5, axis_total=True)
        cfg = sweep.config_at(spec, 0.3)
        assert cfg.t_s**2 == pytest.approx(0.3)

    def test_both_axis_moves_both_arms(self):
        spec = make_spec(axis="t_both2", lo=0.0, hi=1.0)
        cfg = sweep.config_at(spec, 0.49)
        assert cfg.t_s**2 == pytest.approx(0.49)
        assert cfg.t_i**2 == pytest.approx(0.49)


class TestRunSweep:
    def test_trivial_theta_sweep(self):
        rows = sweep.run_sweep(make_spec(steps=2, metrics=("mean",)))
        assert [r.axis_value for r in rows] == [0.0, math.pi]
        assert rows[0].values["mean"] == pytest.approx(math.sinh(0.2) ** 2, rel=1e-12)
        assert rows[1].values["mean"] == pytest.approx(0.0, abs=1e-14)
        assert all(r.error is None for r in rows)

    def test_point_errors_are_recorded_not_raised(self):
        # zero gain makes visibility undefined at every point
        spec = make_spec(
            fixed=InterferometerConfig(g1=0.0, g2=0.0), metrics=("visibility",)
        )
        rows = sweep.run_sweep(spec)
        assert all(r.error is not None for r in rows)
        assert all(r.values["visibility"] is None for r in rows)

    def test_thread_count_does_not_change_rows(self, monkeypatch):
        spec = make_spec(steps=9, metrics=("mean", "visibility"))
        monkeypatch.setenv("SU11_THREADS", "1")
        serial = sweep.run_sweep(spec)
        monkeypatch.setenv("SU11_THREADS", "4")
        threaded = sweep.run_sweep(spec)
        assert sweep.sweep_to_csv(spec, serial) == sweep.sweep_to_csv(spec, threaded)


class TestSerialization:
    def test_config_round_trip(self):
        spec = make_spec(
            axis="t_i2",
            lo=0.1,
            hi=0.9,
            base_ts2=0.52,
            base_ti2=0.42,
            snl_convention=ShotNoiseConvention.PAIR_AFTER_OPA1,
            axis_total=True,
            fixed=InterferometerConfig(g1=0.45, g2=0.2, theta=0.3, n_i=1e4),
        )
        text = sweep.spec_to_config_text(spec)
        assert sweep.spec_from_config(sweep.parse_config_text(text)) == spec

    def test_parse_comments_and_blanks(self):
        entries = sweep.parse_config_text(
            "# a comment\n\ng1 = 0.1  # trailing\naxis = theta\n"
        )
        assert entries == {"g1": "0.1", "axis": "theta"}

    def test_parse_malformed_line(self):
        with pytest.raises(DomainError):
            sweep.parse_config_text("g1 0.1\n")

    def test_missing_axis(self):
        with pytest.raises(DomainError):
            sweep.spec_from_config({"g1": "0.1"})

    def test_unknown_convention(self):
        with pytest.raises(DomainError):
            sweep.spec_from_config({"axis": "theta", "snl_convention": "bogus"})

    def test_csv_layout(self):
        spec = make_spec(steps=2, metrics=("mean",))
        rows = sweep.run_sweep(spec)
        lines = sweep.sweep_to_csv(spec, rows).splitlines()
        header = [ln for ln in lines if ln.startswith("#")]
        data = [ln for ln in lines if not ln.startswith("#")]
        assert any("axis = theta" in ln for ln in header)
        assert data[0] == "theta,mean,error"
        assert len(data) == 3
        # numeric cells parse back to full precision
        value = float(data[1].split(",")[1])
        assert value == rows[0].values["mean"]

    def test_csv_quotes_error_messages(self):
        row = sweep.SweepRow(axis_value=0.5, values={"mean": None}, error='a,"b"')
        text = sweep.sweep_to_csv(make_spec(steps=2, metrics=("mean",)), [row])
        assert '"a,""b"""' in text

    def test_json_mirror_matches_csv(self):
        spec = make_spec(steps=3, metrics=("mean", "visibility"))
        rows = sweep.run_sweep(spec)
        payload = json.loads(sweep.sweep_to_json(spec, rows))
        assert payload["spec"]["axis"] == "theta"
        assert len(payload["rows"]) == 3
        assert payload["rows"][0]["mean"] == rows[0].values["mean"]
        assert payload["rows"][0]["error"] is None


class TestFigures:
    def test_unknown_figure(self):
        with pytest.raises(DomainError):
            sweep.figure_table("fig9z")

    def test_figure_is_deterministic(self, tmp_path):
        a = sweep.write_figure("fig2a", tmp_path / "a")
        b = sweep.write_figure("fig2a", tmp_path / "b")
        assert (tmp_path / "a" / "fig2a.csv").read_bytes() == (
            tmp_path / "b" / "fig2a.csv"
        ).read_bytes()
        assert [p.name for p in a] == [p.name for p in b] == ["fig2a.csv", "fig2a.gp"]

    def test_figure_columns(self):
        cols, table, errors, extra = sweep.figure_table("fig2a")
        assert cols == [
            "transmission",
            "v_signal_loss",
            "v_idler_loss",
            "v_symmetric_loss",
        ]
        assert len(table) == 100
        assert not errors
        assert extra == {}

    def test_figure3_reports_ideal_limit(self):
        _, _, _, extra = sweep.figure_table("fig3a")
        assert "db_ideal_limit" in extra


class TestValidateHarness:
    def test_zero_points_passes(self):
        report = sweep.validate(seed=1, points=0)
        assert report.passed
        assert report.points == 0

    def test_small_run_passes(self):
        report = sweep.validate(seed=7, points=5)
        assert report.passed, report.failures
        assert report.worst["mean_gaussian_vs_fock"] < sweep.MEAN_RTOL

    def test_point_budget(self):
        with pytest.raises(DomainError):
            sweep.validate(seed=1, points=10**4 + 1)

    def test_seeded_grid_is_reproducible(self):
        assert sweep.random_oracle_configs(3, 4) == sweep.random_oracle_configs(3, 4)


class TestCli:
    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["sweep", "--axis", "bogus"])
        assert exc.value.code == cli.EXIT_USAGE

    def test_missing_axis_exit_code(self, capsys):
        assert cli.main(["sweep", "--g1", "0.1"]) == cli.EXIT_USAGE

    def test_sweep_from_flags_to_files(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        js = tmp_path / "s.json"
        rc = cli.main(
            [
                "sweep", "--g1", "0.1", "--g2", "0.1",
                "--axis", "theta", "--lo", "0", "--hi", str(math.pi),
                "--steps", "3", "--metrics", "mean,visibility",
                "--out", str(out), "--json", str(js),
            ]
        )
        assert rc == cli.EXIT_OK
        assert out.exists() and js.exists()
        payload = json.loads(js.read_text())
        assert payload["rows"][0]["mean"] == pytest.approx(
            math.sinh(0.2) ** 2, rel=1e-12
        )

    def test_sweep_from_config_file_with_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "g1 = 0.1\ng2 = 0.1\naxis = theta\nlo = 0\nhi = 1\nsteps = 2\n"
            "metrics = mean\n"
        )
        rc = cli.main(["sweep", "--config", str(cfg), "--steps", "4"])
        assert rc == cli.EXIT_OK
        data = [
            ln
            for ln in capsys.readouterr().out.splitlines()
            if ln and not ln.startswith("#")
        ]
        assert len(data) == 1 + 4  # header + overridden step count

    def test_sweep_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("axis = theta\nbogus = 1\n")
        assert cli.main(["sweep", "--config", str(cfg)]) == cli.EXIT_USAGE

    def test_sweep_point_errors_exit_code(self, capsys):
        rc = cli.main(
            [
                "sweep", "--g1", "0", "--g2", "0",
                "--axis", "theta", "--lo", "0", "--hi", "1", "--steps", "2",
                "--metrics", "visibility",
            ]
        )
        assert rc == cli.EXIT_POINT_ERRORS

    def test_figure_command(self, tmp_path, capsys):
        rc = cli.main(["figure", "fig2a", "--outdir", str(tmp_path), "--json"])
        assert rc == cli.EXIT_OK
        for name in ("fig2a.csv", "fig2a.gp", "fig2a.json"):
            assert (tmp_path / name).exists()

    def test_sensitivity_command(self, capsys):
        rc = cli.main(["sensitivity", "--g1", "0.1", "--g2", "0.1"])
        assert rc == cli.EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["dtheta2"] == pytest.approx(
            1.0 / math.sinh(0.2) ** 2, rel=1e-4
        )

    def test_visibility_command(self, capsys):
        rc = cli.main(["visibility", "--g1", "0.1", "--g2", "0.1", "--ts2", "0.5"])
        assert rc == cli.EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["visibility"] == pytest.approx(0.9428090415820635, rel=1e-9)

    def test_visibility_undefined_is_usage_error(self, capsys):
        assert cli.main(["visibility", "--g1", "0", "--g2", "0"]) == cli.EXIT_USAGE

    def test_validate_command(self, capsys):
        rc = cli.main(["validate", "--seed", "3", "--points", "4"])
        assert rc == cli.EXIT_OK
        assert "all checks passed" in capsys.readouterr().out

    def test_validate_budget_exceeded(self, capsys):
        assert cli.main(["validate", "--points", "100000"]) == cli.EXIT_USAGE
