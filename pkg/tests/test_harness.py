import pytest

import frontlab as fl
import frontlab.harness as H
from frontlab.errors import ConfigError

MINIMAL = """
params.d1 = 1.0
params.d2 = 1.0
params.r1 = 0.5
params.r2 = 0.4
params.a = 0.5
params.b = 1.5
"""

DESK = MINIMAL + """
params.s = 0.1
initial.u_height = 0.5
initial.v_height = 0.2
solver.t_final = 30.0
"""


def test_minimal_config_defaults():
    cfg = H.parse_config_text(MINIMAL)
    assert cfg.values["grid.dx"] == pytest.approx(1.0 / 16.0)
    assert cfg.values["observer.theta"] == 0.1
    assert cfg.values["band.t_window"] == 0.5
    assert cfg.values["params.s"] == 0.0
    assert cfg.values["kernel1.family"] == "raised_cosine"
    assert cfg.values["solver.dt"] == pytest.approx(
        fl.dt_max(cfg.params, cfg.habitat_validation.alpha_bar))
    assert cfg.band is not None and cfg.band.kind == "theorem"


def test_unknown_key_named():
    with pytest.raises(ConfigError) as err:
        H.parse_config_text(MINIMAL + "params.q = 3\n")
    assert "params.q" in str(err.value)


def test_missing_required_key_named():
    with pytest.raises(ConfigError) as err:
        H.parse_config_text("params.d1 = 1.0\n")
    assert "params.d2" in str(err.value)


def test_dt_above_stability_bound_rejected():
    with pytest.raises(ConfigError) as err:
        H.parse_config_text(DESK + "solver.dt = 0.5\n")
    assert "dt_max" in str(err.value)


def test_grid_too_small_reports_required_size():
    with pytest.raises(ConfigError) as err:
        H.parse_config_text(DESK + "grid.x_max = 12.0\n")
    assert "x_max >=" in str(err.value)


def test_grid_dx_floor_rejected():
    with pytest.raises(ConfigError) as err:
        H.parse_config_text(DESK + "grid.dx = 0.25\n")
    assert "floor" in str(err.value)


def test_echo_round_trip_identity():
    cfg = H.parse_config_text(DESK)
    echoed = H.echo_config(cfg)
    cfg2 = H.parse_config_text(echoed)
    assert cfg.values == cfg2.values
    assert H.echo_config(cfg2) == echoed


def test_band_falls_back_ahead_of_front():
    cfg = H.parse_config_text(MINIMAL + "params.s = 0.3\nsolver.t_final = 20.0\n")
    assert cfg.band is not None
    assert cfg.band.kind == "ahead"
    assert cfg.band.c_lo > cfg.speeds.s_underline


def test_weak_predator_config_roundtrips_without_band():
    text = MINIMAL.replace("params.b = 1.5", "params.b = 0.9") + "solver.t_final = 10.0\n"
    cfg = H.parse_config_text(text)
    assert cfg.speeds is None and cfg.band is None
    assert cfg.values["band.eta"] == "auto"
    echoed = H.echo_config(cfg)
    assert H.parse_config_text(echoed).values == cfg.values


def test_run_experiment_bundle_and_verdicts(tmp_path):
    cfg = H.parse_config_text(DESK + "solver.t_final = 40.0\ninitial.v_height = 0.0\n")
    res = H.run_experiment(cfg, out_dir=tmp_path / "run")
    for name in ("config_echo.txt", "speeds.csv", "hypotheses.csv", "snapshots.csv",
                 "level_sets_u.csv", "level_sets_v.csv", "persistence.csv"):
        assert (tmp_path / "run" / name).exists(), name
    assert res.u_report.verdict == "persists"
    assert res.v_report.verdict == "extinct"
    speeds_text = (tmp_path / "run" / "speeds.csv").read_text().splitlines()
    assert speeds_text[0] == "s_star,lambda1,s_lower_star,lambda2,s_underline"
    row = speeds_text[1].split(",")
    assert float(row[0]) == pytest.approx(0.3901927818, abs=1e-6)


def test_run_experiment_zero_initial_data(tmp_path):
    cfg = H.parse_config_text(
        DESK + "initial.u_height = 0.0\ninitial.v_height = 0.0\nsolver.t_final = 10.0\n")
    res = H.run_experiment(cfg, out_dir=tmp_path / "zero")
    assert res.u_report.verdict == "extinct"
    assert res.v_report.verdict == "extinct"
    assert res.u_report.band_min == 0.0
    # speeds are still computed and written
    text = (tmp_path / "zero" / "speeds.csv").read_text()
    assert "nan" not in text.splitlines()[1]


def test_run_experiment_snapshot_csv_shape(tmp_path):
    cfg = H.parse_config_text(DESK + "solver.t_final = 5.0\n")
    res = H.run_experiment(cfg, out_dir=tmp_path / "s")
    lines = (tmp_path / "s" / "snapshots.csv").read_text().splitlines()
    assert lines[0] == "t,x,u,v"
    nt = res.trajectory.times.size
    assert len(lines) == 1 + nt * res.trajectory.grid.n
    for name in ("level_sets_u.csv", "level_sets_v.csv"):
        head = (tmp_path / "s" / name).read_text().splitlines()[0]
        assert head == "t,theta,x_left,x_right"


def test_run_experiment_weak_predator_speeds_row(tmp_path):
    text = MINIMAL.replace("params.b = 1.5", "params.b = 0.9") + "solver.t_final = 8.0\n"
    H.run_experiment(H.parse_config_text(text), out_dir=tmp_path / "weak")
    row = (tmp_path / "weak" / "speeds.csv").read_text().splitlines()[1].split(",")
    assert float(row[0]) > 0.0          # prey speed still computed
    assert row[2] == row[4] == "nan"    # predator speed undefined for b <= 1
    verdicts = (tmp_path / "weak" / "persistence.csv").read_text()
    assert "unavailable" in verdicts


def test_single_value_sweep_matches_run(tmp_path):
    cfg = H.parse_config_text(DESK)
    rows = H.sweep(cfg, "s", [0.1], workers=1, out_dir=tmp_path / "sw")
    assert len(rows) == 1
    res = H.run_experiment(H.parse_config_text(DESK), out_dir=None)
    row = rows[0]
    assert row[0] == 0.1
    assert row[1] == pytest.approx(res.config.speeds.s_star)
    assert row[4] == pytest.approx(res.u_report.band_min)
    assert row[6] == res.u_report.verdict
    assert (tmp_path / "sw" / "sweep.csv").exists()
    assert (tmp_path / "sw" / "run_000" / "snapshots.csv").exists()


def test_sweep_workers_deterministic(tmp_path):
    cfg = H.parse_config_text(DESK + "solver.t_final = 8.0\n")
    values = [0.05, 0.1, 0.15]
    rows1 = H.sweep(cfg, "s", values, workers=1, out_dir=tmp_path / "w1")
    rows4 = H.sweep(cfg, "s", values, workers=4, out_dir=tmp_path / "w4")
    assert rows1 == rows4
    assert ((tmp_path / "w1" / "sweep.csv").read_bytes()
            == (tmp_path / "w4" / "sweep.csv").read_bytes())


def test_sweep_records_failures_and_continues(tmp_path):
    cfg = H.parse_config_text(DESK + "solver.t_final = 8.0\n")
    rows = H.sweep(cfg, "d1", [1.0, -2.0, 1.5], workers=1, out_dir=None)
    assert len(rows) == 3
    assert rows[0][6] in ("persists", "inconclusive", "extinct")
    assert str(rows[1][6]).startswith("error:")
    assert rows[2][6] in ("persists", "inconclusive", "extinct")


def test_sweep_rejects_unknown_axis():
    cfg = H.parse_config_text(DESK)
    with pytest.raises(ConfigError):
        H.sweep(cfg, "theta", [0.1], workers=1, out_dir=None)


def test_identical_configs_identical_bundles(tmp_path):
    text = DESK + "solver.t_final = 12.0\n"
    H.run_experiment(H.parse_config_text(text), out_dir=tmp_path / "a")
    H.run_experiment(H.parse_config_text(text), out_dir=tmp_path / "b")
    for name in ("config_echo.txt", "speeds.csv", "hypotheses.csv", "snapshots.csv",
                 "level_sets_u.csv", "level_sets_v.csv", "persistence.csv"):
        assert ((tmp_path / "a" / name).read_bytes()
                == (tmp_path / "b" / name).read_bytes()), name
