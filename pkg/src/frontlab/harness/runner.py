"""Experiment orchestration: single runs, artifact bundles, and sweeps."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ..dynamics import Trajectory, make_initial, simulate
from ..errors import FrontLabError
from ..observers import (LevelSetSeries, PersistenceReport, frame_band_min,
                         level_set_series)
from .config import (ExperimentConfig, echo_config, override_config_text,
                     parse_config_text, sweep_axis_key)
from .csvio import rows_to_text, write_csv

SPEEDS_HEADER = "s_star,lambda1,s_lower_star,lambda2,s_underline"
SNAPSHOT_HEADER = "t,x,u,v"
LEVELSET_HEADER = "t,theta,x_left,x_right"
PERSISTENCE_HEADER = "species,eta,epsilon,band_min,verdict"
HYPOTHESES_HEADER = "clause,margin,ok"
SWEEP_HEADER = ("value,s_star,s_lower_star,s_underline,"
                "u_band_min,v_band_min,u_verdict,v_verdict")


def speeds_row(cfg: ExperimentConfig) -> tuple:
    sp = cfg.speeds
    if sp is None:
        from ..speeds import prey_speed
        pr = prey_speed(cfg.params, cfg.kernel1)
        return (pr.speed, pr.rate, float("nan"), float("nan"), float("nan"))
    return (sp.s_star, sp.rate1, sp.s_lower_star, sp.rate2, sp.s_underline)


def hypotheses_rows(cfg: ExperimentConfig) -> list[tuple]:
    return [(clause, margin, ok) for clause, margin, ok in cfg.hypotheses.rows()]


def snapshot_rows(traj: Trajectory):
    x = traj.grid.x
    for i, t in enumerate(traj.times):
        ui = traj.u[i]
        vi = traj.v[i]
        for j in range(x.size):
            yield (float(t), float(x[j]), float(ui[j]), float(vi[j]))


def level_set_rows(series_left: LevelSetSeries, series_right: LevelSetSeries):
    rows = []
    for i in range(series_right.times.size):
        rows.append((float(series_right.times[i]), series_right.theta,
                     float(series_left.positions[i]), float(series_right.positions[i])))
    return rows


def persistence_rows(reports: list[PersistenceReport]) -> list[tuple]:
    return [(r.species, r.eta, r.epsilon, r.band_min, r.verdict) for r in reports]


@dataclass
class ExperimentResult:
    """Everything a single experiment produced, plus where it was written."""

    config: ExperimentConfig
    trajectory: Trajectory
    u_series: LevelSetSeries
    v_series: LevelSetSeries
    u_report: PersistenceReport | None
    v_report: PersistenceReport | None
    out_dir: Path | None


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> ExperimentResult:
    """Simulate one configuration and emit the artifact bundle.

    Bundle: config echo, speeds CSV, snapshots CSV, one level-set CSV per
    species, persistence CSV, hypotheses CSV.  Pass ``out_dir=None`` to
    skip writing and keep everything in memory.
    """
    initial = make_initial(cfg.u_spec, cfg.v_spec, cfg.grid, cfg.params)
    traj = simulate(cfg.params, cfg.profile, cfg.kernel1, cfg.kernel2, cfg.grid,
                    initial, dt=cfg.dt, t_final=cfg.t_final,
                    snapshot_stride=cfg.snapshot_stride,
                    boundary_monitor=cfg.boundary_monitor)
    u_left = level_set_series(traj, cfg.theta, "u", "left")
    u_right = level_set_series(traj, cfg.theta, "u", "right")
    v_left = level_set_series(traj, cfg.theta, "v", "left")
    v_right = level_set_series(traj, cfg.theta, "v", "right")

    u_report = v_report = None
    if cfg.band is not None:
        u_report = frame_band_min(traj, cfg.band, "u")
        v_report = frame_band_min(traj, cfg.band, "v")

    out_path = None
    if out_dir is not None:
        out_path = Path(out_dir)
        out_path.mkdir(parents=True, exist_ok=True)
        (out_path / "config_echo.txt").write_text(echo_config(cfg), encoding="utf-8")
        write_csv(out_path / "speeds.csv", SPEEDS_HEADER, [speeds_row(cfg)])
        write_csv(out_path / "hypotheses.csv", HYPOTHESES_HEADER, hypotheses_rows(cfg))
        write_csv(out_path / "snapshots.csv", SNAPSHOT_HEADER, snapshot_rows(traj))
        write_csv(out_path / "level_sets_u.csv", LEVELSET_HEADER,
                  level_set_rows(u_left, u_right))
        write_csv(out_path / "level_sets_v.csv", LEVELSET_HEADER,
                  level_set_rows(v_left, v_right))
        reports = [r for r in (u_report, v_report) if r is not None]
        if reports:
            write_csv(out_path / "persistence.csv", PERSISTENCE_HEADER,
                      persistence_rows(reports))
        else:
            write_csv(out_path / "persistence.csv", PERSISTENCE_HEADER,
                      [("u", float("nan"), cfg.values["band.epsilon"], float("nan"), "unavailable"),
                       ("v", float("nan"), cfg.values["band.epsilon"], float("nan"), "unavailable")])
    return ExperimentResult(config=cfg, trajectory=traj,
                            u_series=u_right, v_series=v_right,
                            u_report=u_report, v_report=v_report,
                            out_dir=out_path)


def sweep_row(value: float, result: ExperimentResult | None,
              error: str | None = None) -> tuple:
    if result is None:
        return (value, float("nan"), float("nan"), float("nan"),
                float("nan"), float("nan"), f"error:{error}", f"error:{error}")
    cfg = result.config
    s_star, _, s_lower, _, s_under = speeds_row(cfg)
    if result.u_report is not None:
        u_min, u_verdict = result.u_report.band_min, result.u_report.verdict
        v_min, v_verdict = result.v_report.band_min, result.v_report.verdict
    else:
        u_min = v_min = float("nan")
        u_verdict = v_verdict = "unavailable"
    return (value, s_star, s_lower, s_under, u_min, v_min, u_verdict, v_verdict)


def _sweep_worker(task) -> tuple:
    text, key, value, run_dir = task
    try:
        cfg = parse_config_text(override_config_text(text, key, value))
        result = run_experiment(cfg, out_dir=run_dir)
        return sweep_row(value, result)
    except FrontLabError as exc:
        return sweep_row(value, None, error=type(exc).__name__)


def sweep(cfg: ExperimentConfig, axis: str, values, workers: int = 1,
          out_dir=None) -> list[tuple]:
    """Run one experiment per axis value; failures are recorded in-row.

    Runs are independent; ``workers > 1`` distributes them over a process
    pool without changing row order or content.
    """
    key = sweep_axis_key(axis)
    out_path = Path(out_dir) if out_dir is not None else None
    tasks = []
    for i, value in enumerate(values):
        run_dir = None if out_path is None else out_path / f"run_{i:03d}"
        tasks.append((cfg.raw_text, key, float(value), run_dir))
    if workers <= 1:
        rows = [_sweep_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_worker, tasks))
    if out_path is not None:
        out_path.mkdir(parents=True, exist_ok=True)
        write_csv(out_path / "sweep.csv", SWEEP_HEADER, rows)
    return rows


def sweep_table(rows: list[tuple]) -> str:
    return rows_to_text(SWEEP_HEADER, rows)
