"""Command-line interface.

Subcommands: ``speeds``, ``simulate``, ``sweep``, ``check-hypotheses``,
``verify-subsolution``.  Exit codes: 0 on success, 2 when ``--strict`` is
given and a hypothesis (or verification) check fails, 1 on runtime error.
The output root comes from ``--out``, the ``FRONTLAB_OUT`` environment
variable, or ``./frontlab-out``, in that order.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import FrontLabError
from .harness.config import parse_config
from .harness.csvio import fmt, rows_to_text
from .harness.runner import (HYPOTHESES_HEADER, PERSISTENCE_HEADER,
                             SPEEDS_HEADER, hypotheses_rows, persistence_rows,
                             run_experiment, speeds_row, sweep, sweep_table)
from .subsolution import construct_subsolution, verify_subsolution


def _out_dir(args, cfg_path: Path) -> Path:
    if args.out is not None:
        return Path(args.out)
    root = os.environ.get("FRONTLAB_OUT", "frontlab-out")
    return Path(root) / cfg_path.stem


def _cmd_speeds(args) -> int:
    cfg = parse_config(args.config)
    sys.stdout.write(rows_to_text(SPEEDS_HEADER, [speeds_row(cfg)]))
    return 0


def _cmd_check_hypotheses(args) -> int:
    cfg = parse_config(args.config)
    sys.stdout.write(rows_to_text(HYPOTHESES_HEADER, hypotheses_rows(cfg)))
    if args.strict and not cfg.hypotheses.all_ok:
        return 2
    return 0


def _cmd_simulate(args) -> int:
    cfg_path = Path(args.config)
    cfg = parse_config(cfg_path)
    out = _out_dir(args, cfg_path)
    result = run_experiment(cfg, out_dir=out)
    reports = [r for r in (result.u_report, result.v_report) if r is not None]
    if reports:
        sys.stdout.write(rows_to_text(PERSISTENCE_HEADER, persistence_rows(reports)))
    sys.stdout.write(f"bundle written to {out}\n")
    if args.strict and not cfg.hypotheses.all_ok:
        return 2
    return 0


def _cmd_sweep(args) -> int:
    cfg_path = Path(args.config)
    cfg = parse_config(cfg_path)
    values = [float(v) for v in args.values.replace(",", " ").split()]
    if not values:
        raise FrontLabError("sweep needs at least one value")
    out = _out_dir(args, cfg_path)
    rows = sweep(cfg, args.axis, values, workers=args.workers, out_dir=out)
    sys.stdout.write(sweep_table(rows))
    sys.stdout.write(f"bundle written to {out}\n")
    return 0


def _cmd_verify_subsolution(args) -> int:
    cfg = parse_config(args.config)
    vals = cfg.values
    c = vals["subsolution.c"]
    if c == "auto":
        raise FrontLabError(
            "subsolution.c could not be derived (needs b > 1); set it explicitly")
    window = vals["subsolution.window"]
    amplitude = vals["subsolution.amplitude"]
    p = construct_subsolution(
        cfg.params, c,
        predator_level=vals["subsolution.delta1"],
        prey_level=vals["subsolution.delta2"],
        rate_offset=vals["subsolution.rate_offset"],
        amplitude=None if amplitude == "auto" else amplitude,
        kernel=cfg.kernel1,
        window=None if window == "auto" else window,
        t_check=vals["subsolution.t_check"],
    )
    report = verify_subsolution(p, cfg.params, cfg.kernel1,
                                n_space=vals["subsolution.n_space"],
                                n_time=vals["subsolution.n_time"],
                                t_check=vals["subsolution.t_check"])
    lines = [
        "clause,value,ok",
        f"frame_speed,{fmt(p.frame_speed)},true",
        f"window,{fmt(p.window)},true",
        f"decay_rate,{fmt(p.decay)},true",
        f"amplitude_margin,{fmt(report.amplitude_margin)},{fmt(report.amplitude_margin > 0)}",
        f"tilt_residual,{fmt(report.tilt_residual)},{fmt(report.tilt_residual <= 1e-8)}",
        f"min_linear,{fmt(report.min_linear)},{fmt(report.min_linear > 0)}",
        f"min_reaction,{fmt(report.min_reaction)},{fmt(report.min_reaction > 0)}",
    ]
    verdict = "PASS" if report.ok else "FAIL(" + ",".join(report.failures) + ")"
    lines.append(f"{verdict} worst_margin={fmt(report.worst_margin)}")
    sys.stdout.write("\n".join(lines) + "\n")
    if args.strict and not report.ok:
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frontlab",
        description="Nonlocal predator-prey fronts in a shifting habitat: "
                    "speeds, simulations, persistence bands, sub-solution checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="experiment configuration file")
        p.add_argument("--out", default=None, help="output directory (overrides FRONTLAB_OUT)")
        p.add_argument("--strict", action="store_true",
                       help="exit 2 when hypothesis/verification checks fail")
        p.set_defaults(fn=fn)
        return p

    add("speeds", _cmd_speeds, "print the variational speeds CSV row")
    add("simulate", _cmd_simulate, "run one experiment and write its bundle")
    p_sweep = add("sweep", _cmd_sweep, "run one experiment per axis value")
    p_sweep.add_argument("--axis", required=True,
                         help="sweep axis: s, a, b, d1, d2, or eta")
    p_sweep.add_argument("--values", required=True,
                         help="comma- or space-separated axis values")
    p_sweep.add_argument("--workers", type=int, default=1)
    add("check-hypotheses", _cmd_check_hypotheses, "print the hypothesis report CSV")
    add("verify-subsolution", _cmd_verify_subsolution,
        "construct and verify the moving-window sub-solution")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FrontLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
