"""Command-line interface: sweep, figure, sensitivity, visibility, validate.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 per-point
errors present in a sweep.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__, closed_form, metrics, sweep
from .config import InterferometerConfig
from .errors import (
    DomainError,
    StationaryPointError,
    TruncationError,
    UndefinedVisibilityError,
)
from .metrics import ShotNoiseConvention

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_POINT_ERRORS = 3

_CONFIG_KEYS = (
    "g1", "g2", "theta", "ts2", "ti2", "n_i", "snl_convention",
    "axis", "lo", "hi", "steps", "base_ts2", "base_ti2", "metrics",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_cfg_flags(p: argparse.ArgumentParser):
    # long flag names match config-file keys exactly
    p.add_argument("--g1", type=float, default=None)
    p.add_argument("--g2", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--ts2", type=float, default=None)
    p.add_argument("--ti2", type=float, default=None)
    p.add_argument("--n_i", type=float, default=None)
    p.add_argument(
        "--snl_convention",
        choices=[c.value for c in ShotNoiseConvention],
        default=None,
    )


def _cfg_from_args(args, defaults=None) -> InterferometerConfig:
    d = defaults or {}
    def pick(flag, key, fallback):
        v = getattr(args, flag)
        return v if v is not None else d.get(key, fallback)
    return InterferometerConfig(
        g1=pick("g1", "g1", 0.0),
        g2=pick("g2", "g2", 0.0),
        theta=pick("theta", "theta", 0.0),
        t_s=math.sqrt(pick("ts2", "ts2", 1.0)),
        t_i=math.sqrt(pick("ti2", "ti2", 1.0)),
        n_i=pick("n_i", "n_i", 0.0),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="su11", description=__doc__)
    parser.add_argument("--version", action="version", version=f"su11sim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    p.add_argument("--config", type=Path, help="flat key/value config file")
    _add_cfg_flags(p)
    p.add_argument("--axis", choices=sweep.AXES, default=None)
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--base_ts2", type=float, default=None)
    p.add_argument("--base_ti2", type=float, default=None)
    p.add_argument("--metrics", type=str, default=None,
                   help="comma-separated subset of " + ",".join(sweep.METRICS))
    p.add_argument("--axis-total", action="store_true",
                   help="treat the swept transmission as total, not an extra filter")
    p.add_argument("--out", type=Path, default=None, help="CSV output path (default stdout)")
    p.add_argument("--json", type=Path, default=None, help="also write a JSON mirror here")

    p = sub.add_parser("figure", help="emit one of the preset figure tables")
    p.add_argument("name", choices=sweep.FIGURES)
    p.add_argument("--outdir", type=Path, default=Path("."))
    p.add_argument(
        "--snl_convention",
        choices=[c.value for c in ShotNoiseConvention],
        default=ShotNoiseConvention.PAIR_AFTER_OPA1.value,
    )
    p.add_argument("--axis-total", action="store_true")
    p.add_argument("--json", action="store_true", help="also write a JSON mirror")

    p = sub.add_parser("sensitivity", help="optimal phase sensitivity for one config")
    _add_cfg_flags(p)

    p = sub.add_parser("visibility", help="interference visibility for one config")
    _add_cfg_flags(p)

    p = sub.add_parser("validate", help="three-way oracle agreement suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--points", type=int, default=100)

    return parser


def _cmd_sweep(args) -> int:
    entries: dict[str, str] = {}
    if args.config is not None:
        entries = sweep.parse_config_text(args.config.read_text())
        unknown = set(entries) - set(_CONFIG_KEYS) - {"axis_total"}
        if unknown:
            print(f"su11: unknown config keys: {sorted(unknown)}", file=sys.stderr)
            return EXIT_USAGE
    # flag overrides, long names matching config keys
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            entries[key] = str(flag)
    if args.axis_total:
        entries["axis_total"] = "true"
    spec = sweep.spec_from_config(entries)
    rows = sweep.run_sweep(spec)
    csv_text = sweep.sweep_to_csv(spec, rows)
    if args.out is not None:
        args.out.write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.json is not None:
        args.json.write_text(sweep.sweep_to_json(spec, rows))
    if any(row.error for row in rows):
        return EXIT_POINT_ERRORS
    return EXIT_OK


def _cmd_figure(args) -> int:
    paths = sweep.write_figure(
        args.name,
        args.outdir,
        convention=ShotNoiseConvention(args.snl_convention),
        axis_total=args.axis_total,
        json_mirror=args.json,
    )
    for path in paths:
        print(path)
    return EXIT_OK


def _cmd_sensitivity(args) -> int:
    cfg = _cfg_from_args(args)
    conv = ShotNoiseConvention(args.snl_convention or "after_opa1")
    report = metrics.optimal_sensitivity(cfg, conv)
    print(json.dumps({
        "theta_opt": report.theta_opt,
        "dtheta2": report.dtheta2,
        "dtheta2_shotnoise": report.dtheta2_shotnoise,
        "db_vs_shotnoise": report.db_vs_shotnoise,
        "snl_convention": report.snl_convention.value,
    }, indent=2))
    return EXIT_OK


def _cmd_visibility(args) -> int:
    cfg = _cfg_from_args(args)
    v_num = metrics.visibility_numeric(cfg)
    v_cf = closed_form.visibility(cfg)
    print(json.dumps({"visibility": v_num, "visibility_closed_form": v_cf}, indent=2))
    return EXIT_OK


def _cmd_validate(args) -> int:
    report = sweep.validate(args.seed, args.points)
    print(f"validation: {report.points} points, seed {args.seed}")
    for check, dev in sorted(report.worst.items()):
        print(f"  worst {check}: {dev:.3e}")
    for flag in report.flagged:
        print(f"  flagged: {flag}")
    if report.failures:
        for failure in report.failures:
            print(f"  FAIL {failure}")
        print("validation: FAILED")
        return EXIT_VALIDATION
    print("validation: all checks passed")
    return EXIT_OK


_COMMANDS = {
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
    "sensitivity": _cmd_sensitivity,
    "visibility": _cmd_visibility,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (
        DomainError,
        UndefinedVisibilityError,
        StationaryPointError,
        TruncationError,
    ) as exc:
        print(f"su11: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
