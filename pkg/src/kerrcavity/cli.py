"""Command-line front end: ``run``, ``sweep`` and ``validate`` subcommands.

Configuration is explicit: every key can come from a flat ``key = value``
config file (# comments allowed) and every key has a corresponding CLI
flag, with flags taking precedence.  Exit codes are scriptable:

    0  success
    1  invalid configuration (message names the field)
    2  unwritable output path
    3  numerical divergence (message names method and time)
    4  validation failure
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .model import ModelParams
from .propagate import DivergenceError, TimeGrid
from .runs import (
    METHODS,
    PRESETS,
    ConfigError,
    RunConfig,
    default_dim,
    run,
    sweep,
)

__all__ = ["main", "build_parser", "parse_config_file", "config_from_args"]

DEFAULTS = {
    "omega0": 1.0,
    "epsilon": 0.1,
    "kerr": 0.0,
    "dim": None,       # resolved by the declared default rule
    "dt": 1e-3,
    "tmax": 60.0,
    "stride": 100,
    "methods": "analytic,full",
    "output": "run.csv",
    "preset": None,
    "workers": 1,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerrcavity",
        description="Photon generation from vacuum in a Kerr cavity with "
                    "modulated frequency: closed forms vs converged numerics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(sp):
        sp.add_argument("--config", type=str, default=None,
                        help="flat key = value config file")
        sp.add_argument("--preset", choices=sorted(PRESETS), default=None)
        sp.add_argument("--omega0", type=float, default=None)
        sp.add_argument("--epsilon", type=float, default=None)
        sp.add_argument("--kerr", type=float, default=None)
        sp.add_argument("--dim", type=int, default=None)
        sp.add_argument("--dt", type=float, default=None)
        sp.add_argument("--tmax", type=float, default=None)
        sp.add_argument("--stride", type=int, default=None)
        sp.add_argument("--methods", type=str, default=None,
                        help=f"comma list from {METHODS}")
        sp.add_argument("--output", type=str, default=None)
        sp.add_argument("--workers", type=int, default=None)

    sp_run = sub.add_parser("run", help="single run or figure preset -> CSV")
    add_run_flags(sp_run)

    sp_sweep = sub.add_parser("sweep", help="repeat a run over a value list")
    add_run_flags(sp_sweep)
    sp_sweep.add_argument("--parameter", required=True,
                          choices=("kerr", "epsilon", "omega0", "dim", "dt"))
    sp_sweep.add_argument("--values", required=True,
                          help="comma-separated values")

    sp_val = sub.add_parser(
        "validate", help="run the invariant and acceptance suite")
    sp_val.add_argument("--quick", action="store_true",
                        help="skip the long preset-integration checks")
    return parser


def parse_config_file(path: str) -> dict:
    """Parse flat ``key = value`` lines; '#' starts a comment."""
    values: dict = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config",
                              f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in DEFAULTS:
            raise ConfigError(key, f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _coerce(key: str, value):
    if value is None or key not in DEFAULTS:
        return value
    if key in ("omega0", "epsilon", "kerr", "dt", "tmax"):
        return float(value)
    if key in ("dim", "stride", "workers"):
        return int(value)
    return value


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge defaults < config file < explicit flags into a RunConfig."""
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        for key, value in parse_config_file(args.config).items():
            merged[key] = _coerce(key, value)
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag

    try:
        tmax = float(merged["tmax"])
        dt = float(merged["dt"])
        stride = int(merged["stride"])
        params = ModelParams(
            omega0=float(merged["omega0"]),
            epsilon=float(merged["epsilon"]),
            kerr=float(merged["kerr"]),
            dim=int(merged["dim"]) if merged["dim"] is not None
            else default_dim(float(merged["omega0"]), float(merged["epsilon"]),
                             float(merged["kerr"]), tmax),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(_offending_field(merged, exc), str(exc)) from exc

    try:
        grid = TimeGrid(0.0, tmax, dt, stride)
    except ValueError as exc:
        raise ConfigError("dt", str(exc)) from exc

    methods = tuple(m.strip() for m in str(merged["methods"]).split(",")
                    if m.strip())
    return RunConfig(
        params=params,
        grid=grid,
        methods=methods,
        output_path=str(merged["output"]),
        preset=merged["preset"],
        workers=int(merged["workers"]),
    )


def _offending_field(merged: dict, exc: Exception) -> str:
    text = str(exc)
    for key in ("omega0", "epsilon", "kerr", "dim"):
        if key in text:
            return key
    return "params"


def _cmd_run(args) -> int:
    config = config_from_args(args)
    result = run(config)
    n_series = len(result.photon)
    print(f"wrote {config.output_path} ({n_series} series,"
          f" {result.metadata['wall_time_s']} s)")
    return 0


def _cmd_sweep(args) -> int:
    config = config_from_args(args)
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("values", "empty sweep value list")
    typed = [int(v) if args.parameter == "dim" else float(v) for v in values]
    index = sweep(config, args.parameter, typed)
    print(f"wrote sweep index {index}")
    return 0


def _cmd_validate(args) -> int:
    from .validate import run_checks

    report = run_checks(quick=args.quick)
    failures = [c for c in report if not c.passed]
    for check in report:
        print(check.status_line())
    print(f"\n{len(report) - len(failures)} passed, {len(failures)} failed")
    if failures:
        print("first failing check:", failures[0].name)
    return 4 if failures else 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "validate":
            return _cmd_validate(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"invalid configuration ({exc.field}): {exc}", file=sys.stderr)
        return 1
    except (PermissionError, IsADirectoryError, FileNotFoundError, OSError) as exc:
        print(f"output path error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
