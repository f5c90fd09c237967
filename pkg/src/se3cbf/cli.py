"""Command-line entry point: run scenarios, sweeps, and self-verification.

Exit codes: 0 success, 1 infeasibility abort, 2 configuration error.
stdout carries the run summary; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .qp import Infeasible
from .scenarios import (
    PRESETS,
    ConfigError,
    ScenarioConfig,
    apply_overrides,
    load_config,
    run_to_files,
)
from .verify import run_verification

__all__ = ["main", "entry"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="se3cbf",
        description="Safety-filtered rigid-body simulations on SE(3)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--preset", choices=sorted(PRESETS), help="built-in scenario")
        group.add_argument("--config", type=Path, help="scenario config file")
        p.add_argument("--alpha-e", type=float, help="energy-augmentation gain override")
        p.add_argument("--alpha", type=float, help="class-K coefficient override")
        p.add_argument("--emax", type=float, help="directional energy bound override [J]")
        p.add_argument("--dt", type=float, help="integrator step override [s]")
        p.add_argument("--duration", type=float, help="horizon override [s]")
        p.add_argument("--no-filter", action="store_true", help="bypass the safety filter")
        p.add_argument("--out", type=Path, default=Path("results"), help="output directory")

    p_run = sub.add_parser("run", help="simulate one scenario and write CSV + summary")
    add_common(p_run)

    p_sweep = sub.add_parser("sweep", help="repeat a scenario over a parameter list")
    add_common(p_sweep)
    p_sweep.add_argument(
        "--param",
        required=True,
        choices=["alpha-e", "alpha", "emax", "dt", "duration"],
        help="parameter to vary",
    )
    p_sweep.add_argument(
        "--values", required=True, help="comma-separated values for the swept parameter"
    )

    sub.add_parser("verify", help="run the built-in oracle and property checks")
    sub.add_parser("list", help="list built-in presets")
    return parser


def _resolve_config(args) -> ScenarioConfig:
    if args.preset is not None:
        builder = PRESETS[args.preset]
        if args.preset == "slit":
            config = builder(args.alpha_e) if args.alpha_e is not None else builder()
            if args.alpha is not None:
                config = replace(config, classk_alpha=float(args.alpha))
        else:
            config = builder(args.alpha) if args.alpha is not None else builder()
            if args.alpha_e is not None:
                raise ConfigError("alpha-e does not apply to the landing preset")
    else:
        config = load_config(args.config)
        if args.alpha_e is not None:
            if not config.slits:
                raise ConfigError("alpha-e override needs slit barriers")
            config = replace(config, alpha_e=float(args.alpha_e))
        if args.alpha is not None:
            if not args.alpha > 0.0:
                raise ConfigError(f"alpha must be positive, got {args.alpha}")
            config = replace(config, classk_alpha=float(args.alpha))
    return apply_overrides(
        config,
        dt=args.dt,
        duration=args.duration,
        emax=args.emax,
        no_filter=args.no_filter,
    )


def _execute(config: ScenarioConfig, outdir: Path, basename: str | None = None) -> int:
    print(f"config {basename or config.name} digest {config.digest()}", file=sys.stderr)
    try:
        _, summary_path, _ = run_to_files(config, outdir, basename)
    except Infeasible as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(summary_path.read_text())
    return 0


def _cmd_run(args) -> int:
    config = _resolve_config(args)
    return _execute(config, args.out)


def _sweep_value_name(value: float) -> str:
    return repr(float(value)).replace("-", "m").replace(".", "p")


def _cmd_sweep(args) -> int:
    try:
        values = [float(tok) for tok in args.values.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse sweep values '{args.values}'") from None
    if not values:
        raise ConfigError("sweep needs at least one value")
    status = 0
    for value in values:
        sweep_args = argparse.Namespace(**vars(args))
        setattr(sweep_args, args.param.replace("-", "_"), value)
        config = _resolve_config(sweep_args)
        basename = f"{config.name}_{args.param.replace('-', '_')}_{_sweep_value_name(value)}"
        status = max(status, _execute(config, args.out, basename))
    return status


def _cmd_list() -> int:
    for name in sorted(PRESETS):
        config = PRESETS[name]()
        print(f"{name}: {config.kind}, duration {config.duration} s, dt {config.dt} s")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, 0 on --help; keep the contract.
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "verify":
            return run_verification()
        if args.command == "list":
            return _cmd_list()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {args.command}")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
