import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from config import get_settings
from errors import ArflowError
from schemas import Command, ErrorReport, RunConfig, SupportMode
from services import run_command

logger = logging.getLogger(__name__)

TOLERANCE_FLAGS = (
    "tol_unit",
    "tol_cluster",
    "tol_proj",
    "tol_nilp",
    "tol_drazin",
    "tol_imag",
    "tol_flow",
    "tol_trunc",
)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output-dir", type=Path, default=None)
    parser.add_argument("--t-min", type=int, default=None)
    parser.add_argument("--t-max", type=int, default=None)
    for name in TOLERANCE_FLAGS:
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arflow",
        description="Solve x_t = Phi x_{t-1} + eps_t by spectral projection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    commands = {
        Command.classify: "classify the spectrum of phi",
        Command.decompose: "split a solution x into its six flows",
        Command.synthesize: "build the solution for given initial conditions",
        Command.verify: "check that x solves the recursion",
        Command.drazin: "compute the Drazin inverse of phi",
        Command.project: "compute a spectral projector of phi",
        Command.diagnose: "growth diagnostic for an innovation sequence",
    }
    for command, help_text in commands.items():
        p = sub.add_parser(command.value, help=help_text)
        _add_common(p)
        if command != Command.diagnose:
            p.add_argument("--phi", type=Path, default=None)
        if command in (Command.decompose, Command.synthesize, Command.verify, Command.diagnose):
            p.add_argument("--eps", type=Path, default=None)
        if command in (Command.decompose, Command.verify):
            p.add_argument("--x", type=Path, default=None)
        if command in (Command.decompose, Command.synthesize):
            p.add_argument(
                "--mode", choices=[m.value for m in SupportMode], default=SupportMode.compact.value
            )
        if command == Command.synthesize:
            p.add_argument("--initial", type=Path, default=None)
        if command == Command.project:
            p.add_argument(
                "--subset", choices=["zero", "forward", "backward", "unit", "stable"], default=None
            )
            p.add_argument("--theta", type=float, default=None)
        if command == Command.diagnose:
            p.add_argument("--r", dest="r_grid", type=float, action="append", default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    settings = get_settings()
    overrides = {name: getattr(args, name) for name in TOLERANCE_FLAGS}
    values = {
        "command": args.command,
        "output_dir": args.output_dir or settings.output_dir,
        "t_min": args.t_min,
        "t_max": args.t_max,
        "tolerances": settings.tolerances(**overrides),
    }
    for name in ("phi", "eps", "x", "initial", "mode", "subset", "theta", "r_grid"):
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    return RunConfig(**values)


def _emit_error(name: str, message: str, exit_code: int, details: Optional[dict] = None) -> int:
    report = ErrorReport(error=name, message=message, exit_code=exit_code, details=details or {})
    sys.stderr.write(report.model_dump_json() + "\n")
    return exit_code


def run(config: RunConfig) -> int:
    try:
        report = run_command(config)
    except ArflowError as exc:
        logger.info(f"run: command={config.command.value} error={type(exc).__name__}")
        return _emit_error(type(exc).__name__, exc.message, exc.exit_code, exc.details)
    except OSError as exc:
        return _emit_error("IOError", str(exc), 2)
    sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    logging.basicConfig(level=settings.log_level, stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except (ValidationError, ValueError) as exc:
        message = str(exc)
        if isinstance(exc, ValidationError):
            message = "; ".join(err["msg"] for err in exc.errors())
        return _emit_error("InputError", message, 2)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
