"""Command-line entry point: python -m services.cli.main COMMAND [flags]."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from services.cli import commands
from services.cli.api.schemas import RunConfig
from shared.config import settings
from shared.errors import ConfigError, DomainError, FormatError, HyperGlueError
from shared.logging_config import configure_logging
from shared.schemas import Tolerance

logger = logging.getLogger(__name__)

COMMANDS = ("glue-dist", "check", "repro-s5", "sweep", "plot")
DEFAULT_OUT = "results"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperglue",
        description="Gluing constructions for hyperconvex spaces: distances, property checks and the half-plane example",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS, help="Command to run (defaults to the config's)")
    parser.add_argument("--config", type=Path, help="RunConfig JSON document")
    parser.add_argument("--seed", type=int, help="Master seed for randomized commands")
    parser.add_argument("--out", type=Path, help="Output directory")
    parser.add_argument("--trials", type=int, help="Trials per check or per sweep cell")
    parser.add_argument("--eps", type=float, help="Feasibility tolerance eps_feas")
    parser.add_argument("--x", help="First point for glue-dist, SHEET:X,Y")
    parser.add_argument("--y", help="Second point for glue-dist, SHEET:X,Y")
    parser.add_argument("--log-level", default=None, help="Log level (default from settings)")
    parser.add_argument("--log-json", action="store_true", help="JSON log records on stderr")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Document over settings, flags over the document."""
    run = RunConfig.load(args.config) if args.config else RunConfig()
    update = {}
    if args.seed is not None:
        update["seed"] = args.seed
    if args.out is not None:
        update["out"] = str(args.out)
    if args.eps is not None:
        base = run.tolerance or Tolerance()
        try:
            update["tolerance"] = Tolerance(eps_feas=args.eps, eps_eq=min(base.eps_eq, args.eps))
        except ValidationError as e:
            raise ConfigError(f"Invalid --eps {args.eps}: {e.errors(include_url=False)}") from e
    if args.trials is not None and args.trials < 1:
        raise ConfigError(f"--trials must be positive, got {args.trials}")
    return run.model_copy(update=update)


def dispatch(command: str, run: RunConfig, args: argparse.Namespace) -> int:
    out = Path(run.out or DEFAULT_OUT)
    if command == "glue-dist":
        return commands.cmd_glue_dist(run, args.x, args.y, Path(run.out) if run.out else None)
    if command == "check":
        return commands.cmd_check(run, out, args.trials)
    if command == "repro-s5":
        return commands.cmd_repro_s5(run, out, args.trials)
    if command == "sweep":
        return commands.cmd_sweep(run, out, args.trials)
    return commands.cmd_plot(run, out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return commands.EXIT_OK if e.code == 0 else commands.EXIT_INPUT

    configure_logging(args.log_level or settings.log_level, args.log_json or settings.log_json)

    try:
        run = resolve_config(args)
        command = args.command or run.command
        if command is None:
            raise ConfigError("No command given on the command line or in the config")
        logger.info(f"Running {command}", extra={"command": command, "seed": run.seed})
        code = dispatch(command, run, args)
    except (ConfigError, FormatError, DomainError, ValidationError) as e:
        logger.error(f"Invalid input: {e}")
        return commands.EXIT_INPUT
    except HyperGlueError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return commands.EXIT_FALSIFIED

    logger.info(f"{command} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
