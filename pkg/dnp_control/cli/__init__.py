"""Command line frontend: ``dnp-control [options] COMMAND``.

Exit status is 0 on success, 2 for configuration or argument errors, 3 for
numerical failures and 4 for anything else.
"""

import sys
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Optional, Sequence

from dnp_control import __version__
from dnp_control.cli.commands import COMMANDS, CommandOutput, dispatch
from dnp_control.cli.config import DEFAULT_PROFILE, RunConfig, parse_config
from dnp_control.harness import ANGLE_MAP_PRESETS, SweepParameter
from dnp_control.pulse import PulseMode
from dnp_control.util import ConfigError, Logger, LogLevel, NumericalError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_INTERNAL = 4


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="dnp-control",
        description="Open system DNP simulation and on/off pulse design.",
    )
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        help=f"run configuration (default: {DEFAULT_PROFILE.name})",
    )
    parser.add_argument("--out", type=Path, default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="seed of every random draw")
    parser.add_argument("--threads", type=int, default=None, help="worker thread cap")

    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log debug messages")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log warnings only")

    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    commands.add_parser("channel-check", help="CPTP check of every built channel")

    optimize = commands.add_parser("optimize", help="search an on/off pulse")
    optimize.add_argument("--mode", choices=[mode.value for mode in PulseMode])
    optimize.add_argument("--pulses", type=int, help="number of on segments")
    optimize.add_argument("--restarts", type=int, help="independent simplex searches")

    buildup = commands.add_parser("buildup", help="enhancement under a repeated pulse")
    buildup.add_argument(
        "--pulse", help="hard, ideal-oe, ideal-se or the path of a pulse JSON file"
    )

    angle_map = commands.add_parser("angle-map", help="enhancement over rotation angles")
    angle_map.add_argument("--preset", choices=sorted(ANGLE_MAP_PRESETS))
    angle_map.add_argument("--grid", type=int, help="points per axis")

    sweep = commands.add_parser("sweep", help="enhancement against one parameter")
    sweep.add_argument("--parameter", choices=[parameter.value for parameter in SweepParameter])

    commands.add_parser("dq-leakage", help="effect of double quantum relaxation")

    return parser


def _log_level(options: Namespace) -> LogLevel:
    if options.verbose:
        return LogLevel.DEBUG
    if options.quiet:
        return LogLevel.WARNING

    return LogLevel.INFO


def run(options: Namespace, version: str) -> CommandOutput:
    """Load the configuration named by `options` and run its command."""
    if options.threads is not None and options.threads < 1:
        raise ConfigError([f"--threads: must be >= 1, got {options.threads}"])

    config: RunConfig = parse_config(options.config).with_overrides(options.seed, options.out)
    if problems := config.check():
        raise ConfigError(problems)

    return dispatch(config, options.command, options, version, options.threads)


def main(argv: Optional[Sequence[str]] = None) -> int:
    options = build_parser().parse_args(argv)
    Logger.init(
        Logger.get_current_solution(), _log_level(options), stream_to=sys.stderr, force=True
    )

    try:
        output = run(options, __version__)
    except ConfigError as error:
        for line in error.errors:
            Logger.error(f"config: {line}")
        return EXIT_CONFIG
    except NumericalError as error:
        Logger.error(f"numerical failure: {error}")
        return EXIT_NUMERIC
    except Exception as error:  # pylint: disable=broad-except
        Logger.critical(f"internal error: {type(error).__name__}: {error}")
        return EXIT_INTERNAL

    for line in output.summary:
        Logger.info(line)

    return EXIT_OK if output.passed else EXIT_NUMERIC


__all__ = ["COMMANDS", "build_parser", "dispatch", "main", "parse_config", "run"]
