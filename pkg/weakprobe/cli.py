"""
Command-line front end

Exit codes: 0 ok, 1 other simulator error, 2 usage or bad state spec, 3 config error,
4 post-selection vanishes (exp1), 5 degenerate calibration design.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from . import __version__, load
from .commands import COMMANDS, set_services
from .errors import (
    ConfigError,
    DegenerateDesignError,
    PostselectionVanishesError,
    StateSpecError,
    WeakProbeError,
)
from .models import SimulatorConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_POSTSELECTION = 4
EXIT_DEGENERATE = 5

# most specific first
EXIT_CODES = (
    (StateSpecError, EXIT_USAGE),
    (ConfigError, EXIT_CONFIG),
    (PostselectionVanishesError, EXIT_POSTSELECTION),
    (DegenerateDesignError, EXIT_DEGENERATE),
    (WeakProbeError, EXIT_ERROR),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='weakprobe',
        description='Direct measurement of polarization states via weak values (simulation).',
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='warnings and errors only')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )
    logging.getLogger('weakprobe').setLevel(level)


def exit_code_for(error: WeakProbeError) -> int:
    for kind, code in EXIT_CODES:
        if isinstance(error, kind):
            return code
    return EXIT_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    configure_logging(args.verbose, args.quiet)

    try:
        config_path = getattr(args, 'config', None)
        config = SimulatorConfig.from_file(config_path) if config_path else SimulatorConfig()
        set_services(load(config))
        return args.handler(args)
    except WeakProbeError as e:
        code = exit_code_for(e)
        print(f"weakprobe {args.command}: {e}", file=sys.stderr)
        logger.debug(f"{type(e).__name__} -> exit {code}")
        return code


if __name__ == '__main__':
    sys.exit(main())
