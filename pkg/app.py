# app.py
import argparse
import logging
import sys

from config.settings import (
    ATLAS_SETTINGS,
    CURVE_SETTINGS,
    FIELD_SETTINGS,
    RUN_SETTINGS,
    TOWER_SETTINGS,
)
from core.errors import GoldenDataError, InvalidInputError, KTheoryError
from cli.commands import COMMANDS
from cli.run_config import RunConfig

logger = logging.getLogger("app")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=RUN_SETTINGS["seed"])
    common.add_argument("--enum-bound", type=int, default=CURVE_SETTINGS["enumeration_bound"])
    common.add_argument("--degree-cap", type=int, default=FIELD_SETTINGS["degree_cap"])
    common.add_argument("--bits-budget", type=int, default=TOWER_SETTINGS["bits_budget"])
    common.add_argument("--format", choices=RUN_SETTINGS["formats"], default=RUN_SETTINGS["format"])
    noise = common.add_mutually_exclusive_group()
    noise.add_argument("--verbose", action="store_true")
    noise.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog="app.py",
        description="Higher K-groups of elliptic curves over small prime fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    info = sub.add_parser("curve-info", parents=[common], help="points, trace and inverse roots of one curve")
    info.add_argument("curve", help="p:a2:a4:a6")

    kg = sub.add_parser("kgroup", parents=[common], help="orders and structures of K_2m")
    kg.add_argument("curve", help="p:a2:a4:a6")
    kg.add_argument("--m", default="1", help="A..B or a single A")
    kg.add_argument("--n", type=int, default=RUN_SETTINGS["n"], help="extension degree of the base field")

    tw = sub.add_parser("tower", parents=[common], help="l-Sylow growth along the l-power tower")
    tw.add_argument("curve", help="p:a2:a4:a6")
    tw.add_argument("--l", type=int, required=True)

    ver = sub.add_parser("verify", parents=[common], help="recompute the golden tables")
    ver.add_argument("--table", action="append", choices=ATLAS_SETTINGS["tables"])
    ver.add_argument("--data-dir")
    ver.add_argument("--workers", type=int, default=RUN_SETTINGS["workers"])

    tb = sub.add_parser("tables", parents=[common], help="regenerate a table for F_p")
    tb.add_argument("--field", type=int, required=True)
    return parser


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    # stdout carries results only
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s %(message)s", force=True)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    configure_logging(args.verbose, args.quiet)

    try:
        cfg = RunConfig.from_args(args)
        cfg.apply()
        return COMMANDS[cfg.command](cfg, sys.stdout)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GoldenDataError as exc:
        print(f"golden data error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except KTheoryError as exc:
        logger.error("[app] %s failed: %s", args.command, exc)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
