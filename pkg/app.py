"""
Z-Error Loss toolkit
Main entry point.
"""
import argparse
import logging
import sys

from analysis.errors import ZLossError
from commands import anneal_table, clean, cutoff, rerun, stability, sweep, train_demo

logger = logging.getLogger("zloss")

# ── Subcommands ────────────────────────────────────────────────────
COMMANDS = [sweep, train_demo, cutoff, clean, anneal_table, stability, rerun]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (per-subcommand default)")
    common.add_argument("--out", default=None, help="Output CSV path; a .manifest.json is written next to it")
    common.add_argument("--quiet", action="store_true", help="Only log warnings and errors")

    parser = argparse.ArgumentParser(
        prog="zloss",
        description="Batchwise z-score outlier masking: experiments, cutoffs and data cleaning.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMANDS:
        sub = module.register(subparsers, [common])
        sub.set_defaults(handler=module)
    return parser


def configure_logging(quiet: bool) -> None:
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s | %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.handler.REQUIRES_OUT and args.out is None:
            parser.error(f"{args.command} requires --out")
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    configure_logging(args.quiet)
    try:
        return args.handler.run(args)
    except ZLossError as exc:
        logger.debug("command_failed | command=%s | error=%s", args.command, type(exc).__name__)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
