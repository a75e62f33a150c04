"""
Helpers shared by the subcommands: flag parsers and the CSV + manifest writer.
"""
import argparse
import logging

import pandas as pd

from analysis.engine import make_dataset
from analysis.errors import InvalidInput, UsageError
from data.defaults import get_defaults
from data.io import RunManifest, write_manifest, write_table

logger = logging.getLogger(__name__)

NOT_RECORDED = {"handler"}


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def int_list(text: str) -> list[int]:
    """Comma-separated positive integers, e.g. "16,32,64"."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("expected a non-empty comma-separated list")
    return [positive_int(p) for p in parts]


def parse_anneal(text: str) -> tuple[float, float]:
    """"START:END" → (start, end)."""
    try:
        start, end = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--anneal expects START:END, got {text!r}")
    return start, end


def resolve_seed(args, command: str) -> int:
    if args.seed is None:
        args.seed = get_defaults(command)["seed"]
    return args.seed


def dataset_from_flags(args, seed):
    """The synthetic set the dataset flags describe; generator rejections are usage errors."""
    try:
        return make_dataset(
            args.task, args.n, args.d, args.outlier_frac, seed,
            margin=args.margin, noise_std=args.noise_std, cluster_sep=args.cluster_sep,
        )
    except InvalidInput as exc:
        raise UsageError(str(exc)) from exc


def manifest_params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in NOT_RECORDED}


def finish(df: pd.DataFrame, args) -> None:
    """Write the table (stdout without --out) and, for files, its manifest sidecar."""
    write_table(df, args.out)
    if args.out is not None:
        path = write_manifest(
            args.out,
            RunManifest(subcommand=args.command, params=manifest_params(args), seed=args.seed),
        )
        logger.info("output_written | path=%s | rows=%d | manifest=%s", args.out, len(df), path)
