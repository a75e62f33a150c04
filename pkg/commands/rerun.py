"""
`rerun` — replay a run from its manifest sidecar.
"""
import argparse
import logging

from analysis.errors import UsageError
from commands import anneal_table, clean, cutoff, stability, sweep, train_demo
from data.io import read_manifest

logger = logging.getLogger(__name__)

NAME = "rerun"
REQUIRES_OUT = False

REPLAYABLE = {m.NAME: m for m in (sweep, train_demo, cutoff, clean, anneal_table, stability)}


def register(subparsers, parents):
    p = subparsers.add_parser(NAME, parents=parents, help="Replay a run from its .manifest.json")
    p.add_argument("--manifest", required=True)
    return p


def run(args) -> int:
    manifest = read_manifest(args.manifest)
    if manifest.subcommand not in REPLAYABLE:
        raise UsageError(f"Manifest names unknown subcommand {manifest.subcommand!r}")

    params = dict(manifest.params)
    if args.out is not None:
        params["out"] = args.out
    params["quiet"] = args.quiet
    logger.info("replaying | subcommand=%s | manifest=%s", manifest.subcommand, args.manifest)
    return REPLAYABLE[manifest.subcommand].run(argparse.Namespace(**params))
