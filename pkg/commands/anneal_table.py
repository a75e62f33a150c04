"""
`anneal-table` — the sigma threshold at every epoch of a linear schedule.
"""
import pandas as pd

from analysis.errors import InvalidInput, UsageError
from analysis.losses import SigmaSchedule
from commands.common import finish, positive_int
from data.defaults import ANNEAL_DEFAULTS, CSV_COLUMNS

NAME = "anneal-table"
REQUIRES_OUT = False


def register(subparsers, parents):
    d = ANNEAL_DEFAULTS
    p = subparsers.add_parser(NAME, parents=parents, help="Tabulate the annealed sigma threshold")
    p.add_argument("--epochs", type=positive_int, default=d["epochs"])
    p.add_argument("--start", type=float, default=d["start"])
    p.add_argument("--end", type=float, default=d["end"])
    return p


def run(args) -> int:
    try:
        schedule = SigmaSchedule(args.start, args.end, args.epochs)
    except InvalidInput as exc:
        raise UsageError(str(exc)) from exc

    table = pd.DataFrame(
        [{"epoch": e, "sigma": schedule.threshold(e)} for e in range(args.epochs + 1)]
    )[CSV_COLUMNS[NAME]]
    finish(table, args)
    return 0
