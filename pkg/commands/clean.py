"""
`clean` — flag rows of a data file that fall outside the full-dataset z radius.
"""
import numpy as np

from analysis.losses import batch_zscores, class_zscores
from commands.common import finish, positive_float
from data.defaults import CLEAN_DEFAULTS, CLEAN_INPUT_COLUMNS
from data.io import read_table

NAME = "clean"
REQUIRES_OUT = True


def register(subparsers, parents):
    d = CLEAN_DEFAULTS
    p = subparsers.add_parser(NAME, parents=parents, help="Append z_score and inlier columns to a data file")
    p.add_argument("--input", required=True,
                   help="regression: id,target (or id,prediction,target with --mode error); "
                        "classification: id,logit,label")
    p.add_argument("--task", choices=["regression", "classification"], default=d["task"])
    p.add_argument("--mode", choices=["target", "error"], default=d["mode"],
                   help="Regression only: z-score the targets or the squared errors")
    p.add_argument("--sigma", type=positive_float, default=d["sigma"])
    return p


def run(args) -> int:
    columns = CLEAN_INPUT_COLUMNS[(args.task, args.mode)]
    numeric = [c for c in columns if c != "id"]
    binary = ["label"] if args.task == "classification" else None
    raw, parsed = read_table(args.input, columns, numeric=numeric, binary=binary)

    if args.task == "classification":
        z = class_zscores(parsed["logit"].to_numpy(), parsed["label"].to_numpy())
    elif args.mode == "error":
        z = batch_zscores((parsed["prediction"].to_numpy() - parsed["target"].to_numpy()) ** 2)
    else:
        z = batch_zscores(parsed["target"].to_numpy())

    table = raw.copy()
    table["z_score"] = z
    table["inlier"] = np.abs(z) <= args.sigma
    finish(table, args)
    return 0
