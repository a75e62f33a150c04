"""
`cutoff` — infer the decision cutoff from a `logit,label` file.
"""
import logging

import pandas as pd

from analysis.cutoff import optimal_logit_cutoff, optimal_prob_cutoff_skewnorm, pdf_gap
from commands.common import finish, positive_float
from data.defaults import CSV_COLUMNS, CUTOFF_DEFAULTS, CUTOFF_INPUT_COLUMNS
from data.io import read_table

NAME = "cutoff"
REQUIRES_OUT = False

logger = logging.getLogger(__name__)


def register(subparsers, parents):
    d = CUTOFF_DEFAULTS
    p = subparsers.add_parser(NAME, parents=parents, help="Optimal decision cutoff from class output distributions")
    p.add_argument("--input", required=True, help="CSV with header logit,label")
    p.add_argument("--method", choices=["gaussian", "skewnorm"], default=d["method"])
    p.add_argument("--z-threshold", type=positive_float, default=d["z_threshold"])
    return p


def run(args) -> int:
    _, parsed = read_table(args.input, CUTOFF_INPUT_COLUMNS, numeric=CUTOFF_INPUT_COLUMNS, binary=["label"])
    logits = parsed["logit"].to_numpy()
    labels = parsed["label"].to_numpy()

    if args.method == "gaussian":
        result = optimal_logit_cutoff(logits, labels, args.z_threshold)
        print(f"Optimal logit cutoff (Gaussian): {result.logit_cutoff:.6f}")
        print(f"Optimal probability cutoff (Gaussian): {result.prob_cutoff:.6f}")
    else:
        result = optimal_prob_cutoff_skewnorm(
            logits, labels, args.z_threshold, bracket=CUTOFF_DEFAULTS["bracket"]
        )
        note = " (midpoint fallback)" if result.used_fallback else ""
        print(f"Optimal probability cutoff (SkewNorm): {result.prob_cutoff:.6f}{note}")
    print(f"Inliers per class: {result.inlier_counts[0]} / {result.inlier_counts[1]}")
    at = result.logit_cutoff if result.method == "gaussian" else result.prob_cutoff
    logger.info("cutoff_done | method=%s | density_gap=%.3g", result.method, pdf_gap(result, at))

    if args.out is not None:
        finish(pd.DataFrame([result.as_row()])[CSV_COLUMNS[NAME]], args)
    return 0
