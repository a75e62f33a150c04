"""
`sweep` — batchwise vs. full-dataset outlier detection across batch sizes.
"""
import logging

from analysis.engine import get_summary_stats, run_sweep
from analysis.errors import InvalidInput, UsageError
from charts.plots import create_detection_chart, save_svg
from commands.common import finish, int_list, positive_float, positive_int, resolve_seed
from data.defaults import CSV_COLUMNS, SWEEP_DEFAULTS

logger = logging.getLogger(__name__)

NAME = "sweep"
REQUIRES_OUT = True


def register(subparsers, parents):
    d = SWEEP_DEFAULTS
    p = subparsers.add_parser(NAME, parents=parents, help="Detection score vs. batch size sweep")
    p.add_argument("--task", choices=["regression", "classification"], default=d["task"])
    p.add_argument("--n", type=positive_int, default=d["n"], help="Samples per trial dataset")
    p.add_argument("--d", type=positive_int, default=d["d"], help="Feature dimension")
    p.add_argument("--outlier-frac", type=float, default=d["outlier_frac"])
    p.add_argument("--margin", type=float, default=d["margin"],
                   help="Regression outlier offset, in noise standard deviations")
    p.add_argument("--noise-std", type=positive_float, default=d["noise_std"])
    p.add_argument("--cluster-sep", type=positive_float, default=d["cluster_sep"])
    p.add_argument("--sigma", type=positive_float, default=d["sigma"], help="Inlier z radius")
    p.add_argument("--batch-sizes", type=int_list, default=d["batch_sizes"])
    p.add_argument("--trials", type=positive_int, default=d["trials"])
    p.add_argument("--workers", type=positive_int, default=d["workers"])
    p.add_argument("--svg", default=None, help="Also render F1 vs. batch size as SVG")
    return p


def run(args) -> int:
    seed = resolve_seed(args, NAME)
    if not 0.0 <= args.outlier_frac < 0.5:
        raise UsageError(f"--outlier-frac must lie in [0, 0.5), got {args.outlier_frac}")
    if min(args.batch_sizes) < 2:
        raise UsageError("--batch-sizes entries must be at least 2")
    if args.task == "regression" and args.margin < 3:
        raise UsageError(f"--margin must be at least 3, got {args.margin}")
    if args.task == "classification" and (args.n < 20 or args.n % 2):
        raise UsageError("--n must be even and at least 20 for classification")

    params = {
        "n": args.n,
        "d": args.d,
        "outlier_frac": args.outlier_frac,
        "margin": args.margin,
        "noise_std": args.noise_std,
        "cluster_sep": args.cluster_sep,
        "sigma": args.sigma,
        "batch_sizes": args.batch_sizes,
        "trials": args.trials,
        "seed": seed,
    }
    try:
        sweep = run_sweep(args.task, params, workers=args.workers)[CSV_COLUMNS[NAME]]
    except InvalidInput as exc:
        raise UsageError(str(exc)) from exc
    finish(sweep, args)

    summary = get_summary_stats(sweep)
    for row in summary.itertuples():
        logger.info("summary | method=%s | batch_size=%d | f1=%.4f | recall=%.4f | precision=%.4f",
                    row.method, row.batch_size, row.f1, row.recall, row.precision)
    if args.svg:
        title = f"{args.task.capitalize()} outliers, {args.sigma:g}σ"
        save_svg(create_detection_chart(summary, title=title), args.svg)
    return 0
