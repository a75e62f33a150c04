"""
`stability` — spread of fitted Gaussian vs. skew-normal class parameters by batch size.
"""
from analysis.engine import run_stability
from commands.common import finish, int_list, positive_float, positive_int, resolve_seed
from data.defaults import CSV_COLUMNS, STABILITY_DEFAULTS

NAME = "stability"
REQUIRES_OUT = False


def register(subparsers, parents):
    d = STABILITY_DEFAULTS
    p = subparsers.add_parser(NAME, parents=parents, help="Fit-parameter stability vs. batch size")
    p.add_argument("--batch-sizes", type=int_list, default=d["batch_sizes"])
    p.add_argument("--trials", type=positive_int, default=d["trials"])
    p.add_argument("--z-threshold", type=positive_float, default=d["z_threshold"])
    p.add_argument("--class-mean", type=positive_float, default=d["class_mean"],
                   help="Class logits are drawn from N(∓class_mean, class_std²)")
    p.add_argument("--class-std", type=positive_float, default=d["class_std"])
    return p


def run(args) -> int:
    seed = resolve_seed(args, NAME)
    table = run_stability({
        "batch_sizes": args.batch_sizes,
        "trials": args.trials,
        "z_threshold": args.z_threshold,
        "class_mean": args.class_mean,
        "class_std": args.class_std,
        "seed": seed,
    })[CSV_COLUMNS[NAME]]
    finish(table, args)
    return 0
