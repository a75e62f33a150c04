"""
`train-demo` — train on a synthetic contaminated set and tabulate every epoch.
"""
import pandas as pd

from analysis.errors import InvalidInput, UsageError
from analysis.losses import MaskMode, SigmaSchedule
from analysis.training import CLASSIFICATION_LOSSES, REGRESSION_LOSSES, TrainConfig, train
from charts.plots import create_training_chart, save_svg
from commands.common import dataset_from_flags, finish, parse_anneal, positive_float, positive_int, resolve_seed
from data.defaults import CSV_COLUMNS, TRAIN_DEFAULTS

NAME = "train-demo"
REQUIRES_OUT = False


def register(subparsers, parents):
    d = TRAIN_DEFAULTS
    p = subparsers.add_parser(NAME, parents=parents, help="Train with a z-error loss, one row per epoch")
    p.add_argument("--task", choices=["regression", "classification"], default=d["task"])
    p.add_argument("--loss", choices=list(REGRESSION_LOSSES + CLASSIFICATION_LOSSES), default=None,
                   help="Default: zmse for regression, zbce for classification")
    p.add_argument("--model", choices=["linear", "logistic", "mlp"], default=None,
                   help="Default: linear for regression, logistic for classification")
    p.add_argument("--hidden", type=positive_int, default=d["hidden"], help="MLP hidden width")
    p.add_argument("--epochs", type=positive_int, default=d["epochs"])
    p.add_argument("--batch-size", type=positive_int, default=d["batch_size"])
    p.add_argument("--lr", type=positive_float, default=d["lr"])
    p.add_argument("--sigma", type=positive_float, default=d["sigma"], help="Fixed inlier z radius")
    p.add_argument("--anneal", default=None, metavar="START:END",
                   help="Anneal the radius linearly over the run instead of --sigma")
    p.add_argument("--class1-sigma", type=positive_float, default=None,
                   help="Separate z radius for class 1 (classification)")
    p.add_argument("--mask-mode", choices=[m.value for m in MaskMode], default=d["mask_mode"])
    p.add_argument("--n", type=positive_int, default=d["n"])
    p.add_argument("--d", type=positive_int, default=d["d"])
    p.add_argument("--outlier-frac", type=float, default=d["outlier_frac"])
    p.add_argument("--margin", type=float, default=d["margin"])
    p.add_argument("--noise-std", type=positive_float, default=d["noise_std"])
    p.add_argument("--cluster-sep", type=positive_float, default=d["cluster_sep"])
    p.add_argument("--svg", default=None, help="Also render sigma / masked-out count per epoch as SVG")
    return p


def _config(args) -> TrainConfig:
    loss = args.loss or TRAIN_DEFAULTS["loss"][args.task]
    model = args.model or TRAIN_DEFAULTS["model"][args.task]
    allowed = REGRESSION_LOSSES if args.task == "regression" else CLASSIFICATION_LOSSES
    if loss not in allowed:
        raise UsageError(f"--loss {loss} does not apply to --task {args.task}")
    if (model, args.task) in {("linear", "classification"), ("logistic", "regression")}:
        raise UsageError(f"--model {model} does not apply to --task {args.task}")

    threshold = args.sigma
    if args.anneal:
        start, end = parse_anneal(args.anneal)
        try:
            threshold = SigmaSchedule(start, end)
        except InvalidInput as exc:
            raise UsageError(str(exc)) from exc

    try:
        return TrainConfig(
            epochs=args.epochs,
            batch_size=args.batch_size,
            learning_rate=args.lr,
            loss_kind=loss,
            mask_mode=MaskMode(args.mask_mode),
            threshold=threshold,
            class1_threshold=args.class1_sigma,
            seed=args.seed,
            model=model,
            hidden_width=args.hidden,
        )
    except InvalidInput as exc:
        raise UsageError(str(exc)) from exc


def run(args) -> int:
    seed = resolve_seed(args, NAME)
    config = _config(args)
    dataset = dataset_from_flags(args, seed)
    _, history = train(dataset, config)

    table = pd.DataFrame([stats.as_row() for stats in history])[CSV_COLUMNS[NAME]]
    finish(table, args)
    if args.svg:
        save_svg(create_training_chart(table), args.svg)
    return 0
