"""
Run defaults and output schemas for every subcommand.
Inlier radius 2σ and 100 → 2 annealing for the losses; 10% planted outliers
and a 1.5σ radius for the batch-size sweeps.
"""

TOOL_VERSION = "0.3.0"

FLOAT_FORMAT = "%.9g"

# ── Subcommand defaults ────────────────────────────────────────────
SWEEP_DEFAULTS = {
    "task": "regression",
    "n": 2000,
    "d": 1,
    "outlier_frac": 0.1,
    "margin": 6.0,
    "noise_std": 1.0,
    "cluster_sep": 6.0,
    "sigma": 1.5,
    "batch_sizes": [16, 32, 64, 96, 128, 256, 512],
    "trials": 10,
    "workers": 1,
    "seed": 42,
}

TRAIN_DEFAULTS = {
    "task": "regression",
    "loss": {"regression": "zmse", "classification": "zbce"},
    "model": {"regression": "linear", "classification": "logistic"},
    "hidden": 16,
    "epochs": 100,
    "batch_size": 64,
    "lr": 0.05,
    "sigma": 2.0,
    "mask_mode": "target",
    "n": 1000,
    "d": 1,
    "outlier_frac": 0.1,
    "margin": 6.0,
    "noise_std": 1.0,
    "cluster_sep": 6.0,
    "seed": 0,
}

CUTOFF_DEFAULTS = {
    "method": "gaussian",
    "z_threshold": 2.0,
    "bracket": (0.001, 0.999),
}

CLEAN_DEFAULTS = {
    "task": "regression",
    "mode": "target",
    "sigma": 2.0,
}

ANNEAL_DEFAULTS = {
    "epochs": 100,
    "start": 100.0,
    "end": 2.0,
}

STABILITY_DEFAULTS = {
    "batch_sizes": [16, 32, 64, 128, 256, 512],
    "trials": 20,
    "z_threshold": 2.0,
    "class_mean": 2.0,
    "class_std": 1.0,
    "seed": 42,
}

COMMAND_DEFAULTS = {
    "sweep": SWEEP_DEFAULTS,
    "train-demo": TRAIN_DEFAULTS,
    "cutoff": CUTOFF_DEFAULTS,
    "clean": CLEAN_DEFAULTS,
    "anneal-table": ANNEAL_DEFAULTS,
    "stability": STABILITY_DEFAULTS,
}

# ── Output schemas ─────────────────────────────────────────────────
CSV_COLUMNS = {
    "sweep": [
        "task", "method", "batch_size", "trial", "sigma", "n", "outlier_frac",
        "tp", "fp", "fn", "tn", "precision", "recall", "f1",
    ],
    "train-demo": ["epoch", "sigma", "train_loss", "masked_out_count", "model_metric"],
    "cutoff": ["method", "logit_cutoff", "prob_cutoff", "inliers_0", "inliers_1", "used_fallback"],
    "anneal-table": ["epoch", "sigma"],
    "stability": ["distribution", "batch_size", "parameter", "mean", "std", "fits", "failures"],
}

# Input columns accepted by `clean`, keyed by (task, mode).
CLEAN_INPUT_COLUMNS = {
    ("regression", "target"): ["id", "target"],
    ("regression", "error"): ["id", "prediction", "target"],
    ("classification", "target"): ["id", "logit", "label"],
    ("classification", "error"): ["id", "logit", "label"],
}

CUTOFF_INPUT_COLUMNS = ["logit", "label"]


def get_defaults(command: str) -> dict:
    """Return a copy of the defaults for one subcommand."""
    if command not in COMMAND_DEFAULTS:
        raise KeyError(f"No defaults for command {command!r}")
    return dict(COMMAND_DEFAULTS[command])
