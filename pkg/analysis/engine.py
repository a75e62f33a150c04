"""
Experiment engine — batch-size sweeps of outlier detection, the fit-stability
sweep, and summary statistics over their rows.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from analysis.cutoff import class_inlier_mask, gaussian_cutoff
from analysis.detection import detect_batchwise, detect_full
from analysis.errors import ZLossError
from analysis.stats import fit_gaussian, fit_skewnorm, sigmoid
from data.synthetic import gen_classification, gen_regression

logger = logging.getLogger(__name__)

GAUSSIAN_PARAMETERS = ("mu0", "sigma0", "mu1", "sigma1", "logit_cutoff")
SKEWNORM_PARAMETERS = ("shape0", "loc0", "scale0", "shape1", "loc1", "scale1")


def make_dataset(task: str, n: int, d: int, outlier_frac: float, seed, margin: float = 6.0,
                 noise_std: float = 1.0, cluster_sep: float = 6.0):
    if task == "regression":
        return gen_regression(n=n, d=d, outlier_frac=outlier_frac, margin=margin,
                              noise_std=noise_std, seed=seed)
    return gen_classification(n=n, d=max(d, 1), outlier_frac=outlier_frac,
                              cluster_sep=cluster_sep, seed=seed)


def run_trial(task: str, trial: int, params: dict) -> list[dict]:
    """
    One trial: a fresh dataset from the (seed, trial) stream, one batchwise row
    per batch size, then the full-dataset row.
    """
    seed = params["seed"]
    dataset = make_dataset(
        task, params["n"], params["d"], params["outlier_frac"], [seed, trial],
        margin=params["margin"], noise_std=params["noise_std"], cluster_sep=params["cluster_sep"],
    )
    reports = [
        detect_batchwise(dataset, bs, params["sigma"], seed=[seed, trial, bs])
        for bs in params["batch_sizes"]
    ]
    reports.append(detect_full(dataset, params["sigma"]))

    rows = []
    for report in reports:
        row = report.as_row()
        rows.append({
            "task": task,
            "method": row.pop("method"),
            "batch_size": row.pop("batch_size"),
            "trial": trial,
            "sigma": row.pop("sigma"),
            "n": dataset.n,
            "outlier_frac": params["outlier_frac"],
            **row,
        })
    logger.debug("trial_done | task=%s | trial=%d | full_f1=%.4f", task, trial, reports[-1].f1)
    return rows


def run_sweep(task: str, params: dict, workers: int = 1) -> pd.DataFrame:
    """All trials of a detection sweep, in trial order regardless of worker count."""
    trials = range(params["trials"])
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(lambda t: run_trial(task, t, params), trials))
    else:
        per_trial = [run_trial(task, t, params) for t in trials]

    rows = [row for trial_rows in per_trial for row in trial_rows]
    logger.info("sweep_done | task=%s | trials=%d | rows=%d", task, params["trials"], len(rows))
    return pd.DataFrame(rows)


def get_summary_stats(sweep: pd.DataFrame) -> pd.DataFrame:
    """Mean and std of precision / recall / F1 per (method, batch size)."""
    if sweep.empty:
        return pd.DataFrame(columns=["method", "batch_size", "trials", "precision", "recall",
                                     "f1", "f1_std"])
    grouped = sweep.groupby(["method", "batch_size"], sort=True)
    summary = grouped.agg(
        trials=("trial", "count"),
        precision=("precision", "mean"),
        recall=("recall", "mean"),
        f1=("f1", "mean"),
        f1_std=("f1", "std"),
    ).reset_index()
    return summary.fillna({"f1_std": 0.0})


# ── Fit stability ──────────────────────────────────────────────────

def _balanced_logits(rng: np.random.Generator, batch_size: int, class_mean: float,
                     class_std: float) -> tuple[np.ndarray, np.ndarray]:
    half = batch_size // 2
    logits = np.concatenate([
        rng.normal(-class_mean, class_std, size=half),
        rng.normal(class_mean, class_std, size=batch_size - half),
    ])
    labels = np.repeat([0.0, 1.0], [half, batch_size - half])
    return logits, labels


def _fit_batch(logits: np.ndarray, labels: np.ndarray, z_threshold: float) -> tuple[dict | None, dict | None]:
    gaussian = skew = None

    mask = class_inlier_mask(logits, labels, z_threshold)
    try:
        fit0 = fit_gaussian(logits[mask & (labels == 0)])
        fit1 = fit_gaussian(logits[mask & (labels == 1)])
        gaussian = {
            "mu0": fit0.mu, "sigma0": fit0.sigma, "mu1": fit1.mu, "sigma1": fit1.sigma,
            "logit_cutoff": gaussian_cutoff(fit0, fit1),
        }
    except ZLossError:
        pass

    probs = sigmoid(logits)
    mask = class_inlier_mask(probs, labels, z_threshold)
    try:
        fit0 = fit_skewnorm(probs[mask & (labels == 0)])
        fit1 = fit_skewnorm(probs[mask & (labels == 1)])
        skew = {
            "shape0": fit0.shape, "loc0": fit0.loc, "scale0": fit0.scale,
            "shape1": fit1.shape, "loc1": fit1.loc, "scale1": fit1.scale,
        }
    except ZLossError:
        pass
    return gaussian, skew


def _stability_rows(distribution: str, batch_size: int, parameters, fits: list[dict],
                    failures: int) -> list[dict]:
    rows = []
    for name in parameters:
        values = np.array([fit[name] for fit in fits])
        rows.append({
            "distribution": distribution,
            "batch_size": batch_size,
            "parameter": name,
            "mean": float(values.mean()) if values.size else float("nan"),
            "std": float(values.std(ddof=1)) if values.size > 1 else float("nan"),
            "fits": len(fits),
            "failures": failures,
        })
    return rows


def run_stability(params: dict) -> pd.DataFrame:
    """
    Spread of fitted class-distribution parameters across repeated batches, per
    batch size: Gaussians on inlier logits vs. skew-normals on inlier probabilities.
    """
    rows = []
    for batch_size in params["batch_sizes"]:
        gaussian_fits, skew_fits = [], []
        for trial in range(params["trials"]):
            rng = np.random.default_rng([params["seed"], batch_size, trial])
            logits, labels = _balanced_logits(rng, batch_size, params["class_mean"], params["class_std"])
            gaussian, skew = _fit_batch(logits, labels, params["z_threshold"])
            if gaussian is not None:
                gaussian_fits.append(gaussian)
            if skew is not None:
                skew_fits.append(skew)

        trials = params["trials"]
        rows += _stability_rows("gaussian", batch_size, GAUSSIAN_PARAMETERS, gaussian_fits,
                                trials - len(gaussian_fits))
        rows += _stability_rows("skewnormal", batch_size, SKEWNORM_PARAMETERS, skew_fits,
                                trials - len(skew_fits))
        logger.debug("stability_batch_done | batch_size=%d | gaussian_fits=%d | skew_fits=%d",
                     batch_size, len(gaussian_fits), len(skew_fits))
    return pd.DataFrame(rows)
