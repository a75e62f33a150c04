"""
Outlier detection scoring — batchwise vs. full-dataset masking against planted
ground truth. A sample counts as detected when its mask entry is False.
"""
from dataclasses import dataclass

import numpy as np

from analysis.errors import InvalidInput
from analysis.losses import class_mask, zscore_mask
from data.synthetic import model_free_scores


@dataclass
class DetectionReport:
    method: str
    batch_size: int
    threshold: float
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float

    def as_row(self) -> dict:
        return {
            "method": self.method,
            "batch_size": self.batch_size,
            "sigma": self.threshold,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def score_detection(predicted_flags, true_flags) -> dict:
    """Confusion counts plus precision / recall / F1, with 0 for any 0/0."""
    predicted = np.asarray(predicted_flags, dtype=bool).reshape(-1)
    truth = np.asarray(true_flags, dtype=bool).reshape(-1)
    if predicted.size != truth.size:
        raise InvalidInput(f"{predicted.size} predictions but {truth.size} ground-truth flags")

    tp = int(np.sum(predicted & truth))
    fp = int(np.sum(predicted & ~truth))
    fn = int(np.sum(~predicted & truth))
    tn = int(np.sum(~predicted & ~truth))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {
        "tp": tp,
        "fp": fp,
        "fn": fn,
        "tn": tn,
        "precision": precision,
        "recall": recall,
        "f1": f1,
    }


def inlier_mask(scores: np.ndarray, labels: np.ndarray | None, threshold: float) -> np.ndarray:
    if labels is None:
        return zscore_mask(scores, threshold)
    return class_mask(scores, labels, threshold)


def _resolve(dataset, scores) -> tuple[np.ndarray, np.ndarray | None]:
    scores = model_free_scores(dataset) if scores is None else np.asarray(scores, dtype=np.float64)
    if scores.size != dataset.n:
        raise InvalidInput(f"{scores.size} scores for a dataset of {dataset.n} samples")
    labels = dataset.labels
    return scores, None if labels is None else np.asarray(labels, dtype=np.float64)


def model_scores(model, dataset) -> np.ndarray:
    """
    Scores from a trained model: residuals y − f(x) for regression, logits for
    classification (masked per observed label like the model-free projection).
    """
    outputs = np.asarray(model.predict(dataset.x), dtype=np.float64).reshape(-1)
    if dataset.task == "regression":
        return dataset.targets - outputs
    return outputs


def detect_batchwise(dataset, batch_size: int, threshold: float, seed=0, scores=None) -> DetectionReport:
    """
    Shuffle once, slice into consecutive batches (the short tail is kept, batches
    of fewer than 2 samples are skipped) and mask within each batch. `scores`
    defaults to the dataset's model-free scores; pass model outputs for the
    model-based mode.
    """
    if batch_size < 2:
        raise InvalidInput(f"batch_size must be at least 2, got {batch_size}")
    if not threshold > 0:
        raise InvalidInput("threshold must be positive")
    scores, labels = _resolve(dataset, scores)
    n = scores.size

    detected = np.zeros(n, dtype=bool)
    if batch_size >= n:
        order = np.arange(n)
    else:
        order = np.random.default_rng(seed).permutation(n)
    for start in range(0, n, batch_size):
        idx = order[start:start + batch_size]
        if idx.size < 2:
            continue
        batch_labels = None if labels is None else labels[idx]
        detected[idx] = ~inlier_mask(scores[idx], batch_labels, threshold)

    counts = score_detection(detected, dataset.outlier_flag)
    return DetectionReport(method="batch", batch_size=batch_size, threshold=float(threshold), **counts)


def detect_full(dataset, threshold: float, scores=None) -> DetectionReport:
    """One mask over the whole dataset."""
    if not threshold > 0:
        raise InvalidInput("threshold must be positive")
    scores, labels = _resolve(dataset, scores)
    detected = ~inlier_mask(scores, labels, threshold)
    counts = score_detection(detected, dataset.outlier_flag)
    return DetectionReport(method="full", batch_size=0, threshold=float(threshold), **counts)
