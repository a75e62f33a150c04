"""
Z-error loss kernels — batchwise z-score masking in front of MSE and
BCE-with-logits, with analytic gradients, plus the annealed sigma schedule.

Every kernel is "compute an inlier mask, then reduce over the inliers". The mask
is a constant for differentiation: gradients only flow through masked-in samples.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from analysis.errors import InvalidInput
from analysis.stats import mean_std, sigmoid, z_scores

ZSCORE_EPS = 1e-8
CLASS_STD_FLOOR = 1e-8


class MaskMode(str, Enum):
    """Which per-sample quantity a regression batch is z-scored on."""

    TARGET_Z = "target"
    ERROR_Z = "error"


@dataclass
class MaskedLossResult:
    loss: float
    grad: np.ndarray
    mask: np.ndarray
    valid_count: int

    @property
    def masked_out_count(self) -> int:
        return int(self.mask.size - self.valid_count)


@dataclass(frozen=True)
class SigmaSchedule:
    start_sigma: float = 100.0
    end_sigma: float = 2.0
    max_epochs: int = 100

    def __post_init__(self):
        if not self.start_sigma >= self.end_sigma > 0:
            raise InvalidInput(
                f"Schedule needs start_sigma >= end_sigma > 0, got "
                f"{self.start_sigma} -> {self.end_sigma}"
            )
        if self.max_epochs < 1:
            raise InvalidInput("Schedule needs max_epochs >= 1")

    def threshold(self, epoch: int) -> float:
        return sigma_threshold(epoch, self.max_epochs, self)


def sigma_threshold(epoch: int, max_epochs: int, schedule: SigmaSchedule | None = None) -> float:
    """Linearly anneal the inlier radius from start_sigma (epoch 0) to end_sigma (max_epochs)."""
    schedule = schedule or SigmaSchedule()
    if max_epochs < 1:
        raise InvalidInput("max_epochs must be at least 1")
    if not 0 <= epoch <= max_epochs:
        raise InvalidInput(f"epoch {epoch} outside [0, {max_epochs}]")
    progress = epoch / max_epochs
    return schedule.start_sigma + (schedule.end_sigma - schedule.start_sigma) * progress


# ── Input checks ───────────────────────────────────────────────────

def _vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise InvalidInput(f"{name} is empty")
    return arr


def _paired(a, b, names: tuple[str, str]) -> tuple[np.ndarray, np.ndarray]:
    left = _vector(a, names[0])
    right = _vector(b, names[1])
    if left.size != right.size:
        raise InvalidInput(f"{names[0]} has {left.size} entries but {names[1]} has {right.size}")
    return left, right


def _binary(labels: np.ndarray) -> np.ndarray:
    if not np.all((labels == 0.0) | (labels == 1.0)):
        raise InvalidInput("labels must be 0 or 1")
    return labels


def _check_threshold(threshold: float) -> float:
    if not threshold > 0:
        raise InvalidInput(f"threshold must be positive, got {threshold}")
    return float(threshold)


# ── Z-scores and masks ─────────────────────────────────────────────

def batch_zscores(values: Sequence[float], eps: float = ZSCORE_EPS) -> np.ndarray:
    """Z-scores against the batch's own mean and unbiased std. A singleton scores 0."""
    arr = _vector(values, "values")
    if arr.size == 1:
        return np.zeros(1)
    return z_scores(arr, mean_std(arr, ddof=1), eps)


def zscore_mask(values: Sequence[float], threshold: float, eps: float = ZSCORE_EPS) -> np.ndarray:
    return np.abs(batch_zscores(values, eps)) <= threshold


def class_zscores(scores: Sequence[float], labels: Sequence[float]) -> np.ndarray:
    """
    Z-scores of each sample against its own class's scores (ddof=1).
    A class std below 1e-8, or a single-sample class, is replaced by 1.0.
    """
    scores, labels = _paired(scores, labels, ("scores", "labels"))
    _binary(labels)
    z = np.zeros_like(scores)
    for cls in (0.0, 1.0):
        idx = labels == cls
        if not idx.any():
            continue
        class_scores = scores[idx]
        if class_scores.size < 2:
            z[idx] = 0.0
            continue
        stats = mean_std(class_scores, ddof=1)
        std = stats.std if stats.std >= CLASS_STD_FLOOR else 1.0
        z[idx] = (class_scores - stats.mean) / std
    return z


def class_mask(
    scores: Sequence[float],
    labels: Sequence[float],
    threshold0: float,
    threshold1: float | None = None,
) -> np.ndarray:
    threshold1 = threshold0 if threshold1 is None else threshold1
    labels = _vector(labels, "labels")
    z = class_zscores(scores, labels)
    radius = np.where(labels == 1.0, threshold1, threshold0)
    return np.abs(z) <= radius


# ── Masked reductions ──────────────────────────────────────────────

def masked_mse(predictions, targets, mask, eps: float = ZSCORE_EPS) -> MaskedLossResult:
    predictions, targets = _paired(predictions, targets, ("predictions", "targets"))
    mask = np.asarray(mask, dtype=bool).reshape(-1)
    if mask.size != predictions.size:
        raise InvalidInput("mask length does not match the batch")

    residual = predictions - targets
    valid_count = int(mask.sum())
    denom = valid_count + eps
    loss = float(np.sum(np.where(mask, residual * residual, 0.0)) / denom)
    grad = np.where(mask, 2.0 * residual / denom, 0.0)
    return MaskedLossResult(loss=loss, grad=grad, mask=mask, valid_count=valid_count)


def bce_with_logits(logits: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Per-sample max(x, 0) − x·y + ln(1 + e^{−|x|})."""
    return np.maximum(logits, 0.0) - logits * labels + np.log1p(np.exp(-np.abs(logits)))


def masked_bce_with_logits(logits, labels, mask, eps: float = ZSCORE_EPS) -> MaskedLossResult:
    logits, labels = _paired(logits, labels, ("logits", "labels"))
    _binary(labels)
    mask = np.asarray(mask, dtype=bool).reshape(-1)
    if mask.size != logits.size:
        raise InvalidInput("mask length does not match the batch")

    valid_count = int(mask.sum())
    denom = valid_count + eps
    per_sample = bce_with_logits(logits, labels)
    loss = float(np.sum(np.where(mask, per_sample, 0.0)) / denom)
    grad = np.where(mask, (sigmoid(logits) - labels) / denom, 0.0)
    return MaskedLossResult(loss=loss, grad=grad, mask=mask, valid_count=valid_count)


# ── Kernels ────────────────────────────────────────────────────────

def z_mse_loss(
    predictions,
    targets,
    threshold: float = 2.0,
    mode: MaskMode | str = MaskMode.TARGET_Z,
    eps: float = ZSCORE_EPS,
) -> MaskedLossResult:
    """
    MSE over the samples whose batch z-score lies within `threshold`.
    TARGET_Z scores the targets, ERROR_Z the per-sample squared errors.
    """
    predictions, targets = _paired(predictions, targets, ("predictions", "targets"))
    threshold = _check_threshold(threshold)
    mode = MaskMode(mode)

    if mode is MaskMode.TARGET_Z:
        scored = targets
    else:
        scored = (predictions - targets) ** 2
    mask = zscore_mask(scored, threshold, eps)
    return masked_mse(predictions, targets, mask, eps)


def z_bce_with_logits_loss(
    logits,
    labels,
    threshold0: float = 2.0,
    threshold1: float | None = None,
) -> MaskedLossResult:
    """BCE-with-logits over samples whose logit lies within its class's z radius."""
    logits, labels = _paired(logits, labels, ("logits", "labels"))
    _binary(labels)
    threshold0 = _check_threshold(threshold0)
    threshold1 = threshold0 if threshold1 is None else _check_threshold(threshold1)

    mask = class_mask(logits, labels, threshold0, threshold1)
    return masked_bce_with_logits(logits, labels, mask)


def plain_mse(predictions, targets) -> MaskedLossResult:
    predictions, targets = _paired(predictions, targets, ("predictions", "targets"))
    return masked_mse(predictions, targets, np.ones(predictions.size, dtype=bool))


def plain_bce_with_logits(logits, labels) -> MaskedLossResult:
    logits, labels = _paired(logits, labels, ("logits", "labels"))
    return masked_bce_with_logits(logits, labels, np.ones(logits.size, dtype=bool))
