"""
Mini-batch gradient descent with the z-error kernels.

Each batch: forward pass → batch statistics → inclusion mask → backpropagate the
inliers only. The mask radius comes from a fixed threshold or an annealing schedule.
"""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from analysis.errors import InvalidInput, TrainingDiverged
from analysis.losses import (
    MaskMode,
    MaskedLossResult,
    SigmaSchedule,
    plain_bce_with_logits,
    plain_mse,
    sigma_threshold,
    z_bce_with_logits_loss,
    z_mse_loss,
)
from analysis.models import MODEL_KINDS, LinearModel, Model, build_model

logger = logging.getLogger(__name__)

REGRESSION_LOSSES = ("zmse", "mse")
CLASSIFICATION_LOSSES = ("zbce", "bce")


@dataclass
class TrainConfig:
    epochs: int = 100
    batch_size: int = 64
    learning_rate: float = 0.05
    loss_kind: str = "zmse"
    mask_mode: MaskMode = MaskMode.TARGET_Z
    threshold: float | SigmaSchedule = 2.0
    class1_threshold: float | None = None
    seed: int = 0
    model: str = "linear"
    hidden_width: int = 16

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise InvalidInput("epochs and batch_size must be at least 1")
        if not self.learning_rate > 0:
            raise InvalidInput("learning_rate must be positive")
        if self.loss_kind not in REGRESSION_LOSSES + CLASSIFICATION_LOSSES:
            raise InvalidInput(f"Unknown loss {self.loss_kind!r}")
        if self.model not in MODEL_KINDS:
            raise InvalidInput(f"Unknown model {self.model!r}")
        if self.hidden_width < 1:
            raise InvalidInput("hidden_width must be at least 1")
        if not isinstance(self.threshold, SigmaSchedule) and not self.threshold > 0:
            raise InvalidInput("threshold must be positive")
        self.mask_mode = MaskMode(self.mask_mode)

    @property
    def task(self) -> str:
        return "regression" if self.loss_kind in REGRESSION_LOSSES else "classification"

    def sigma_for_epoch(self, epoch: int) -> float:
        """
        Annealed runs stretch the schedule over the run so the last epoch hits
        end_sigma; the schedule's own max_epochs only drives `SigmaSchedule.threshold`.
        """
        if isinstance(self.threshold, SigmaSchedule):
            return sigma_threshold(epoch, max(self.epochs - 1, 1), self.threshold)
        return float(self.threshold)


@dataclass
class EpochStats:
    epoch: int
    sigma: float
    train_loss: float
    masked_out_count: int
    model_metric: float

    def as_row(self) -> dict:
        return {
            "epoch": self.epoch,
            "sigma": self.sigma,
            "train_loss": self.train_loss,
            "masked_out_count": self.masked_out_count,
            "model_metric": self.model_metric,
        }


def _check_compatible(dataset, config: TrainConfig) -> None:
    if dataset.task != config.task:
        raise InvalidInput(f"Loss {config.loss_kind!r} cannot train on a {dataset.task} dataset")
    if config.model == "linear" and dataset.task != "regression":
        raise InvalidInput("The linear model is the regression head; use 'logistic' or 'mlp'")
    if config.model == "logistic" and dataset.task != "classification":
        raise InvalidInput("The logistic model is the classification head; use 'linear' or 'mlp'")


def batch_loss(config: TrainConfig, outputs: np.ndarray, targets: np.ndarray, sigma: float) -> MaskedLossResult:
    if config.loss_kind == "zmse":
        return z_mse_loss(outputs, targets, sigma, config.mask_mode)
    if config.loss_kind == "mse":
        return plain_mse(outputs, targets)
    if config.loss_kind == "zbce":
        return z_bce_with_logits_loss(outputs, targets, sigma, config.class1_threshold)
    return plain_bce_with_logits(outputs, targets)


def balanced_accuracy(logits: np.ndarray, truth: np.ndarray) -> float:
    predicted = logits > 0.0
    truth = truth.astype(bool)
    rates = [np.mean(predicted[truth == cls] == cls) for cls in (True, False) if np.any(truth == cls)]
    return float(np.mean(rates))


def model_metric(model: Model, dataset) -> float:
    """
    Regression: slope error ‖w − w*‖₂ + |b − b*| for the linear head, RMSE against
    the noiseless line otherwise. Classification: balanced accuracy on true clusters.
    """
    if dataset.task == "classification":
        return balanced_accuracy(model.predict(dataset.x), dataset.clean_label)
    if isinstance(model, LinearModel):
        return float(
            np.linalg.norm(model.weights - dataset.true_weights) + abs(model.bias - dataset.true_bias)
        )
    residual = model.predict(dataset.x) - dataset.clean_targets()
    return float(np.sqrt(np.mean(residual ** 2)))


def train(
    dataset,
    config: TrainConfig,
    on_step: Callable[[Model], None] | None = None,
) -> tuple[Model, list[EpochStats]]:
    _check_compatible(dataset, config)
    rng = np.random.default_rng(config.seed)
    x = dataset.x
    targets = dataset.targets
    n = dataset.n
    model = build_model(config.model, x.shape[1], rng, config.hidden_width)

    history = []
    for epoch in range(config.epochs):
        sigma = config.sigma_for_epoch(epoch)
        order = rng.permutation(n)
        batch_losses = []
        masked_out = 0

        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            outputs, cache = model.forward(x[idx])
            result = batch_loss(config, outputs, targets[idx], sigma)
            if not np.isfinite(result.loss):
                raise TrainingDiverged(epoch)

            model.apply_gradients(model.backward(cache, result.grad), config.learning_rate)
            if not model.is_finite():
                raise TrainingDiverged(epoch, "non-finite parameters")

            batch_losses.append(result.loss)
            masked_out += result.masked_out_count
            if on_step is not None:
                on_step(model)

        stats = EpochStats(
            epoch=epoch,
            sigma=sigma,
            train_loss=float(np.mean(batch_losses)),
            masked_out_count=masked_out,
            model_metric=model_metric(model, dataset),
        )
        history.append(stats)
        logger.debug(
            "epoch_done | epoch=%d | sigma=%.4f | loss=%.6f | masked_out=%d | metric=%.6f",
            epoch, sigma, stats.train_loss, masked_out, stats.model_metric,
        )

    logger.info(
        "training_done | loss=%s | model=%s | epochs=%d | final_metric=%.6f",
        config.loss_kind, config.model, config.epochs, history[-1].model_metric,
    )
    return model, history
