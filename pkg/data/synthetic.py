"""
Synthetic contaminated datasets with ground-truth outlier flags.

Regression: a noisy linear relation where a planted fraction of targets is pushed
at least `margin` noise-standard-deviations off the line. Classification: two
Gaussian clusters split along the first axis, with a planted fraction of each
cluster labelled as the other one.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from analysis.errors import InvalidInput

Seed = int | Sequence[int]


@dataclass
class SyntheticRegressionSet:
    x: np.ndarray
    y: np.ndarray
    outlier_flag: np.ndarray
    true_weights: np.ndarray
    true_bias: float
    noise_std: float

    task = "regression"

    @property
    def n(self) -> int:
        return int(self.y.size)

    @property
    def targets(self) -> np.ndarray:
        return self.y

    @property
    def labels(self) -> None:
        return None

    def clean_targets(self) -> np.ndarray:
        """The noiseless line w·x + b."""
        return self.x @ self.true_weights + self.true_bias


@dataclass
class SyntheticClassificationSet:
    x: np.ndarray
    label: np.ndarray
    outlier_flag: np.ndarray
    cluster: np.ndarray
    cluster_sep: float

    task = "classification"

    @property
    def n(self) -> int:
        return int(self.label.size)

    @property
    def targets(self) -> np.ndarray:
        return self.label.astype(np.float64)

    @property
    def labels(self) -> np.ndarray:
        return self.label

    @property
    def clean_label(self) -> np.ndarray:
        return self.cluster


def _planted_count(n: int, outlier_frac: float) -> int:
    return int(round(n * outlier_frac))


def gen_regression(
    n: int = 2000,
    d: int = 1,
    outlier_frac: float = 0.1,
    margin: float = 6.0,
    noise_std: float = 1.0,
    seed: Seed = 0,
    weight_scale: float = 0.5,
) -> SyntheticRegressionSet:
    if n < 10:
        raise InvalidInput(f"n must be at least 10, got {n}")
    if d < 1:
        raise InvalidInput(f"d must be at least 1, got {d}")
    if not 0.0 <= outlier_frac < 0.5:
        raise InvalidInput(f"outlier_frac must lie in [0, 0.5), got {outlier_frac}")
    if margin < 3.0:
        raise InvalidInput(f"margin must be at least 3, got {margin}")
    if not noise_std > 0 or not weight_scale > 0:
        raise InvalidInput("noise_std and weight_scale must be positive")

    rng = np.random.default_rng(seed)
    signs = rng.choice([-1.0, 1.0], size=d)
    weights = weight_scale * signs * rng.uniform(0.5, 1.0, size=d) / np.sqrt(d)
    bias = float(rng.uniform(-1.0, 1.0))
    x = rng.standard_normal((n, d))
    line = x @ weights + bias
    y = line + rng.normal(0.0, noise_std, size=n)

    flags = np.zeros(n, dtype=bool)
    n_out = _planted_count(n, outlier_frac)
    if n_out:
        idx = rng.choice(n, size=n_out, replace=False)
        offset_sign = rng.choice([-1.0, 1.0], size=n_out)
        offset = offset_sign * (margin + np.abs(rng.standard_normal(n_out))) * noise_std
        y[idx] = line[idx] + offset
        flags[idx] = True

    return SyntheticRegressionSet(
        x=x,
        y=y,
        outlier_flag=flags,
        true_weights=weights,
        true_bias=bias,
        noise_std=float(noise_std),
    )


def gen_classification(
    n: int = 2000,
    d: int = 2,
    outlier_frac: float = 0.1,
    cluster_sep: float = 6.0,
    seed: Seed = 0,
) -> SyntheticClassificationSet:
    if n < 20 or n % 2:
        raise InvalidInput(f"n must be even and at least 20, got {n}")
    if d < 1:
        raise InvalidInput(f"d must be at least 1, got {d}")
    if not 0.0 <= outlier_frac < 0.5:
        raise InvalidInput(f"outlier_frac must lie in [0, 0.5), got {outlier_frac}")
    if not cluster_sep > 0:
        raise InvalidInput(f"cluster_sep must be positive, got {cluster_sep}")

    rng = np.random.default_rng(seed)
    half = n // 2
    x = rng.standard_normal((n, d))
    cluster = np.repeat([0, 1], half)
    x[:, 0] += np.where(cluster == 1, cluster_sep / 2.0, -cluster_sep / 2.0)

    # Mislabel an even share of each cluster so the classes stay balanced.
    n_out = _planted_count(n, outlier_frac)
    per_cluster = (n_out // 2, n_out - n_out // 2)
    flags = np.zeros(n, dtype=bool)
    for cls, count in enumerate(per_cluster):
        if count:
            members = np.flatnonzero(cluster == cls)
            flags[rng.choice(members, size=count, replace=False)] = True
    label = np.where(flags, 1 - cluster, cluster)

    order = rng.permutation(n)
    return SyntheticClassificationSet(
        x=x[order],
        label=label[order],
        outlier_flag=flags[order],
        cluster=cluster[order],
        cluster_sep=float(cluster_sep),
    )


def model_free_scores(dataset) -> np.ndarray:
    """Raw targets for regression; the first-axis projection as a logit proxy for classification."""
    if dataset.task == "regression":
        return dataset.y
    return dataset.x[:, 0]
