"""
Decision-cutoff inference from the inlier output distributions of each class.

The Gaussian path works in logit space and takes the intersection of the two
class Gaussians nearest the midpoint of their means. The skew-normal path works
on sigmoid probabilities, where squashing makes the class distributions skewed.
"""
import logging
from dataclasses import dataclass

import numpy as np

from analysis.errors import DegenerateInput, InsufficientData, InvalidInput, NoSignChange
from analysis.losses import class_mask
from analysis.stats import (
    SKEWNORM_MIN_SAMPLES,
    GaussianParams,
    SkewNormalParams,
    brent_root,
    fit_gaussian,
    fit_skewnorm,
    gauss_intersection,
    gaussian_pdf,
    sigmoid,
    skewnorm_pdf,
)

logger = logging.getLogger(__name__)

DEFAULT_BRACKET = (0.001, 0.999)


@dataclass
class CutoffResult:
    prob_cutoff: float
    method: str
    class0_fit: GaussianParams | SkewNormalParams
    class1_fit: GaussianParams | SkewNormalParams
    inlier_counts: tuple[int, int]
    logit_cutoff: float | None = None
    used_fallback: bool = False

    def as_row(self) -> dict:
        return {
            "method": self.method,
            "logit_cutoff": self.logit_cutoff,
            "prob_cutoff": self.prob_cutoff,
            "inliers_0": self.inlier_counts[0],
            "inliers_1": self.inlier_counts[1],
            "used_fallback": self.used_fallback,
        }


def _split(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels, dtype=np.float64).reshape(-1)
    if scores.size != labels.size:
        raise InvalidInput(f"{scores.size} scores but {labels.size} labels")
    return scores, labels


def class_inlier_mask(scores, labels, threshold: float = 2.0) -> np.ndarray:
    """True where a score lies within `threshold` class-standard-deviations of its class mean."""
    scores, labels = _split(scores, labels)
    return class_mask(scores, labels, threshold)


def _inliers_by_class(scores, labels, threshold) -> tuple[np.ndarray, np.ndarray]:
    scores, labels = _split(scores, labels)
    mask = class_mask(scores, labels, threshold)
    return scores[mask & (labels == 0.0)], scores[mask & (labels == 1.0)]


def _open_unit(p: float) -> float:
    """Keep a probability strictly inside (0, 1) once sigmoid saturates."""
    return float(np.clip(p, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0)))


def gaussian_cutoff(p0: GaussianParams, p1: GaussianParams) -> float:
    """The intersection nearest (mu0 + mu1) / 2; ties go to the smaller root."""
    roots = gauss_intersection(p0, p1)
    if not roots:
        raise DegenerateInput("Class Gaussians do not intersect")
    midpoint = (p0.mu + p1.mu) / 2.0
    return min(roots, key=lambda r: (abs(r - midpoint), r))


def optimal_logit_cutoff(logits, labels, z_threshold: float = 2.0) -> CutoffResult:
    logits_0, logits_1 = _inliers_by_class(logits, labels, z_threshold)
    if len(logits_0) < 2 or len(logits_1) < 2:
        raise InsufficientData(
            "Not enough inlier points in each class to fit Gaussians. "
            f"(class 0: {len(logits_0)}, class 1: {len(logits_1)})"
        )

    fit0 = fit_gaussian(logits_0)
    fit1 = fit_gaussian(logits_1)
    cutoff = gaussian_cutoff(fit0, fit1)
    return CutoffResult(
        prob_cutoff=_open_unit(sigmoid(cutoff)),
        method="gaussian",
        class0_fit=fit0,
        class1_fit=fit1,
        inlier_counts=(len(logits_0), len(logits_1)),
        logit_cutoff=float(cutoff),
    )


def optimal_prob_cutoff_skewnorm(
    logits,
    labels,
    z_threshold: float = 2.0,
    bracket: tuple[float, float] = DEFAULT_BRACKET,
) -> CutoffResult:
    """
    Fit a skew-normal to each class's inlier probabilities and return where the
    two densities cross inside `bracket`. Without a sign change in the bracket
    the cutoff falls back to the midpoint of the two class mean probabilities.
    """
    logits, labels = _split(logits, labels)
    probs = sigmoid(logits)
    probs_0, probs_1 = _inliers_by_class(probs, labels, z_threshold)
    if len(probs_0) < SKEWNORM_MIN_SAMPLES or len(probs_1) < SKEWNORM_MIN_SAMPLES:
        raise InsufficientData(
            "Not enough inlier points in each class to fit SkewNormals. "
            f"(class 0: {len(probs_0)}, class 1: {len(probs_1)})"
        )

    fit0 = fit_skewnorm(probs_0)
    fit1 = fit_skewnorm(probs_1)

    def density_gap(x: float) -> float:
        return float(skewnorm_pdf(x, fit0) - skewnorm_pdf(x, fit1))

    used_fallback = False
    try:
        cutoff = brent_root(density_gap, bracket[0], bracket[1])
    except NoSignChange:
        cutoff = float((probs_0.mean() + probs_1.mean()) / 2.0)
        used_fallback = True
        logger.warning("skewnorm_cutoff_fallback | midpoint=%.6f", cutoff)

    return CutoffResult(
        prob_cutoff=cutoff,
        method="skewnormal",
        class0_fit=fit0,
        class1_fit=fit1,
        inlier_counts=(len(probs_0), len(probs_1)),
        used_fallback=used_fallback,
    )


def pdf_gap(result: CutoffResult, x: float) -> float:
    """|pdf₀(x) − pdf₁(x)| under the fitted class distributions."""
    pdf = gaussian_pdf if result.method == "gaussian" else skewnorm_pdf
    return float(abs(pdf(x, result.class0_fit) - pdf(x, result.class1_fit)))
