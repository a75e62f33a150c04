import numpy as np
import pytest

from analysis.cutoff import (
    class_inlier_mask,
    gaussian_cutoff,
    optimal_logit_cutoff,
    optimal_prob_cutoff_skewnorm,
    pdf_gap,
)
from analysis.errors import DegenerateInput, InsufficientData, InvalidInput
from analysis.stats import GaussianParams, sigmoid, skewnorm_pdf


def two_class_logits(seed, n=1000, mean=2.0, std0=1.0, std1=1.0):
    rng = np.random.default_rng(seed)
    logits = np.concatenate([rng.normal(-mean, std0, size=n), rng.normal(mean, std1, size=n)])
    labels = np.repeat([0.0, 1.0], n)
    return logits, labels


def test_class_inlier_mask_worked_example():
    logits = [2.5, 0.2, -1.1, 1.3, -2.0, 3.0]
    labels = [1, 1, 0, 1, 0, 1]
    assert class_inlier_mask(logits, labels, 1.1).tolist() == [True, False, True, True, True, True]
    assert class_inlier_mask(logits, labels, 1e9).all()


def test_class_inlier_mask_constant_class():
    mask = class_inlier_mask([1.0, 1.0, 1.0, -3.0, 0.0, 3.0], [0, 0, 0, 1, 1, 1], 0.5)
    assert mask[:3].all()
    assert mask.tolist()[3:] == [False, True, False]


def test_class_inlier_mask_length_mismatch():
    with pytest.raises(InvalidInput):
        class_inlier_mask([0.1, 0.2], [0])


def test_gaussian_cutoff_exact_populations():
    cutoff = gaussian_cutoff(GaussianParams(-2.0, 1.0), GaussianParams(2.0, 1.0))
    assert cutoff == 0.0
    assert sigmoid(cutoff) == 0.5


def test_gaussian_cutoff_picks_root_nearest_midpoint():
    assert gaussian_cutoff(GaussianParams(0.0, 1.0), GaussianParams(4.0, 2.0)) == pytest.approx(1.660, abs=1e-3)


def test_logit_cutoff_on_symmetric_classes():
    passed = 0
    for seed in range(20):
        result = optimal_logit_cutoff(*two_class_logits(seed), z_threshold=2.0)
        assert result.method == "gaussian"
        assert result.prob_cutoff == pytest.approx(sigmoid(result.logit_cutoff), abs=1e-12)
        if abs(result.logit_cutoff) <= 0.15 and abs(result.prob_cutoff - 0.5) <= 0.05:
            passed += 1
    assert passed >= 19


def test_skewnorm_cutoff_on_symmetric_classes():
    passed = 0
    for seed in range(20):
        result = optimal_prob_cutoff_skewnorm(*two_class_logits(seed), z_threshold=2.0)
        assert result.method == "skewnormal"
        assert result.logit_cutoff is None
        assert 0.0 < result.prob_cutoff < 1.0
        if abs(result.prob_cutoff - 0.5) <= 0.05:
            passed += 1
    assert passed >= 19


def test_skewnorm_cutoff_is_a_density_crossing():
    result = optimal_prob_cutoff_skewnorm(*two_class_logits(3))
    assert not result.used_fallback
    r = result.prob_cutoff
    scale = max(skewnorm_pdf(r, result.class0_fit), skewnorm_pdf(r, result.class1_fit))
    assert pdf_gap(result, r) <= 1e-6 * scale


def test_skewnorm_cutoff_falls_back_to_midpoint():
    # Class 1 sits inside class 0, so the density gap keeps its sign on the bracket.
    logits, labels = two_class_logits(0, mean=0.0, std0=1.0, std1=0.3)
    result = optimal_prob_cutoff_skewnorm(logits, labels)
    assert result.used_fallback
    assert result.prob_cutoff == pytest.approx(0.5, abs=0.03)


def test_logit_cutoff_crossing_and_sigmoid_consistency():
    result = optimal_logit_cutoff(*two_class_logits(7, mean=1.5, std0=0.8, std1=1.3))
    r = result.logit_cutoff
    assert pdf_gap(result, r) <= 1e-9
    assert result.prob_cutoff == pytest.approx(sigmoid(r), abs=1e-12)
    assert min(result.inlier_counts) >= 2


def test_logit_cutoff_label_swap():
    logits, labels = two_class_logits(11, mean=1.0, std0=0.7, std1=1.4)
    base = optimal_logit_cutoff(logits, labels)
    swapped = optimal_logit_cutoff(logits, 1.0 - labels)
    assert swapped.logit_cutoff == pytest.approx(base.logit_cutoff, abs=1e-9)


@pytest.mark.parametrize("shift", [-4.0, 0.5, 3.0])
def test_logit_cutoff_translation(shift):
    logits, labels = two_class_logits(12, mean=1.0, std0=0.7, std1=1.4)
    base = optimal_logit_cutoff(logits, labels)
    moved = optimal_logit_cutoff(logits + shift, labels)
    assert moved.logit_cutoff == pytest.approx(base.logit_cutoff + shift, abs=1e-9)


def test_logit_cutoff_needs_two_inliers_per_class():
    logits = np.array([-2.0, 1.5, 2.0, 2.5, 3.0])
    labels = np.array([0.0, 1.0, 1.0, 1.0, 1.0])
    with pytest.raises(InsufficientData, match=r"class 0: 1, class 1: 4"):
        optimal_logit_cutoff(logits, labels)


def test_skewnorm_cutoff_needs_eight_inliers_per_class():
    rng = np.random.default_rng(0)
    logits = np.concatenate([rng.normal(-2, 1, size=50), [1.0, 2.0, 3.0]])
    labels = np.concatenate([np.zeros(50), np.ones(3)])
    with pytest.raises(InsufficientData, match="SkewNormals"):
        optimal_prob_cutoff_skewnorm(logits, labels)


def test_cutoff_result_row():
    row = optimal_logit_cutoff(*two_class_logits(1)).as_row()
    assert list(row) == ["method", "logit_cutoff", "prob_cutoff", "inliers_0", "inliers_1", "used_fallback"]
    assert row["used_fallback"] is False


def test_logit_cutoff_identical_classes_is_degenerate():
    logits = np.array([-1.0, 0.0, 1.0, -1.0, 0.0, 1.0])
    labels = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])
    with pytest.raises(DegenerateInput):
        optimal_logit_cutoff(logits, labels)


def test_saturated_probability_cutoff_stays_below_one():
    logits, labels = two_class_logits(5)
    result = optimal_logit_cutoff(logits + 60.0, labels)
    assert result.logit_cutoff == pytest.approx(60.0, abs=1.0)
    assert 0.0 < result.prob_cutoff < 1.0
    assert result.prob_cutoff == np.nextafter(1.0, 0.0)
