import numpy as np
import pytest

from analysis.errors import InvalidInput, TrainingDiverged
from analysis.losses import MaskMode, SigmaSchedule
from analysis.training import TrainConfig, balanced_accuracy, train
from data.synthetic import gen_classification, gen_regression


def test_clean_recovery_when_signal_dominates_targets():
    data = gen_regression(n=2000, d=3, outlier_frac=0.0, noise_std=0.05, seed=0, weight_scale=2.0)
    config = TrainConfig(epochs=200, batch_size=64, learning_rate=0.05, loss_kind="zmse", threshold=2.0)
    model, history = train(data, config)
    rel = np.linalg.norm(model.weights - data.true_weights) / np.linalg.norm(data.true_weights)
    assert rel <= 0.02
    assert len(history) == 200


def test_zmse_beats_mse_on_gross_outliers():
    wins = 0
    for seed in range(20):
        data = gen_regression(n=1000, d=1, outlier_frac=0.1, margin=100.0, noise_std=1.0, seed=seed)
        common = dict(epochs=50, batch_size=200, learning_rate=0.05, seed=seed)
        robust, _ = train(data, TrainConfig(loss_kind="zmse", threshold=2.0, mask_mode=MaskMode.TARGET_Z, **common))
        plain, _ = train(data, TrainConfig(loss_kind="mse", **common))
        robust_err = np.abs(robust.weights - data.true_weights).sum()
        plain_err = np.abs(plain.weights - data.true_weights).sum()
        if robust_err < plain_err:
            wins += 1
    assert wins >= 18


def _slope_rel_error(model, data):
    return np.linalg.norm(model.weights - data.true_weights) / np.linalg.norm(data.true_weights)


def test_target_z_mask_attenuates_slope_when_noise_dominates():
    # Default generator: noise dominates the target spread, so cutting large
    # targets also cuts large |x·w| and flattens the fit. Error z-scores do not.
    data = gen_regression(n=2000, d=3, outlier_frac=0.0, seed=0)
    common = dict(epochs=200, batch_size=64, learning_rate=0.05, loss_kind="zmse", threshold=2.0)
    target_z, _ = train(data, TrainConfig(mask_mode=MaskMode.TARGET_Z, **common))
    error_z, _ = train(data, TrainConfig(mask_mode=MaskMode.ERROR_Z, **common))

    assert np.linalg.norm(target_z.weights) < np.linalg.norm(data.true_weights)
    assert _slope_rel_error(target_z, data) > 0.02
    assert _slope_rel_error(error_z, data) < _slope_rel_error(target_z, data)


def test_zmse_mostly_beats_mse_at_default_margin():
    wins = 0
    for seed in range(20):
        data = gen_regression(n=1000, d=1, outlier_frac=0.1, margin=6.0, noise_std=1.0, seed=seed)
        common = dict(epochs=50, batch_size=200, learning_rate=0.05, seed=seed)
        robust, _ = train(data, TrainConfig(loss_kind="zmse", threshold=2.0, mask_mode=MaskMode.TARGET_Z, **common))
        plain, _ = train(data, TrainConfig(loss_kind="mse", **common))
        if np.abs(robust.weights - data.true_weights).sum() < np.abs(plain.weights - data.true_weights).sum():
            wins += 1
    assert wins >= 12


def test_huge_threshold_follows_the_plain_trajectory():
    data = gen_regression(n=500, d=2, outlier_frac=0.1, seed=3)
    trajectories = {}
    for kind, threshold in (("zmse", 1e9), ("mse", 2.0)):
        steps = []
        config = TrainConfig(epochs=5, batch_size=50, loss_kind=kind, threshold=threshold, seed=1)
        train(data, config, on_step=lambda m: steps.append(
            np.concatenate([m.params["weights"], m.params["bias"]]).copy()))
        trajectories[kind] = np.array(steps)

    assert trajectories["zmse"].shape == trajectories["mse"].shape
    np.testing.assert_allclose(trajectories["zmse"], trajectories["mse"], rtol=0, atol=1e-9)


def test_annealed_mask_count_stabilises_inside_data_range():
    stable = 0
    for seed in range(20):
        data = gen_regression(n=1000, d=1, outlier_frac=0.1, margin=10.0, seed=seed)
        config = TrainConfig(
            epochs=40, batch_size=200, loss_kind="zmse",
            threshold=SigmaSchedule(3.5, 1.5), mask_mode=MaskMode.TARGET_Z, seed=seed,
        )
        _, history = train(data, config)
        counts = np.array([h.masked_out_count for h in history])
        quarter = len(counts) // 4
        if np.ptp(counts[-quarter:]) <= np.ptp(counts[:quarter]):
            stable += 1
    assert stable >= 18


def test_default_schedule_masks_nothing_until_sigma_is_reachable():
    data = gen_regression(n=2000, d=1, outlier_frac=0.1, seed=0)
    config = TrainConfig(epochs=100, batch_size=64, threshold=SigmaSchedule())
    _, history = train(data, config)

    # With ddof=1 no |z| in a batch of b can exceed (b - 1) / sqrt(b).
    reachable = 63 / 8
    early = [h.masked_out_count for h in history if h.sigma > reachable]
    assert len(early) > 25
    assert early == [0] * len(early)
    assert history[-1].masked_out_count > 0


def test_run_length_sets_the_annealing_span():
    data = gen_regression(n=200, seed=0)
    runs = []
    for max_epochs in (7, 500):
        config = TrainConfig(epochs=10, batch_size=32, threshold=SigmaSchedule(100.0, 2.0, max_epochs))
        _, history = train(data, config)
        runs.append([h.sigma for h in history])
    assert runs[0] == runs[1]
    assert runs[0][-1] == pytest.approx(2.0, abs=1e-12)


def test_annealed_sigma_runs_from_start_to_end():
    data = gen_regression(n=200, seed=0)
    config = TrainConfig(epochs=10, batch_size=32, threshold=SigmaSchedule(100.0, 2.0))
    _, history = train(data, config)
    assert history[0].sigma == 100.0
    assert history[-1].sigma == pytest.approx(2.0, abs=1e-12)


def test_plain_losses_never_mask():
    data = gen_regression(n=300, seed=2)
    _, history = train(data, TrainConfig(epochs=5, loss_kind="mse"))
    assert all(h.masked_out_count == 0 for h in history)

    cls = gen_classification(n=300, seed=2)
    _, history = train(cls, TrainConfig(epochs=5, loss_kind="bce", model="logistic"))
    assert all(h.masked_out_count == 0 for h in history)


def test_classification_training_reports_balanced_accuracy():
    data = gen_classification(n=1000, d=2, outlier_frac=0.1, seed=4)
    config = TrainConfig(epochs=20, batch_size=64, loss_kind="zbce", model="logistic", threshold=2.0)
    _, history = train(data, config)
    assert all(0.0 <= h.model_metric <= 1.0 for h in history)
    assert history[-1].model_metric >= 0.95
    assert all(h.masked_out_count <= data.n for h in history)


def test_mlp_trains_on_regression():
    data = gen_regression(n=500, d=2, outlier_frac=0.1, seed=6)
    config = TrainConfig(epochs=30, batch_size=50, loss_kind="zmse", model="mlp", hidden_width=8, learning_rate=0.02)
    _, history = train(data, config)
    assert history[-1].model_metric < history[0].model_metric


def test_divergence_is_reported_with_epoch():
    data = gen_regression(n=200, d=1, outlier_frac=0.0, seed=0, weight_scale=1.0)
    config = TrainConfig(epochs=50, batch_size=10, loss_kind="mse", learning_rate=1e3)
    with pytest.raises(TrainingDiverged, match=r"Training diverged at epoch \d+"):
        train(data, config)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"epochs": 0},
        {"batch_size": 0},
        {"learning_rate": 0.0},
        {"loss_kind": "huber"},
        {"model": "cnn"},
        {"threshold": -1.0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(InvalidInput):
        TrainConfig(**kwargs)


def test_incompatible_dataset_and_config():
    with pytest.raises(InvalidInput):
        train(gen_classification(n=100, seed=0), TrainConfig(loss_kind="zmse"))
    with pytest.raises(InvalidInput):
        train(gen_regression(n=100, seed=0), TrainConfig(loss_kind="zmse", model="logistic"))


def test_balanced_accuracy():
    logits = np.array([1.0, -1.0, 2.0, -3.0, 0.5, -0.5])
    truth = np.array([1, 0, 1, 0, 0, 0])
    # class 1: 2/2, class 0: 3/4
    assert balanced_accuracy(logits, truth) == pytest.approx(0.875)
