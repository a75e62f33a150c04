import numpy as np
import pytest

from analysis.errors import InvalidInput
from analysis.losses import masked_bce_with_logits, masked_mse, z_mse_loss
from analysis.models import LinearModel, MLPModel, build_model


def _numeric_grads(model, loss_fn, h=1e-6):
    grads = {}
    for name, param in model.params.items():
        grad = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            saved = param[idx]
            param[idx] = saved + h
            up = loss_fn()
            param[idx] = saved - h
            down = loss_fn()
            param[idx] = saved
            grad[idx] = (up - down) / (2 * h)
        grads[name] = grad
    return grads


def _rel_error(a, b):
    return np.max(np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-4))


def test_mlp_gradients_match_finite_differences():
    rng = np.random.default_rng(0)
    for case in range(100):
        d, width, size = int(rng.integers(1, 4)), int(rng.integers(2, 6)), int(rng.integers(2, 12))
        model = MLPModel(d, width, rng)
        x = rng.normal(size=(size, d))
        if case % 2:
            targets = rng.normal(size=size)
            mask = rng.random(size) < 0.8
            loss_fn = lambda: masked_mse(model.predict(x), targets, mask).loss  # noqa: E731
            out, cache = model.forward(x)
            grad_out = masked_mse(out, targets, mask).grad
        else:
            labels = (rng.random(size) < 0.5).astype(float)
            mask = rng.random(size) < 0.8
            loss_fn = lambda: masked_bce_with_logits(model.predict(x), labels, mask).loss  # noqa: E731
            out, cache = model.forward(x)
            grad_out = masked_bce_with_logits(out, labels, mask).grad

        analytic = model.backward(cache, grad_out)
        numeric = _numeric_grads(model, loss_fn)
        for name in model.params:
            assert _rel_error(analytic[name], numeric[name]) <= 1e-4, name


def test_linear_gradients_are_closed_form():
    rng = np.random.default_rng(1)
    model = LinearModel(3)
    model.params["weights"][:] = rng.normal(size=3)
    x = rng.normal(size=(20, 3))
    targets = rng.normal(size=20)
    out, cache = model.forward(x)
    result = z_mse_loss(out, targets, 2.0)
    grads = model.backward(cache, result.grad)
    np.testing.assert_allclose(grads["weights"], x.T @ result.grad)
    assert grads["bias"][0] == pytest.approx(result.grad.sum())


def test_apply_gradients_and_finiteness():
    model = LinearModel(2)
    model.apply_gradients({"weights": np.array([1.0, -2.0]), "bias": np.array([0.5])}, 0.1)
    np.testing.assert_allclose(model.weights, [-0.1, 0.2])
    assert model.bias == pytest.approx(-0.05)
    assert model.is_finite()
    model.params["bias"][0] = np.inf
    assert not model.is_finite()


def test_build_model():
    rng = np.random.default_rng(0)
    assert isinstance(build_model("linear", 2, rng), LinearModel)
    assert build_model("logistic", 2, rng).kind == "logistic"
    mlp = build_model("mlp", 2, rng, hidden_width=7)
    assert mlp.params["W1"].shape == (2, 7)
    with pytest.raises(InvalidInput):
        build_model("cnn", 2, rng)
