"""
Minimal models trained by hand-written backprop: a linear map (regression or
logistic logits) and a one-hidden-layer tanh network with a scalar output.

`forward` returns the outputs plus a cache; `backward` takes dLoss/dOutput per
sample (the kernel's `grad`) and returns dLoss/dParameter for every parameter.
"""
import numpy as np

from analysis.errors import InvalidInput

MODEL_KINDS = ("linear", "logistic", "mlp")


class Model:
    kind = "base"

    def __init__(self):
        self.params: dict[str, np.ndarray] = {}

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, dict]:
        raise NotImplementedError

    def backward(self, cache: dict, grad_out: np.ndarray) -> dict[str, np.ndarray]:
        raise NotImplementedError

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x)[0]

    def apply_gradients(self, grads: dict[str, np.ndarray], learning_rate: float) -> None:
        for name, grad in grads.items():
            self.params[name] -= learning_rate * grad

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.params.values())


class LinearModel(Model):
    """out = x·w + b. Serves both the regression ("linear") and logistic heads."""

    def __init__(self, n_features: int, kind: str = "linear"):
        super().__init__()
        self.kind = kind
        self.params = {
            "weights": np.zeros(n_features),
            "bias": np.zeros(1),
        }

    @property
    def weights(self) -> np.ndarray:
        return self.params["weights"]

    @property
    def bias(self) -> float:
        return float(self.params["bias"][0])

    def forward(self, x):
        out = x @ self.params["weights"] + self.params["bias"][0]
        return out, {"x": x}

    def backward(self, cache, grad_out):
        return {
            "weights": cache["x"].T @ grad_out,
            "bias": np.array([grad_out.sum()]),
        }


class MLPModel(Model):
    """out = tanh(x·W1 + b1)·w2 + b2."""

    kind = "mlp"

    def __init__(self, n_features: int, width: int, rng: np.random.Generator):
        super().__init__()
        self.params = {
            "W1": rng.normal(0.0, 1.0 / np.sqrt(n_features), size=(n_features, width)),
            "b1": np.zeros(width),
            "w2": rng.normal(0.0, 1.0 / np.sqrt(width), size=width),
            "b2": np.zeros(1),
        }

    def forward(self, x):
        hidden = np.tanh(x @ self.params["W1"] + self.params["b1"])
        out = hidden @ self.params["w2"] + self.params["b2"][0]
        return out, {"x": x, "hidden": hidden}

    def backward(self, cache, grad_out):
        hidden = cache["hidden"]
        grad_hidden = np.outer(grad_out, self.params["w2"])
        grad_pre = grad_hidden * (1.0 - hidden * hidden)
        return {
            "W1": cache["x"].T @ grad_pre,
            "b1": grad_pre.sum(axis=0),
            "w2": hidden.T @ grad_out,
            "b2": np.array([grad_out.sum()]),
        }


def build_model(kind: str, n_features: int, rng: np.random.Generator, hidden_width: int = 16) -> Model:
    if kind in ("linear", "logistic"):
        return LinearModel(n_features, kind=kind)
    if kind == "mlp":
        return MLPModel(n_features, hidden_width, rng)
    raise InvalidInput(f"Unknown model {kind!r}; expected one of {', '.join(MODEL_KINDS)}")
