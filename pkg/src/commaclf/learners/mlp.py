"""One-hidden-layer perceptron: ReLU, softmax output, momentum SGD."""

from __future__ import annotations

import numpy as np

from .linear import softmax

__all__ = ["MLP", "mlp_loss_and_grad"]

Params = tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]  # W1, b1, W2, b2


def mlp_loss_and_grad(params: Params, X: np.ndarray, y_idx: np.ndarray) -> tuple[float, Params]:
    """Mean cross-entropy of the network and its backprop gradients."""
    W1, b1, W2, b2 = params
    n = len(X)
    Z = X @ W1 + b1
    H = np.maximum(Z, 0.0)
    scores = H @ W2 + b2
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    loss = float(-(shifted[np.arange(n), y_idx] - log_z).mean())
    G = softmax(scores)
    G[np.arange(n), y_idx] -= 1.0
    G /= n
    grad_w2 = H.T @ G
    grad_b2 = G.sum(axis=0)
    GH = G @ W2.T
    GH[Z <= 0.0] = 0.0
    grad_w1 = X.T @ GH
    grad_b1 = GH.sum(axis=0)
    return loss, (grad_w1, grad_b1, grad_w2, grad_b2)


def glorot_init(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class MLP:
    """Mini-batch SGD with momentum over the shared loss/grad routine."""

    DEFAULTS = {"hidden": 100, "batch_size": 32, "learning_rate": 0.01, "momentum": 0.9, "epochs": 30}

    def __init__(self, params: Params):
        self.params = params

    @classmethod
    def fit(cls, X: np.ndarray, y_idx: np.ndarray, n_classes: int, params: dict, seed) -> "MLP":
        opts = {**cls.DEFAULTS, **params}
        hidden, batch = int(opts["hidden"]), int(opts["batch_size"])
        lr, mu, epochs = float(opts["learning_rate"]), float(opts["momentum"]), int(opts["epochs"])
        n, d = X.shape
        rng = np.random.default_rng(seed)
        weights = [
            glorot_init(rng, d, hidden),
            np.zeros(hidden),
            glorot_init(rng, hidden, n_classes),
            np.zeros(n_classes),
        ]
        velocity = [np.zeros_like(w) for w in weights]
        for _ in range(epochs):
            rows = rng.permutation(n)
            for start in range(0, n, batch):
                sel = rows[start : start + batch]
                _, grads = mlp_loss_and_grad(tuple(weights), X[sel], y_idx[sel])
                for w, v, g in zip(weights, velocity, grads):
                    v *= mu
                    v -= lr * g
                    w += v
        return cls(tuple(weights))

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        W1, b1, W2, b2 = self.params
        H = np.maximum(X @ W1 + b1, 0.0)
        return softmax(H @ W2 + b2)

    def params_dict(self) -> dict:
        W1, b1, W2, b2 = self.params
        return {"W1": W1.tolist(), "b1": b1.tolist(), "W2": W2.tolist(), "b2": b2.tolist()}

    @classmethod
    def from_params(cls, data: dict) -> "MLP":
        return cls(tuple(np.asarray(data[k]) for k in ("W1", "b1", "W2", "b2")))
