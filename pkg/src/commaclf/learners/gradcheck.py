"""Finite-difference validation of the SGD-trained learners' gradients."""

from __future__ import annotations

import numpy as np

from .base import LearnerSpec
from .linear import hinge_loss_and_grad, softmax_loss_and_grad
from .mlp import mlp_loss_and_grad

__all__ = ["gradient_check"]

_CHECKABLE = ("logistic_regression", "mlp", "linear_svm")

# Margin (SVM) and pre-activation (ReLU) clearance demanded of the random
# probe point, so central differences never straddle a non-differentiability.
_KINK_CLEARANCE = 1e-3


def _flatten(arrays) -> np.ndarray:
    return np.concatenate([np.asarray(a).ravel() for a in arrays])


def _unflatten(vec: np.ndarray, shapes) -> list[np.ndarray]:
    out = []
    pos = 0
    for shape in shapes:
        size = int(np.prod(shape))
        out.append(vec[pos : pos + size].reshape(shape))
        pos += size
    return out


def gradient_check(spec: LearnerSpec, X: np.ndarray, y, h: float = 1e-5) -> float:
    """Max relative deviation between analytic and central-difference gradients.

    Probes the exact loss/gradient routines the optimizers use, at random
    parameters drawn from the spec's seed. Points too close to a hinge or
    ReLU kink are resampled rather than compared.
    """
    if spec.kind not in _CHECKABLE:
        raise ValueError(f"gradient_check supports {_CHECKABLE}, not {spec.kind!r}")
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] > 20 or X.shape[1] > 10:
        raise ValueError("gradient_check is meant for small instances (<= 20 rows, <= 10 dims)")
    classes, y_idx = np.unique(np.asarray(y), return_inverse=True)
    k = len(classes)
    d = X.shape[1]
    rng = np.random.default_rng(spec.seed if spec.seed is not None else 0)
    lam = float(spec.params.get("lam", 1e-4))

    if spec.kind == "mlp":
        hidden = int(spec.params.get("hidden", 8))
        shapes = [(d, hidden), (hidden,), (hidden, k), (k,)]

        def sample():
            return [rng.normal(0.0, 0.5, size=s) for s in shapes]

        def clear_of_kinks(params):
            W1, b1, _, _ = params
            return np.abs(X @ W1 + b1).min() > _KINK_CLEARANCE

        def loss(vec):
            W1, b1, W2, b2 = _unflatten(vec, shapes)
            return mlp_loss_and_grad((W1, b1, W2, b2), X, y_idx)[0]

        def grad(vec):
            W1, b1, W2, b2 = _unflatten(vec, shapes)
            return _flatten(mlp_loss_and_grad((W1, b1, W2, b2), X, y_idx)[1])

    else:
        shapes = [(d, k), (k,)]
        loss_and_grad = softmax_loss_and_grad if spec.kind == "logistic_regression" else hinge_loss_and_grad

        def sample():
            return [rng.normal(0.0, 0.5, size=s) for s in shapes]

        def clear_of_kinks(params):
            if spec.kind == "logistic_regression":
                return True
            W, b = params
            targets = np.where(y_idx[:, None] == np.arange(k)[None, :], 1.0, -1.0)
            margins = targets * (X @ W + b)
            return np.abs(1.0 - margins).min() > _KINK_CLEARANCE

        def loss(vec):
            W, b = _unflatten(vec, shapes)
            return loss_and_grad(W, b, X, y_idx, lam)[0]

        def grad(vec):
            W, b = _unflatten(vec, shapes)
            _, gw, gb = loss_and_grad(W, b, X, y_idx, lam)
            return _flatten([gw, gb])

    params = sample()
    for _ in range(200):
        if clear_of_kinks(params):
            break
        params = sample()
    else:
        raise RuntimeError("could not sample parameters clear of non-differentiable points")

    theta = _flatten(params)
    analytic = grad(theta)
    numeric = np.zeros_like(analytic)
    for j in range(len(theta)):
        bumped = theta.copy()
        bumped[j] += h
        up = loss(bumped)
        bumped[j] -= 2 * h
        down = loss(bumped)
        numeric[j] = (up - down) / (2 * h)
    scale = np.maximum(np.abs(analytic) + np.abs(numeric), 1e-8)
    return float((np.abs(analytic - numeric) / scale).max())
