"""Linear classifiers: softmax regression and a Pegasos-style SVM.

The loss/gradient routines live at module level so the gradient checker can
probe exactly the code the optimizers use.
"""

from __future__ import annotations

import numpy as np

from .base import content_order

__all__ = [
    "PegasosSVM",
    "SoftmaxRegression",
    "hinge_loss_and_grad",
    "softmax_loss_and_grad",
]


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_loss_and_grad(
    W: np.ndarray, b: np.ndarray, X: np.ndarray, y_idx: np.ndarray, lam: float
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy of softmax(XW + b) with L2 on W (bias free)."""
    n = len(X)
    scores = X @ W + b
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    log_p = shifted[np.arange(n), y_idx] - log_z
    loss = -log_p.mean() + 0.5 * lam * float((W * W).sum())
    p = softmax(scores)
    p[np.arange(n), y_idx] -= 1.0
    p /= n
    grad_w = X.T @ p + lam * W
    grad_b = p.sum(axis=0)
    return loss, grad_w, grad_b


class SoftmaxRegression:
    """Multinomial logistic regression by full-batch gradient descent.

    Backtracking (Armijo) line search picks the step, iterating until the
    gradient norm reaches the tolerance or the iteration cap. Weights start
    at zero, and rows are canonically ordered first, so the fit is exactly
    invariant to permutations of the training rows.
    """

    DEFAULTS = {"lam": 1e-4, "tol": 1e-6, "max_iter": 500}

    def __init__(self, W: np.ndarray, b: np.ndarray, lam: float):
        self.W = W  # (d, k)
        self.b = b  # (k,)
        self.lam = lam

    @classmethod
    def fit(cls, X: np.ndarray, y_idx: np.ndarray, n_classes: int, params: dict, seed) -> "SoftmaxRegression":
        opts = {**cls.DEFAULTS, **params}
        lam, tol, max_iter = float(opts["lam"]), float(opts["tol"]), int(opts["max_iter"])
        order = content_order(X, y_idx)
        X = X[order]
        y_idx = y_idx[order]
        d = X.shape[1]
        W = np.zeros((d, n_classes))
        b = np.zeros(n_classes)
        step = 1.0
        loss, gw, gb = softmax_loss_and_grad(W, b, X, y_idx, lam)
        for _ in range(max_iter):
            gnorm_sq = float((gw * gw).sum() + (gb * gb).sum())
            if np.sqrt(gnorm_sq) <= tol:
                break
            step = min(step * 2.0, 1e4)
            while step > 1e-12:
                W_new = W - step * gw
                b_new = b - step * gb
                new_loss, gw_new, gb_new = softmax_loss_and_grad(W_new, b_new, X, y_idx, lam)
                if new_loss <= loss - 0.5 * step * gnorm_sq:
                    W, b, loss, gw, gb = W_new, b_new, new_loss, gw_new, gb_new
                    break
                step *= 0.5
            else:
                break
        return cls(W, b, lam)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(X @ self.W + self.b)

    def params_dict(self) -> dict:
        return {"W": self.W.tolist(), "b": self.b.tolist(), "lam": self.lam}

    @classmethod
    def from_params(cls, data: dict) -> "SoftmaxRegression":
        return cls(np.asarray(data["W"]), np.asarray(data["b"]), data["lam"])


def hinge_loss_and_grad(
    W: np.ndarray, b: np.ndarray, X: np.ndarray, y_idx: np.ndarray, lam: float
) -> tuple[float, np.ndarray, np.ndarray]:
    """One-vs-rest hinge objective summed over classes, L2 on weights.

    For each class c the target is +1 for members and -1 otherwise; the
    per-class term is mean(max(0, 1 - t * (Xw_c + b_c))) + lam/2 ||w_c||^2.
    The subgradient uses the margin<1 active set, so it is the derivative
    everywhere except exactly at the hinge.
    """
    n, _ = X.shape
    k = W.shape[1]
    targets = np.where(y_idx[:, None] == np.arange(k)[None, :], 1.0, -1.0)  # (n, k)
    margins = targets * (X @ W + b)
    slack = np.maximum(0.0, 1.0 - margins)
    loss = float(slack.mean(axis=0).sum()) + 0.5 * lam * float((W * W).sum())
    active = (margins < 1.0).astype(np.float64) * targets / n
    grad_w = -(X.T @ active) + lam * W
    grad_b = -active.sum(axis=0)
    return loss, grad_w, grad_b


class PegasosSVM:
    """One-vs-rest linear SVM trained with the Pegasos SGD schedule.

    Learning rate 1/(lam*t) with per-epoch seeded shuffling; the bias is
    unregularized and only moves on margin violations. Stacking needs
    probabilities, so per-class margins pass through a softmax.
    """

    DEFAULTS = {"lam": 1e-4, "epochs": 20}

    def __init__(self, W: np.ndarray, b: np.ndarray, lam: float):
        self.W = W  # (d, k)
        self.b = b  # (k,)
        self.lam = lam

    @classmethod
    def fit(cls, X: np.ndarray, y_idx: np.ndarray, n_classes: int, params: dict, seed) -> "PegasosSVM":
        opts = {**cls.DEFAULTS, **params}
        lam, epochs = float(opts["lam"]), int(opts["epochs"])
        n, d = X.shape
        W = np.zeros((d, n_classes))
        b = np.zeros(n_classes)
        for c in range(n_classes):
            rng = np.random.default_rng(np.random.SeedSequence([seed, c]))
            t = 0
            w = W[:, c]
            targets = np.where(y_idx == c, 1.0, -1.0)
            for _ in range(epochs):
                for i in rng.permutation(n):
                    t += 1
                    eta = 1.0 / (lam * t)
                    violated = targets[i] * (X[i] @ w + b[c]) < 1.0
                    w *= 1.0 - eta * lam
                    if violated:
                        w += eta * targets[i] * X[i]
                        b[c] += eta * targets[i]
        return cls(W, b, lam)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(X @ self.W + self.b)

    def params_dict(self) -> dict:
        return {"W": self.W.tolist(), "b": self.b.tolist(), "lam": self.lam}

    @classmethod
    def from_params(cls, data: dict) -> "PegasosSVM":
        return cls(np.asarray(data["W"]), np.asarray(data["b"]), data["lam"])
