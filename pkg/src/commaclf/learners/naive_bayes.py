"""Multinomial naive Bayes with Laplace smoothing, in log space."""

from __future__ import annotations

import numpy as np

from .base import content_order

__all__ = ["MultinomialNB"]


def _log_softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


class MultinomialNB:
    """P(class | doc) from per-class feature counts smoothed by alpha.

    Rows are summed in a content-determined order, so fitting is exactly
    invariant to permutations of the training set. Negative feature values
    (standardized surface counts) are clamped to zero for the count
    accumulation; scoring stays linear in the raw input.
    """

    def __init__(self, log_prior: np.ndarray, log_theta: np.ndarray, alpha: float):
        self.log_prior = log_prior  # (k,)
        self.log_theta = log_theta  # (k, d)
        self.alpha = alpha

    @classmethod
    def fit(cls, X: np.ndarray, y_idx: np.ndarray, n_classes: int, params: dict, seed) -> "MultinomialNB":
        alpha = float(params.get("alpha", 1.0))
        order = content_order(X, y_idx)
        X = X[order]
        y_idx = y_idx[order]
        d = X.shape[1]
        counts = np.zeros((n_classes, d))
        sizes = np.zeros(n_classes)
        clipped = np.clip(X, 0.0, None)
        for c in range(n_classes):
            counts[c] = clipped[y_idx == c].sum(axis=0)
            sizes[c] = np.count_nonzero(y_idx == c)
        log_prior = np.log(sizes / sizes.sum())
        log_theta = np.log((counts + alpha) / (counts.sum(axis=1, keepdims=True) + alpha * d))
        return cls(log_prior, log_theta, alpha)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        scores = X @ self.log_theta.T + self.log_prior
        return np.exp(_log_softmax(scores))

    def params_dict(self) -> dict:
        return {
            "log_prior": self.log_prior.tolist(),
            "log_theta": self.log_theta.tolist(),
            "alpha": self.alpha,
        }

    @classmethod
    def from_params(cls, data: dict) -> "MultinomialNB":
        return cls(np.asarray(data["log_prior"]), np.asarray(data["log_theta"]), data["alpha"])
