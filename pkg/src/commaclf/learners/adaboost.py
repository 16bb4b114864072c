"""SAMME boosting of depth-1 decision stumps."""

from __future__ import annotations

import math

import numpy as np

from .tree import ClassificationTree, presort

__all__ = ["AdaBoostSamme"]


class AdaBoostSamme:
    """Multiclass AdaBoost: reweighted stumps, alpha = ln((1-e)/e) + ln(K-1).

    Boosting stops early when a stump is perfect (it then dominates the
    vote) or cannot beat random guessing. Probabilities are the normalized
    alpha-weighted votes; with no usable stump they fall back to the
    training prior.
    """

    DEFAULTS = {"n_rounds": 50}

    def __init__(self, stumps: list[ClassificationTree], alphas: list[float], prior: np.ndarray, opts: dict):
        self.stumps = stumps
        self.alphas = alphas
        self.prior = prior
        self.opts = opts

    @property
    def n_classes(self) -> int:
        return len(self.prior)

    @classmethod
    def fit(cls, X: np.ndarray, y_idx: np.ndarray, n_classes: int, params: dict, seed) -> "AdaBoostSamme":
        opts = {**cls.DEFAULTS, **params}
        n = len(y_idx)
        w = np.full(n, 1.0 / n)
        prior = np.bincount(y_idx, minlength=n_classes) / n
        stumps: list[ClassificationTree] = []
        alphas: list[float] = []
        sorted_idx = presort(X)  # X never changes between rounds
        for _ in range(int(opts["n_rounds"])):
            stump = ClassificationTree(max_depth=1).fit(X, y_idx, n_classes, sample_weight=w, presorted=sorted_idx)
            pred = stump.predict(X)
            wrong = pred != y_idx
            err = float(w[wrong].sum())
            if err <= 0.0:
                # A perfect stump: give it a large finite vote and stop.
                stumps.append(stump)
                alphas.append(math.log(1e12) + math.log(n_classes - 1))
                break
            if err >= 1.0 - 1.0 / n_classes:
                break
            alpha = math.log((1.0 - err) / err) + math.log(n_classes - 1)
            stumps.append(stump)
            alphas.append(alpha)
            w *= np.exp(alpha * wrong)
            w /= w.sum()
        return cls(stumps, alphas, prior, opts)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if not self.stumps:
            return np.tile(self.prior, (len(X), 1))
        votes = np.zeros((len(X), self.n_classes))
        for stump, alpha in zip(self.stumps, self.alphas):
            pred = stump.predict(X)
            votes[np.arange(len(X)), pred] += alpha
        return votes / votes.sum(axis=1, keepdims=True)

    def params_dict(self) -> dict:
        return {
            "prior": self.prior.tolist(),
            "alphas": self.alphas,
            "opts": {k: self.opts[k] for k in self.DEFAULTS},
            "stumps": [s.to_dict() for s in self.stumps],
        }

    @classmethod
    def from_params(cls, data: dict) -> "AdaBoostSamme":
        stumps = [ClassificationTree.from_dict(s) for s in data["stumps"]]
        return cls(stumps, list(data["alphas"]), np.asarray(data["prior"]), data["opts"])
