"""Random forest of Gini CART trees with bootstrap sampling."""

from __future__ import annotations

import math

import numpy as np

from .tree import ClassificationTree

__all__ = ["RandomForest"]


class RandomForest:
    """Bagged CART trees, sqrt(d) feature candidates per split.

    Each tree draws its own generator from a spawned seed sequence, so the
    ensemble is reproducible regardless of how trees would be scheduled.
    """

    DEFAULTS = {"n_trees": 100, "max_depth": 16, "max_features": "sqrt", "bootstrap": True}

    def __init__(self, trees: list[ClassificationTree], n_classes: int, opts: dict):
        self.trees = trees
        self.n_classes = n_classes
        self.opts = opts

    @staticmethod
    def _resolve_max_features(spec, d: int) -> int | None:
        if spec is None:
            return None
        if spec == "sqrt":
            return max(1, int(round(math.sqrt(d))))
        return int(spec)

    @classmethod
    def fit(cls, X: np.ndarray, y_idx: np.ndarray, n_classes: int, params: dict, seed) -> "RandomForest":
        opts = {**cls.DEFAULTS, **params}
        n, d = X.shape
        max_features = cls._resolve_max_features(opts["max_features"], d)
        trees: list[ClassificationTree] = []
        for child_seq in np.random.SeedSequence(seed).spawn(int(opts["n_trees"])):
            rng = np.random.default_rng(child_seq)
            if opts["bootstrap"]:
                sample = rng.integers(0, n, size=n)
                Xs, ys = X[sample], y_idx[sample]
            else:
                Xs, ys = X, y_idx
            tree = ClassificationTree(max_depth=int(opts["max_depth"]), max_features=max_features)
            tree.fit(Xs, ys, n_classes, rng=rng)
            trees.append(tree)
        return cls(trees, n_classes, opts)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        proba = np.zeros((len(X), self.n_classes))
        for tree in self.trees:
            proba += tree.predict_proba(X)
        proba /= proba.sum(axis=1, keepdims=True)
        return proba

    def params_dict(self) -> dict:
        return {
            "n_classes": self.n_classes,
            "opts": {k: self.opts[k] for k in self.DEFAULTS},
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_params(cls, data: dict) -> "RandomForest":
        trees = [ClassificationTree.from_dict(t) for t in data["trees"]]
        return cls(trees, data["n_classes"], data["opts"])
