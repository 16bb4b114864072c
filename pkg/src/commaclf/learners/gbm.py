"""Gradient boosting over multiclass log-loss with small regression trees."""

from __future__ import annotations

import numpy as np

from .linear import softmax
from .tree import RegressionTree, presort

__all__ = ["GradientBoosting"]


class GradientBoosting:
    """Boosted depth-limited regression trees on softmax residuals.

    Per round and class, a tree fits the residual y_c - p_c and its leaves
    take the usual one-step Newton value scaled by the learning rate. The
    training log-loss after every round is recorded in ``staged_train_loss``.
    """

    DEFAULTS = {"n_rounds": 100, "max_depth": 3, "learning_rate": 0.1}

    def __init__(self, trees: list[list[RegressionTree]], n_classes: int, opts: dict):
        self.trees = trees  # trees[round][class]
        self.n_classes = n_classes
        self.opts = opts
        self.staged_train_loss: list[float] = []

    @classmethod
    def fit(cls, X: np.ndarray, y_idx: np.ndarray, n_classes: int, params: dict, seed) -> "GradientBoosting":
        opts = {**cls.DEFAULTS, **params}
        rounds, depth, lr = int(opts["n_rounds"]), int(opts["max_depth"]), float(opts["learning_rate"])
        n = len(y_idx)
        Y = np.zeros((n, n_classes))
        Y[np.arange(n), y_idx] = 1.0
        F = np.zeros((n, n_classes))
        model = cls([], n_classes, opts)
        sorted_idx = presort(X)  # X never changes between rounds
        for _ in range(rounds):
            P = softmax(F)
            round_trees: list[RegressionTree] = []
            for c in range(n_classes):
                residual = Y[:, c] - P[:, c]
                tree = RegressionTree(max_depth=depth).fit(X, residual, presorted=sorted_idx)
                leaf_ids = tree.apply(X)
                numer = np.zeros(tree.n_leaves)
                denom = np.zeros(tree.n_leaves)
                np.add.at(numer, leaf_ids, residual)
                np.add.at(denom, leaf_ids, np.abs(residual) * (1.0 - np.abs(residual)))
                values = np.where(
                    denom > 1e-12,
                    (n_classes - 1) / n_classes * numer / np.maximum(denom, 1e-12),
                    0.0,
                )
                tree.set_leaf_values(lr * values)
                F[:, c] += tree.leaf_values()[leaf_ids]
                round_trees.append(tree)
            model.trees.append(round_trees)
            P = softmax(F)
            model.staged_train_loss.append(float(-np.log(P[np.arange(n), y_idx] + 1e-300).mean()))
        return model

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        F = np.zeros((len(X), self.n_classes))
        for round_trees in self.trees:
            for c, tree in enumerate(round_trees):
                F[:, c] += tree.predict(X)
        return F

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.decision_function(X))

    def params_dict(self) -> dict:
        return {
            "n_classes": self.n_classes,
            "opts": {k: self.opts[k] for k in self.DEFAULTS},
            "trees": [[t.to_dict() for t in round_trees] for round_trees in self.trees],
        }

    @classmethod
    def from_params(cls, data: dict) -> "GradientBoosting":
        trees = [[RegressionTree.from_dict(t) for t in round_trees] for round_trees in data["trees"]]
        return cls(trees, data["n_classes"], data["opts"])
