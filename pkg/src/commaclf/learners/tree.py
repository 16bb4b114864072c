"""CART decision trees: Gini classification and MSE regression.

Split search scores all candidate thresholds (midpoints between consecutive
distinct values) for all candidate features at once via prefix sums over
presorted columns. Each column is argsorted once per fit; child nodes
inherit sorted order by stable boolean filtering, so no further sorting
happens during growth. Ties resolve toward the first candidate in
feature-major scan order, making construction deterministic for a fixed
feature order and random state. Boosters can pass a shared presort because
the feature matrix does not change between rounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ClassificationTree", "RegressionTree", "presort"]

_EPS_GAIN = 1e-12

# Features are scored in blocks of this many columns so split search never
# materializes more than O(rows x block) scratch space on wide data.
_FEATURE_BLOCK = 256


def presort(X: np.ndarray) -> np.ndarray:
    """Column-wise stable argsort of a feature matrix, shareable across fits."""
    return np.argsort(X, axis=0, kind="stable")


@dataclass
class _Node:
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None
    value: np.ndarray | float | None = None
    leaf_id: int = -1

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def to_dict(self) -> dict:
        if self.is_leaf:
            value = self.value.tolist() if isinstance(self.value, np.ndarray) else self.value
            return {"value": value, "leaf_id": self.leaf_id}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "_Node":
        if "value" in data:
            value = data["value"]
            if isinstance(value, list):
                value = np.asarray(value)
            return cls(value=value, leaf_id=data.get("leaf_id", -1))
        return cls(
            feature=data["feature"],
            threshold=data["threshold"],
            left=cls.from_dict(data["left"]),
            right=cls.from_dict(data["right"]),
        )


def _partition(sorted_idx: np.ndarray, go_left: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a node's per-column sorted row ids by a boolean row mask."""
    m, f = sorted_idx.shape
    flat = sorted_idx.ravel(order="F")
    keep = go_left[flat]
    left_count = int(keep[:m].sum())
    left = flat[keep].reshape(f, left_count).T
    right = flat[~keep].reshape(f, m - left_count).T
    return np.ascontiguousarray(left), np.ascontiguousarray(right)


def _pick_best(score: np.ndarray, sv: np.ndarray, parent: float, features: np.ndarray):
    """Resolve a (positions x features) score matrix to (gain, feature, threshold).

    The column-major argmax scans feature by feature with positions
    ascending, so ties resolve toward the first candidate in scan order.
    """
    flat = int(np.argmax(score.ravel(order="F")))
    n_pos = score.shape[0]
    col, pos = divmod(flat, n_pos)
    best = score[pos, col]
    if not np.isfinite(best):
        return None
    gain = float(best) - parent
    if gain <= _EPS_GAIN:
        return None
    return gain, int(features[col]), float((sv[pos, col] + sv[pos + 1, col]) / 2.0)


def _better(candidate, incumbent):
    # Strictly-greater gain keeps the earliest feature block on ties.
    if candidate is None:
        return incumbent
    if incumbent is None or candidate[0] > incumbent[0]:
        return candidate
    return incumbent


def _best_split_classification(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    sorted_idx: np.ndarray,
    k: int,
    features: np.ndarray,
    min_leaf: int,
    class_w: np.ndarray,
):
    """(gain, feature, threshold) of the best Gini split, or None.

    The maximized score, sum_c left_c^2/left_w + sum_c right_c^2/right_w, is
    an affine transform of negative weighted Gini impurity.
    """
    m = sorted_idx.shape[0]
    total_w = class_w.sum()
    if total_w <= 0.0 or m < 2:
        return None
    parent = float((class_w * class_w).sum() / total_w)
    sizes = np.arange(1, m)[:, None]
    best = None
    for start in range(0, len(features), _FEATURE_BLOCK):
        block = features[start : start + _FEATURE_BLOCK]
        cols = sorted_idx[:, block]  # (m, f) row ids in per-feature order
        sv = X[cols, block[None, :]]
        w_sorted = w[cols]
        y_sorted = y[cols]
        onehot = np.zeros((m, len(block), k))
        onehot[np.arange(m)[:, None], np.arange(len(block))[None, :], y_sorted] = w_sorted
        cum_c = np.cumsum(onehot, axis=0)[:-1]  # (m-1, f, k)
        left_w = np.cumsum(w_sorted, axis=0)[:-1]  # (m-1, f)
        right_w = total_w - left_w
        right_c = class_w[None, None, :] - cum_c
        valid = (sv[:-1] < sv[1:]) & (sizes >= min_leaf) & (m - sizes >= min_leaf)
        valid &= (left_w > 0.0) & (right_w > 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            score = (cum_c * cum_c).sum(axis=2) / left_w + (right_c * right_c).sum(axis=2) / right_w
        score[~valid] = -np.inf
        best = _better(_pick_best(score, sv, parent, block), best)
    return best


def _best_split_regression(
    X: np.ndarray, r: np.ndarray, sorted_idx: np.ndarray, features: np.ndarray, min_leaf: int
):
    """Best MSE split, maximizing (sum_L)^2/n_L + (sum_R)^2/n_R."""
    m = sorted_idx.shape[0]
    if m < 2:
        return None
    total = float(r[sorted_idx[:, 0]].sum())
    parent = total * total / m
    sizes = np.arange(1, m)[:, None]
    best = None
    for start in range(0, len(features), _FEATURE_BLOCK):
        block = features[start : start + _FEATURE_BLOCK]
        cols = sorted_idx[:, block]
        sv = X[cols, block[None, :]]
        cum = np.cumsum(r[cols], axis=0)[:-1]  # (m-1, f)
        valid = (sv[:-1] < sv[1:]) & (sizes >= min_leaf) & (m - sizes >= min_leaf)
        score = cum * cum / sizes + (total - cum) ** 2 / (m - sizes)
        score[~valid] = -np.inf
        best = _better(_pick_best(score, sv, parent, block), best)
    return best


def _candidate_features(d: int, max_features: int | None, rng: np.random.Generator | None) -> np.ndarray:
    if max_features is None or max_features >= d or rng is None:
        return np.arange(d)
    return np.sort(rng.choice(d, size=max_features, replace=False))


class ClassificationTree:
    """Gini CART tree with optional sample weights and feature subsampling."""

    def __init__(self, max_depth: int = 16, max_features: int | None = None, min_leaf: int = 1):
        self.max_depth = max_depth
        self.max_features = max_features
        self.min_leaf = min_leaf
        self.root: _Node | None = None
        self.n_classes = 0

    def fit(
        self,
        X: np.ndarray,
        y_idx: np.ndarray,
        n_classes: int,
        sample_weight: np.ndarray | None = None,
        rng: np.random.Generator | None = None,
        presorted: np.ndarray | None = None,
    ) -> "ClassificationTree":
        w = np.ones(len(y_idx)) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
        self.n_classes = n_classes
        sorted_idx = presort(X) if presorted is None else presorted
        self._go_left = np.zeros(len(y_idx), dtype=bool)
        self.root = self._grow(X, y_idx, w, sorted_idx, 0, rng)
        del self._go_left
        return self

    def _leaf(self, class_w: np.ndarray) -> _Node:
        total = class_w.sum()
        if total > 0:
            dist = class_w / total
        else:
            dist = np.full(self.n_classes, 1.0 / self.n_classes)
        return _Node(value=dist)

    def _grow(self, X, y, w, sorted_idx, depth, rng) -> _Node:
        rows = sorted_idx[:, 0]
        class_w = np.zeros(self.n_classes)
        np.add.at(class_w, y[rows], w[rows])
        if (
            depth >= self.max_depth
            or len(rows) < 2 * self.min_leaf
            or np.count_nonzero(class_w) <= 1
        ):
            return self._leaf(class_w)
        features = _candidate_features(X.shape[1], self.max_features, rng)
        best = _best_split_classification(
            X, y, w, sorted_idx, self.n_classes, features, self.min_leaf, class_w
        )
        if best is None:
            return self._leaf(class_w)
        _, f, threshold = best
        left_rows = rows[X[rows, f] <= threshold]
        self._go_left[left_rows] = True
        left_idx, right_idx = _partition(sorted_idx, self._go_left)
        self._go_left[left_rows] = False
        node = _Node(feature=f, threshold=threshold)
        node.left = self._grow(X, y, w, left_idx, depth + 1, rng)
        node.right = self._grow(X, y, w, right_idx, depth + 1, rng)
        return node

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros((len(X), self.n_classes))
        self._route(self.root, X, np.arange(len(X)), out)
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)

    def _route(self, node: _Node, X, rows, out) -> None:
        if len(rows) == 0:
            return
        if node.is_leaf:
            out[rows] = node.value
            return
        mask = X[rows, node.feature] <= node.threshold
        self._route(node.left, X, rows[mask], out)
        self._route(node.right, X, rows[~mask], out)

    def to_dict(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "max_features": self.max_features,
            "min_leaf": self.min_leaf,
            "n_classes": self.n_classes,
            "root": self.root.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClassificationTree":
        tree = cls(data["max_depth"], data["max_features"], data["min_leaf"])
        tree.n_classes = data["n_classes"]
        tree.root = _Node.from_dict(data["root"])
        return tree


class RegressionTree:
    """MSE CART tree whose leaf values can be overwritten (for boosting)."""

    def __init__(self, max_depth: int = 3, min_leaf: int = 1):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.root: _Node | None = None
        self.n_leaves = 0

    def fit(self, X: np.ndarray, r: np.ndarray, presorted: np.ndarray | None = None) -> "RegressionTree":
        self.n_leaves = 0
        sorted_idx = presort(X) if presorted is None else presorted
        self._go_left = np.zeros(len(r), dtype=bool)
        self.root = self._grow(X, r, sorted_idx, 0)
        del self._go_left
        return self

    def _make_leaf(self, values: np.ndarray) -> _Node:
        node = _Node(value=float(values.mean()), leaf_id=self.n_leaves)
        self.n_leaves += 1
        return node

    def _grow(self, X, r, sorted_idx, depth) -> _Node:
        rows = sorted_idx[:, 0]
        values = r[rows]
        if depth >= self.max_depth or len(rows) < 2 * self.min_leaf or values.min() == values.max():
            return self._make_leaf(values)
        best = _best_split_regression(X, r, sorted_idx, np.arange(X.shape[1]), self.min_leaf)
        if best is None:
            return self._make_leaf(values)
        _, f, threshold = best
        left_rows = rows[X[rows, f] <= threshold]
        self._go_left[left_rows] = True
        left_idx, right_idx = _partition(sorted_idx, self._go_left)
        self._go_left[left_rows] = False
        node = _Node(feature=f, threshold=threshold)
        node.left = self._grow(X, r, left_idx, depth + 1)
        node.right = self._grow(X, r, right_idx, depth + 1)
        return node

    def apply(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros(len(X), dtype=np.intp)
        self._route_ids(self.root, X, np.arange(len(X)), out)
        return out

    def _route_ids(self, node: _Node, X, rows, out) -> None:
        if len(rows) == 0:
            return
        if node.is_leaf:
            out[rows] = node.leaf_id
            return
        mask = X[rows, node.feature] <= node.threshold
        self._route_ids(node.left, X, rows[mask], out)
        self._route_ids(node.right, X, rows[~mask], out)

    def leaf_values(self) -> np.ndarray:
        values = np.zeros(self.n_leaves)

        def collect(node: _Node) -> None:
            if node.is_leaf:
                values[node.leaf_id] = node.value
            else:
                collect(node.left)
                collect(node.right)

        collect(self.root)
        return values

    def set_leaf_values(self, values: np.ndarray) -> None:
        def assign(node: _Node) -> None:
            if node.is_leaf:
                node.value = float(values[node.leaf_id])
            else:
                assign(node.left)
                assign(node.right)

        assign(self.root)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.leaf_values()[self.apply(X)]

    def to_dict(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "n_leaves": self.n_leaves,
            "root": self.root.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RegressionTree":
        tree = cls(data["max_depth"], data["min_leaf"])
        tree.n_leaves = data["n_leaves"]
        tree.root = _Node.from_dict(data["root"])
        return tree
