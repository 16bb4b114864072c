"""Stacking of the six base learners behind a logistic-regression estimator.

Meta-features are strictly out-of-fold: the meta-row for an instance comes
only from base models whose training folds exclude it. Each base learner
contributes its class probabilities plus the index of its predicted class.
After the final estimator is fitted on those rows, the base learners are
retrained on the full training set for inference.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .learners import BASE_LEARNER_ORDER, LearnerModel, LearnerSpec, derived_seed, train_learner

__all__ = [
    "StackModel",
    "default_base_specs",
    "fit_stacked",
    "make_oof_meta_features",
    "predict_stacked",
    "stratified_folds",
]


def default_base_specs(experiment_seed: int) -> list[LearnerSpec]:
    """The six base learners at their default settings, seeded per ordinal."""
    return [LearnerSpec(kind, {}, derived_seed(experiment_seed, kind)) for kind in BASE_LEARNER_ORDER]


def stratified_folds(y, folds: int, seed: int) -> tuple[np.ndarray, int]:
    """Assign each row a fold id, stratified by label.

    If the rarest class has fewer members than requested folds, the fold
    count is reduced (never below 2) with a warning, so every fold sees as
    many classes as possible.
    """
    y = np.asarray(y)
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    if len(y) < folds:
        raise ValueError(f"cannot make {folds} folds from {len(y)} rows")
    _, counts = np.unique(y, return_counts=True)
    effective = min(folds, int(counts.min()))
    if effective < 2:
        effective = 2
    if effective != folds:
        warnings.warn(
            f"reducing folds from {folds} to {effective}: rarest class has {int(counts.min())} members",
            stacklevel=2,
        )
    rng = np.random.default_rng(seed)
    assignment = np.zeros(len(y), dtype=np.intp)
    offset = 0  # keeps folds non-empty even when every class is tiny
    for cls in np.unique(y):
        rows = np.nonzero(y == cls)[0]
        rows = rows[rng.permutation(len(rows))]
        for pos, row in enumerate(rows):
            assignment[row] = (offset + pos) % effective
        offset += len(rows)
    return assignment, effective


def _meta_block(model: LearnerModel, X: np.ndarray, classes: np.ndarray) -> np.ndarray:
    """Probabilities in global class order plus the argmax index column."""
    proba = model.predict_proba(X)
    aligned = np.zeros((len(X), len(classes)))
    for pos, cls in enumerate(model.classes):
        aligned[:, int(np.searchsorted(classes, cls))] = proba[:, pos]
    pred_idx = np.argmax(aligned, axis=1).astype(np.float64)
    return np.hstack([aligned, pred_idx[:, None]])


def make_oof_meta_features(
    base_specs: list[LearnerSpec],
    X: np.ndarray,
    y,
    folds: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Out-of-fold meta-feature matrix of shape (n, sum(|classes| + 1)).

    Returns the matrix together with the global class order its probability
    columns follow. Identical seeds give identical fold assignments and
    therefore identical matrices.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    classes = np.unique(y)
    assignment, effective = stratified_folds(y, folds, seed)
    width = len(base_specs) * (len(classes) + 1)
    meta = np.zeros((len(y), width))
    for fold in range(effective):
        holdout = assignment == fold
        X_tr, y_tr = X[~holdout], y[~holdout]
        col = 0
        for spec in base_specs:
            model = train_learner(spec, X_tr, y_tr)
            block = _meta_block(model, X[holdout], classes)
            meta[holdout, col : col + block.shape[1]] = block
            col += block.shape[1]
    return meta, classes


@dataclass
class StackModel:
    """Per-task stacked ensemble: retrained bases plus the final estimator."""

    task: str
    base_specs: list[LearnerSpec]
    base_models: list[LearnerModel]
    final_model: LearnerModel
    classes: tuple
    folds: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "folds": self.folds,
            "seed": self.seed,
            "classes": list(self.classes),
            "base_models": [m.to_dict() for m in self.base_models],
            "final_model": self.final_model.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StackModel":
        base_models = [LearnerModel.from_dict(m) for m in data["base_models"]]
        final_model = LearnerModel.from_dict(data["final_model"])
        return cls(
            data["task"],
            [m.spec for m in base_models],
            base_models,
            final_model,
            tuple(data["classes"]),
            data["folds"],
            data["seed"],
        )


def fit_stacked(
    base_specs: list[LearnerSpec],
    X: np.ndarray,
    y,
    folds: int,
    seed: int,
    task: str = "",
) -> StackModel:
    """Fit the full stack: OOF meta-features, final estimator, base retrain."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    meta, classes = make_oof_meta_features(base_specs, X, y, folds, seed)
    final_spec = LearnerSpec("logistic_regression", {}, derived_seed(seed, "logistic_regression"))
    final_model = train_learner(final_spec, meta, y)
    base_models = [train_learner(spec, X, y) for spec in base_specs]
    return StackModel(task, list(base_specs), base_models, final_model, tuple(classes.tolist()), folds, seed)


def _inference_meta(model: StackModel, X: np.ndarray) -> np.ndarray:
    classes = np.asarray(model.classes)
    blocks = [_meta_block(base, X, classes) for base in model.base_models]
    return np.hstack(blocks)


def predict_stacked(model: StackModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Labels and class probabilities from the final estimator."""
    X = np.asarray(X, dtype=np.float64)
    meta = _inference_meta(model, X)
    proba = model.final_model.predict_proba(meta)
    labels = np.asarray(model.final_model.classes, dtype=object)[np.argmax(proba, axis=1)]
    return labels, proba
