"""Uniform train/predict-probability contract for all learner kinds.

Every learner is implemented in-repo on numpy; there is no external ML
dependency. A :class:`LearnerSpec` names a kind, its hyperparameters and a
seed; :func:`train_learner` produces an immutable :class:`LearnerModel`
whose ``predict_proba`` rows are non-negative and sum to one. Models
serialize to a versioned JSON container and loading rejects other versions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

__all__ = [
    "BASE_LEARNER_ORDER",
    "FORMAT_VERSION",
    "LEARNER_KINDS",
    "STOCHASTIC_KINDS",
    "LearnerModel",
    "LearnerSpec",
    "derived_seed",
    "predict_proba",
    "train_learner",
]

LEARNER_KINDS = (
    "naive_bayes",
    "linear_svm",
    "random_forest",
    "gbm",
    "adaboost",
    "mlp",
    "logistic_regression",
)

# The six base learners of the stacking ensemble, in their canonical order;
# the final estimator (logistic_regression) takes the next ordinal.
BASE_LEARNER_ORDER = ("naive_bayes", "linear_svm", "random_forest", "gbm", "adaboost", "mlp")

# Kinds whose training involves random sampling or initialization.
STOCHASTIC_KINDS = frozenset({"linear_svm", "random_forest", "mlp"})

FORMAT_VERSION = 1


def derived_seed(experiment_seed: int, kind: str) -> int:
    """Per-learner seed: experiment seed scaled by 1000 plus the learner ordinal."""
    if kind in BASE_LEARNER_ORDER:
        ordinal = BASE_LEARNER_ORDER.index(kind)
    elif kind == "logistic_regression":
        ordinal = len(BASE_LEARNER_ORDER)
    else:
        raise ValueError(f"unknown learner kind {kind!r}")
    return experiment_seed * 1000 + ordinal


@dataclass(frozen=True)
class LearnerSpec:
    """Recipe for one learner: kind, hyperparameter overrides, seed."""

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in LEARNER_KINDS:
            raise ValueError(f"unknown learner kind {self.kind!r}; expected one of {LEARNER_KINDS}")
        if self.kind in STOCHASTIC_KINDS and self.seed is None:
            raise ValueError(f"{self.kind} is stochastic and requires a seed")


def content_order(X: np.ndarray, y_idx: np.ndarray) -> np.ndarray:
    """A row order determined only by row content.

    Sorting inputs by this order before deterministic full-batch fits makes
    the result exactly invariant to any permutation of the training rows.
    """
    keys = [X[i].tobytes() + int(y_idx[i]).to_bytes(4, "little") for i in range(len(y_idx))]
    return np.asarray(sorted(range(len(keys)), key=keys.__getitem__), dtype=np.intp)


class ConstantModel:
    """Degenerate single-class corpora train to a constant predictor."""

    def __init__(self, class_pos: int, n_classes: int):
        self.class_pos = class_pos
        self.n_classes = n_classes

    @classmethod
    def fit(cls, X, y_idx, n_classes, params, seed):
        return cls(int(y_idx[0]), n_classes)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros((len(X), self.n_classes))
        out[:, self.class_pos] = 1.0
        return out

    def params_dict(self) -> dict:
        return {"class_pos": self.class_pos, "n_classes": self.n_classes}

    @classmethod
    def from_params(cls, data: dict) -> "ConstantModel":
        return cls(data["class_pos"], data["n_classes"])


class LearnerModel:
    """A trained classifier with its class list and input width."""

    def __init__(self, kind: str, classes: tuple, n_features: int, impl, spec: LearnerSpec):
        self.kind = kind
        self.classes = classes
        self.n_features = n_features
        self.impl = impl
        self.spec = spec

    def _check(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected rows of width {self.n_features}, got shape {X.shape}")
        return X

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return self.impl.predict_proba(self._check(X))

    def predict(self, X: np.ndarray) -> np.ndarray:
        proba = self.predict_proba(X)
        return np.asarray(self.classes, dtype=object)[np.argmax(proba, axis=1)]

    def to_dict(self) -> dict:
        constant = isinstance(self.impl, ConstantModel)
        return {
            "format": "commaclf-learner",
            "version": FORMAT_VERSION,
            "kind": self.kind,
            "constant": constant,
            "classes": list(self.classes),
            "n_features": self.n_features,
            "hyperparams": dict(self.spec.params),
            "seed": self.spec.seed,
            "params": self.impl.params_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LearnerModel":
        if data.get("format") != "commaclf-learner" or data.get("version") != FORMAT_VERSION:
            raise ValueError(
                f"unsupported model container: format={data.get('format')!r} version={data.get('version')!r}"
            )
        spec = LearnerSpec(data["kind"], data["hyperparams"], data["seed"])
        impl_cls = ConstantModel if data["constant"] else _impl_class(data["kind"])
        impl = impl_cls.from_params(data["params"])
        return cls(data["kind"], tuple(data["classes"]), data["n_features"], impl, spec)

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict()) + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: str | Path) -> "LearnerModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _registry() -> dict:
    from .adaboost import AdaBoostSamme
    from .gbm import GradientBoosting
    from .linear import PegasosSVM, SoftmaxRegression
    from .mlp import MLP
    from .naive_bayes import MultinomialNB
    from .forest import RandomForest

    return {
        "naive_bayes": MultinomialNB,
        "linear_svm": PegasosSVM,
        "random_forest": RandomForest,
        "gbm": GradientBoosting,
        "adaboost": AdaBoostSamme,
        "mlp": MLP,
        "logistic_regression": SoftmaxRegression,
    }


_REGISTRY: dict = {}


def _impl_class(kind: str):
    if not _REGISTRY:
        _REGISTRY.update(_registry())
    return _REGISTRY[kind]


def train_learner(spec: LearnerSpec, X: np.ndarray, y) -> LearnerModel:
    """Train one learner under the uniform contract.

    Deterministic given (spec, X, y, seed). A single-class target yields a
    constant model of that class regardless of kind.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-dimensional, got shape {X.shape}")
    if len(X) != len(y) or len(y) == 0:
        raise ValueError(f"X and y must be equally long and non-empty, got {len(X)} and {len(y)}")
    if not np.isfinite(X).all():
        raise ValueError("X contains NaN or infinite values")
    classes, y_idx = np.unique(y, return_inverse=True)
    _impl_class(spec.kind)  # populate registry, validate kind early
    if len(classes) == 1:
        impl = ConstantModel.fit(X, y_idx, 1, spec.params, spec.seed)
    else:
        impl = _REGISTRY[spec.kind].fit(X, y_idx, len(classes), dict(spec.params), spec.seed)
    return LearnerModel(spec.kind, tuple(classes.tolist()), X.shape[1], impl, spec)


def predict_proba(model: LearnerModel, X: np.ndarray) -> np.ndarray:
    """Per-row probability distribution over the model's classes."""
    return model.predict_proba(X)
