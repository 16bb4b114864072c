"""Dense feature rows for the base learners.

Each row is the document's L2-normalized term-frequency vector over a
chi2-selected feature set, concatenated with the five surface counts, each
standardized by the training split's mean and standard deviation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..corpus import Corpus, Instance
from ..text import surface_features
from ..vsm import DEFAULT_POOL_SIZE, FeatureSet, select_features, vectorize

__all__ = ["DenseFeaturizer", "N_SURFACE_FEATURES"]

N_SURFACE_FEATURES = 5


def _surface_row(text: str) -> np.ndarray:
    return np.asarray(surface_features(text).as_tuple(), dtype=np.float64)


@dataclass
class DenseFeaturizer:
    """Fitted mapping from instances to fixed-width dense rows."""

    feature_set: FeatureSet
    surface_mean: np.ndarray
    surface_std: np.ndarray

    @property
    def width(self) -> int:
        return len(self.feature_set) + N_SURFACE_FEATURES

    @classmethod
    def fit(
        cls,
        train: Corpus,
        task: str,
        n_features: int = 2000,
        unit: str = "token",
        pool_size: int = DEFAULT_POOL_SIZE,
    ) -> "DenseFeaturizer":
        fs = select_features(train, task, n_features, unit, pool_size)
        surface = np.stack([_surface_row(inst.text) for inst in train])
        mean = surface.mean(axis=0)
        std = surface.std(axis=0)
        std[std < 1e-12] = 1.0  # constant columns pass through at zero
        return cls(fs, mean, std)

    def transform(self, instances: Corpus | Iterable[Instance]) -> np.ndarray:
        rows = []
        for inst in instances:
            vec = vectorize(inst.text, self.feature_set)
            dense = np.zeros(len(self.feature_set))
            if not vec.is_zero:
                dense[list(vec.indices)] = vec.values
            surface = (_surface_row(inst.text) - self.surface_mean) / self.surface_std
            rows.append(np.concatenate([dense, surface]))
        return np.stack(rows) if rows else np.zeros((0, self.width))

    def to_dict(self) -> dict:
        fs = self.feature_set
        return {
            "feature_set": {
                "task": fs.task,
                "unit": fs.unit,
                "features": list(fs.features),
                "scores": list(fs.scores),
                "frequencies": list(fs.frequencies),
            },
            "surface_mean": self.surface_mean.tolist(),
            "surface_std": self.surface_std.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DenseFeaturizer":
        fsd = data["feature_set"]
        fs = FeatureSet(
            fsd["task"],
            tuple(fsd["features"]),
            tuple(fsd["scores"]),
            tuple(fsd["frequencies"]),
            fsd["unit"],
        )
        return cls(fs, np.asarray(data["surface_mean"]), np.asarray(data["surface_std"]))
