"""Cosine K-nearest-neighbor classification and its model-selection sweep.

Training is storage: the model keeps the L2-normalized training vectors (as
an inverted index) and their labels. Because the vectors are unit norm, the
cosine of two documents is exactly their dot product; similarities are
accumulated per query feature in ascending index order, which keeps results
bit-identical to a straightforward per-pair scorer. Corpus scale (around ten
thousand documents) makes exhaustive search entirely sufficient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .text import TokenizedDoc
from .vsm import DEFAULT_POOL_SIZE, FeatureSet, SparseVector, extract_features, select_features, vectorize

__all__ = [
    "DEFAULT_FEATURE_COUNTS",
    "DEFAULT_KS",
    "KnnModel",
    "SweepGrid",
    "knn_accuracy",
    "knn_fit",
    "knn_predict",
    "knn_sweep",
]

# Neighbor counts and feature-count ladder explored during model selection.
DEFAULT_KS = (1, 2, 3, 4, 5, 10, 15, 20, 25, 50)
DEFAULT_FEATURE_COUNTS = tuple(range(500, 30_001, 500))


@dataclass
class KnnModel:
    """A fitted KNN classifier for one task."""

    task: str
    feature_set: FeatureSet
    vectors: tuple[SparseVector, ...]
    labels: tuple[str, ...]
    k: int
    _postings: dict[int, tuple[np.ndarray, np.ndarray]] = field(init=False, repr=False)
    _priors: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.vectors) != len(self.labels) or not self.vectors:
            raise ValueError("model needs one label per training vector, at least one of each")
        if not 1 <= self.k <= len(self.vectors):
            raise ValueError(f"k must be in [1, {len(self.vectors)}], got {self.k}")
        by_feature: dict[int, tuple[list[int], list[float]]] = {}
        for doc_pos, vec in enumerate(self.vectors):
            for idx, val in zip(vec.indices, vec.values):
                ids, vals = by_feature.setdefault(idx, ([], []))
                ids.append(doc_pos)
                vals.append(val)
        self._postings = {
            idx: (np.asarray(ids, dtype=np.intp), np.asarray(vals, dtype=np.float64))
            for idx, (ids, vals) in by_feature.items()
        }
        priors: dict[str, int] = {}
        for lab in self.labels:
            priors[lab] = priors.get(lab, 0) + 1
        self._priors = priors

    def similarities(self, query: SparseVector) -> np.ndarray:
        """Cosine of the query against every training document."""
        if query.dim != (self.vectors[0].dim if self.vectors else 0):
            raise ValueError("query dimensionality does not match the training vectors")
        sims = np.zeros(len(self.vectors), dtype=np.float64)
        for idx, qv in zip(query.indices, query.values):
            posting = self._postings.get(idx)
            if posting is not None:
                ids, vals = posting
                sims[ids] += qv * vals
        np.clip(sims, 0.0, 1.0, out=sims)
        return sims

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "k": self.k,
            "labels": list(self.labels),
            "feature_set": {
                "task": self.feature_set.task,
                "unit": self.feature_set.unit,
                "features": list(self.feature_set.features),
                "scores": list(self.feature_set.scores),
                "frequencies": list(self.feature_set.frequencies),
            },
            "vectors": [[list(v.indices), list(v.values)] for v in self.vectors],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KnnModel":
        fsd = data["feature_set"]
        fs = FeatureSet(
            fsd["task"],
            tuple(fsd["features"]),
            tuple(fsd["scores"]),
            tuple(fsd["frequencies"]),
            fsd["unit"],
        )
        vectors = tuple(SparseVector(tuple(ind), tuple(val), len(fs)) for ind, val in data["vectors"])
        return cls(data["task"], fs, vectors, tuple(data["labels"]), data["k"])


def knn_fit(train: Corpus, task: str, fs: FeatureSet, k: int) -> KnnModel:
    """Vectorize and store the training corpus; no further learning."""
    if len(train) == 0:
        raise ValueError("cannot fit on an empty corpus")
    if fs.task != task:
        raise ValueError(f"feature set was selected for task {fs.task!r}, not {task!r}")
    if not 1 <= k <= len(train):
        raise ValueError(f"k must be in [1, {len(train)}], got {k}")
    vectors = tuple(vectorize(inst.text, fs) for inst in train)
    labels = tuple(train.labels_for(task))
    return KnnModel(task, fs, vectors, labels, k)


def _query_vector(model: KnnModel, doc: TokenizedDoc | str | SparseVector) -> SparseVector:
    if isinstance(doc, SparseVector):
        return doc
    if isinstance(doc, TokenizedDoc):
        return vectorize(doc, model.feature_set)
    return vectorize(extract_features(doc, model.feature_set.unit), model.feature_set)


def _vote(model: KnnModel, top: np.ndarray, sims: np.ndarray) -> str:
    tally: dict[str, list[float]] = {}
    for pos in top:
        lab = model.labels[pos]
        entry = tally.setdefault(lab, [0, 0.0])
        entry[0] += 1
        entry[1] += sims[pos]
    # Majority label; ties fall to larger summed similarity, then larger
    # training prior, then the lexicographically smaller label.
    return min(tally, key=lambda lab: (-tally[lab][0], -tally[lab][1], -model._priors[lab], lab))


def knn_predict(model: KnnModel, doc: TokenizedDoc | str | SparseVector) -> str:
    """Label a document by majority vote among its K nearest neighbors.

    Neighbors are ranked by cosine descending with equal similarities broken
    toward the lower training index; a zero query vector therefore votes with
    the first K training items.
    """
    query = _query_vector(model, doc)
    sims = model.similarities(query)
    order = np.argsort(-sims, kind="stable")
    return _vote(model, order[: model.k], sims)


def knn_accuracy(model: KnnModel, corpus: Corpus) -> float:
    """Fraction of a labeled corpus the model labels correctly."""
    gold = corpus.labels_for(model.task)
    hits = sum(knn_predict(model, inst.text) == g for inst, g in zip(corpus, gold))
    return hits / len(corpus)


@dataclass(frozen=True)
class SweepGrid:
    """Dev-set accuracy over the (feature count x K) model-selection grid."""

    task: str
    ks: tuple[int, ...]
    feature_counts: tuple[int, ...]
    accuracy: tuple[tuple[float, ...], ...]  # accuracy[n_idx][k_idx]
    best: tuple[int, int, float]  # (feature count, k, accuracy)

    def to_tsv(self, path: str | Path) -> Path:
        path = Path(path)
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write("features\tk\taccuracy\n")
            for n, row in zip(self.feature_counts, self.accuracy):
                for k, acc in zip(self.ks, row):
                    fh.write(f"{n}\t{k}\t{acc:.6f}\n")
        return path

    def as_dict(self) -> dict:
        return {
            "task": self.task,
            "ks": list(self.ks),
            "feature_counts": list(self.feature_counts),
            "accuracy": [list(row) for row in self.accuracy],
            "best": {"features": self.best[0], "k": self.best[1], "accuracy": self.best[2]},
        }

    def to_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.as_dict(), indent=2) + "\n", encoding="utf-8")
        return path


def knn_sweep(
    train: Corpus,
    dev: Corpus,
    task: str,
    ks: tuple[int, ...] = DEFAULT_KS,
    feature_counts: tuple[int, ...] = DEFAULT_FEATURE_COUNTS,
    unit: str = "token",
    pool_size: int = DEFAULT_POOL_SIZE,
) -> SweepGrid:
    """Measure dev accuracy for every (feature count, K) combination.

    K values larger than the training set are skipped. The best cell is the
    accuracy argmax, ties resolved toward smaller K and then fewer features.
    Selection prefixes let the ranking be computed once for the largest cell.
    """
    if not train.labeled or not dev.labeled:
        raise ValueError("sweep needs labeled train and dev corpora")
    usable_ks = tuple(k for k in ks if 1 <= k <= len(train))
    if not usable_ks:
        raise ValueError(f"no usable K values for a training set of {len(train)} documents")
    max_k = max(usable_ks)
    master = select_features(train, task, max(feature_counts), unit, pool_size)
    train_labels = tuple(train.labels_for(task))
    dev_gold = dev.labels_for(task)
    # Feature extraction does not depend on n; do it once per document.
    train_feats = [extract_features(inst.text, unit) for inst in train]
    dev_feats = [extract_features(inst.text, unit) for inst in dev]

    rows: list[tuple[float, ...]] = []
    for n in feature_counts:
        fs = master.prefix(n)
        model = KnnModel(task, fs, tuple(vectorize(f, fs) for f in train_feats), train_labels, 1)
        hits = [0] * len(usable_ks)
        for feats, gold in zip(dev_feats, dev_gold):
            sims = model.similarities(vectorize(feats, fs))
            order = np.argsort(-sims, kind="stable")[:max_k]
            for ki, k in enumerate(usable_ks):
                if _vote(model, order[:k], sims) == gold:
                    hits[ki] += 1
        rows.append(tuple(h / len(dev) for h in hits))

    best_n, best_k, best_acc = None, None, -1.0
    for n, row in zip(feature_counts, rows):
        for k, acc in zip(usable_ks, row):
            if acc > best_acc or (acc == best_acc and (k, n) < (best_k, best_n)):
                best_n, best_k, best_acc = n, k, acc
    return SweepGrid(task, usable_ks, tuple(feature_counts), tuple(rows), (best_n, best_k, best_acc))
