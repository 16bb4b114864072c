"""Vector space model: vocabulary, chi-square feature selection, vectors.

Documents are bags of string features: tokenizer tokens by default, or
character n-grams (n = 2..5 of the raw text) when ``unit="char"``. Features
are ranked for each task by the chi-square statistic of their presence/absence
contingency table against the task's classes, document vectors are raw term
frequencies under L2 normalization, and similarity is cosine.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus, TASKS
from .text import TokenizedDoc, tokenize

__all__ = [
    "FEATURE_UNITS",
    "FeatureSet",
    "SparseVector",
    "Vocabulary",
    "build_vocabulary",
    "chi2_score",
    "cosine",
    "extract_features",
    "select_features",
    "vectorize",
]

FEATURE_UNITS = ("token", "char")

# Character n-gram orders used by the "char" feature unit.
_CHAR_NGRAM_RANGE = (2, 5)

# Frequency-ranked candidate pool from which chi2 selection draws; must
# exceed the largest selection size used by the sweep (30,000).
DEFAULT_POOL_SIZE = 60_000


def extract_features(text: str, unit: str = "token") -> list[str]:
    """Turn raw text into its feature strings for the given unit."""
    if unit == "token":
        return tokenize(text)
    if unit == "char":
        lo, hi = _CHAR_NGRAM_RANGE
        return [text[i : i + n] for n in range(lo, hi + 1) for i in range(len(text) - n + 1)]
    raise ValueError(f"unknown feature unit {unit!r}; expected one of {FEATURE_UNITS}")


@dataclass(frozen=True)
class Vocabulary:
    """Feature strings ranked by corpus frequency (ties lexicographic)."""

    features: tuple[str, ...]
    frequencies: tuple[int, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {f: i for i, f in enumerate(self.features)})

    def __len__(self) -> int:
        return len(self.features)


def build_vocabulary(corpus: Corpus, cap: int, unit: str = "token") -> Vocabulary:
    """Collect the ``cap`` most frequent feature strings of a corpus.

    Frequency is the total number of occurrences across all documents.
    """
    if cap < 1:
        raise ValueError(f"vocabulary cap must be >= 1, got {cap}")
    if len(corpus) == 0:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    counts: Counter[str] = Counter()
    for inst in corpus:
        counts.update(extract_features(inst.text, unit))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:cap]
    return Vocabulary(tuple(f for f, _ in ranked), tuple(n for _, n in ranked))


def _chi2_from_table(a: int, b: int, c: int, d: int) -> float:
    """Chi-square of a 2x2 presence/class table; 0 when a marginal is empty."""
    n = a + b + c + d
    denom = (a + b) * (c + d) * (a + c) * (b + d)
    if denom == 0:
        return 0.0
    return n * (a * d - b * c) ** 2 / denom


def _task_label_indices(corpus: Corpus, task: str) -> tuple[list[str], list[int]]:
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}; expected one of {TASKS}")
    if not corpus.labeled:
        raise ValueError(f"corpus {corpus.name!r} is unlabeled; chi2 needs task labels")
    labels = corpus.labels_for(task)
    classes = sorted(set(labels))
    class_pos = {c: i for i, c in enumerate(classes)}
    return classes, [class_pos[lab] for lab in labels]


def _max_chi2(present_per_class: Sequence[int], class_sizes: Sequence[int], n_docs: int) -> float:
    present_total = sum(present_per_class)
    best = 0.0
    for a, size in zip(present_per_class, class_sizes):
        b = present_total - a
        c = size - a
        d = n_docs - size - b
        best = max(best, _chi2_from_table(a, b, c, d))
    return best


def chi2_score(feature: str, corpus: Corpus, task: str, unit: str = "token") -> float:
    """Score one feature's association with a task's classes.

    One-vs-rest chi-square on document presence, maximized over classes.
    Depends only on the class partition, never on class names.
    """
    classes, label_idx = _task_label_indices(corpus, task)
    present = [0] * len(classes)
    sizes = [0] * len(classes)
    for inst, cls in zip(corpus, label_idx):
        sizes[cls] += 1
        if feature in set(extract_features(inst.text, unit)):
            present[cls] += 1
    return _max_chi2(present, sizes, len(corpus))


@dataclass(frozen=True)
class FeatureSet:
    """Task-specific selected features with their chi2 scores."""

    task: str
    features: tuple[str, ...]
    scores: tuple[float, ...]
    frequencies: tuple[int, ...]
    unit: str = "token"
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {f: i for i, f in enumerate(self.features)})

    def __len__(self) -> int:
        return len(self.features)

    def prefix(self, n: int) -> "FeatureSet":
        """The feature set truncated to its n highest-ranked features."""
        return FeatureSet(self.task, self.features[:n], self.scores[:n], self.frequencies[:n], self.unit)

    def save_tsv(self, path: str | Path) -> Path:
        path = Path(path)
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# task={self.task}\tunit={self.unit}\n")
            fh.write("rank\tfeature\tchi2\tfrequency\n")
            for rank, (feat, score, freq) in enumerate(zip(self.features, self.scores, self.frequencies), 1):
                fh.write(f"{rank}\t{_escape(feat)}\t{score!r}\t{freq}\n")
        return path

    @classmethod
    def load_tsv(cls, path: str | Path) -> "FeatureSet":
        path = Path(path)
        lines = path.read_text(encoding="utf-8").splitlines()
        meta = dict(part.split("=", 1) for part in lines[0].lstrip("# ").split("\t"))
        feats: list[str] = []
        scores: list[float] = []
        freqs: list[int] = []
        for line in lines[2:]:
            if not line:
                continue
            _, feat, score, freq = line.split("\t")
            feats.append(_unescape(feat))
            scores.append(float(score))
            freqs.append(int(freq))
        return cls(meta["task"], tuple(feats), tuple(scores), tuple(freqs), meta["unit"])


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")


def _unescape(s: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "\\" and i + 1 < len(s):
            nxt = s[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt, "\\" + nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def select_features(
    corpus: Corpus,
    task: str,
    n: int,
    unit: str = "token",
    pool_size: int = DEFAULT_POOL_SIZE,
) -> FeatureSet:
    """Pick the n most class-associated frequent features for a task.

    Candidates are the ``pool_size`` most frequent strings; they are ranked
    by chi2 descending, ties broken by higher frequency then lexicographic
    order, so a smaller selection is always a prefix of a larger one.
    """
    if n < 1:
        raise ValueError(f"feature count must be >= 1, got {n}")
    classes, label_idx = _task_label_indices(corpus, task)
    vocab = build_vocabulary(corpus, pool_size, unit)

    k = len(classes)
    sizes = [0] * k
    present = [[0] * k for _ in range(len(vocab))]
    for inst, cls in zip(corpus, label_idx):
        sizes[cls] += 1
        for feat in set(extract_features(inst.text, unit)):
            pos = vocab.index.get(feat)
            if pos is not None:
                present[pos][cls] += 1

    n_docs = len(corpus)
    scored = [
        (feat, _max_chi2(present[pos], sizes, n_docs), vocab.frequencies[pos])
        for pos, feat in enumerate(vocab.features)
    ]
    scored.sort(key=lambda row: (-row[1], -row[2], row[0]))
    top = scored[:n]
    return FeatureSet(
        task,
        tuple(f for f, _, _ in top),
        tuple(s for _, s, _ in top),
        tuple(q for _, _, q in top),
        unit,
    )


@dataclass(frozen=True)
class SparseVector:
    """L2-normalized document vector as sorted (index, value) pairs."""

    indices: tuple[int, ...]
    values: tuple[float, ...]
    dim: int

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values must have equal length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("indices must be strictly increasing")
        if self.indices and (self.indices[0] < 0 or self.indices[-1] >= self.dim):
            raise ValueError("index out of range for dimensionality")

    @property
    def is_zero(self) -> bool:
        return not self.indices

    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.values))


def vectorize(doc: TokenizedDoc | str | Iterable[str], fs: FeatureSet) -> SparseVector:
    """Map a document onto the feature set: raw TF, then L2 normalization.

    Accepts a :class:`TokenizedDoc` (token unit only), raw text (features are
    extracted with the set's unit), or an already-extracted feature sequence.
    A document firing no selected feature becomes the zero vector.
    """
    if isinstance(doc, TokenizedDoc):
        if fs.unit != "token":
            raise ValueError("TokenizedDoc input requires a token-unit feature set; pass raw text instead")
        feats: Iterable[str] = doc.tokens
    elif isinstance(doc, str):
        feats = extract_features(doc, fs.unit)
    else:
        feats = doc

    counts: Counter[int] = Counter()
    for feat in feats:
        pos = fs.index.get(feat)
        if pos is not None:
            counts[pos] += 1
    if not counts:
        return SparseVector((), (), len(fs))
    indices = tuple(sorted(counts))
    raw = [float(counts[i]) for i in indices]
    norm = math.sqrt(sum(v * v for v in raw))
    return SparseVector(indices, tuple(v / norm for v in raw), len(fs))


def cosine(a: SparseVector, b: SparseVector) -> float:
    """Cosine similarity of two vectors over the same feature space."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.is_zero or b.is_zero:
        return 0.0
    dot = 0.0
    i = j = 0
    while i < len(a.indices) and j < len(b.indices):
        ai, bj = a.indices[i], b.indices[j]
        if ai == bj:
            dot += a.values[i] * b.values[j]
            i += 1
            j += 1
        elif ai < bj:
            i += 1
        else:
            j += 1
    na = a.norm()
    nb = b.norm()
    sim = dot / (na * nb)
    # Stored vectors are unit norm; clamp float residue into the contract range.
    return min(1.0, max(0.0, sim))
