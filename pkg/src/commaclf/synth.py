"""Synthetic labeled corpora for dataset-free testing.

The generator draws, per task, a true class and then tokens from a
class-conditional multinomial over that task's block of the vocabulary.
Label noise resamples the observed label uniformly over the task's classes
with the given probability, so at noise rate r the best achievable accuracy
on a task with |C| classes is 1 - r*(1 - 1/|C|).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, Instance, LabelTriple, TASK_CLASSES, TASKS

__all__ = ["SyntheticSpec", "generate_synthetic", "separated_spec"]


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for one synthetic corpus."""

    instances: int
    vocab_size: int
    class_token_dists: dict[str, dict[str, tuple[float, ...]]]  # task -> class -> p over vocab
    noise: float
    seed: int
    tokens_per_task: tuple[int, int] = (4, 12)

    def __post_init__(self) -> None:
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        if not 0.0 <= self.noise < 1.0:
            raise ValueError(f"noise rate must be in [0, 1), got {self.noise}")
        for task in TASKS:
            dists = self.class_token_dists.get(task)
            if dists is None or set(dists) != set(TASK_CLASSES[task]):
                raise ValueError(f"class_token_dists must cover every class of task {task!r}")
            for cls, dist in dists.items():
                if len(dist) != self.vocab_size:
                    raise ValueError(f"distribution for {task}/{cls} must have length {self.vocab_size}")
                if abs(sum(dist) - 1.0) > 1e-9 or min(dist) < 0.0:
                    raise ValueError(f"distribution for {task}/{cls} must be normalized and non-negative")


def vocabulary_tokens(vocab_size: int) -> list[str]:
    return [f"tok{i:04d}" for i in range(vocab_size)]


def separated_spec(
    instances: int,
    vocab_size: int = 60,
    noise: float = 0.0,
    seed: int = 0,
    concentration: float = 0.95,
) -> SyntheticSpec:
    """A spec whose class distributions are nearly disjoint per task.

    The vocabulary splits into one block per task; inside a block each class
    owns an equal share that carries ``concentration`` of its probability
    mass, with the remainder spread over the whole block.
    """
    if vocab_size < 7 * 3:
        raise ValueError("vocab_size must allow at least 7 tokens per task block")
    block = vocab_size // 3
    dists: dict[str, dict[str, tuple[float, ...]]] = {}
    for t_pos, task in enumerate(TASKS):
        start = t_pos * block
        classes = TASK_CLASSES[task]
        share = block // len(classes)
        dists[task] = {}
        for c_pos, cls in enumerate(classes):
            p = np.zeros(vocab_size)
            own = slice(start + c_pos * share, start + (c_pos + 1) * share)
            p[own] = concentration / share
            p[start : start + block] += (1.0 - concentration) / block
            p /= p.sum()
            dists[task][cls] = tuple(p.tolist())
    return SyntheticSpec(instances, vocab_size, dists, noise, seed)


def generate_synthetic(spec: SyntheticSpec, name: str = "synthetic") -> Corpus:
    """Draw a labeled corpus from the spec; identical seeds, identical corpus."""
    rng = np.random.default_rng(spec.seed)
    tokens = vocabulary_tokens(spec.vocab_size)
    lo, hi = spec.tokens_per_task
    instances: list[Instance] = []
    for i in range(spec.instances):
        words: list[str] = []
        observed: dict[str, str] = {}
        for task in TASKS:
            classes = TASK_CLASSES[task]
            true_cls = classes[int(rng.integers(len(classes)))]
            dist = np.asarray(spec.class_token_dists[task][true_cls])
            length = int(rng.integers(lo, hi + 1))
            draws = rng.choice(spec.vocab_size, size=length, p=dist)
            words.extend(tokens[j] for j in draws)
            if spec.noise > 0.0 and rng.random() < spec.noise:
                observed[task] = classes[int(rng.integers(len(classes)))]
            else:
                observed[task] = true_cls
        instances.append(Instance(f"S{i:06d}", " ".join(words), LabelTriple(**observed)))
    return Corpus(name, tuple(instances), labeled=True)
