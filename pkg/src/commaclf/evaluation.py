"""Shared-task metrics and report rendering.

Metric definitions (also printed in every report header so results are
self-describing):

* per-task micro-F1: F1 from class-pooled TP/FP/FN counts, which for one
  label per instance equals that task's accuracy;
* overall micro-F1: micro-average over all (instance, task) decisions
  pooled across the three tasks;
* instance F1: fraction of instances whose whole predicted triple matches
  gold exactly (one prediction per instance makes precision = recall).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, LabelTriple, TASK_CLASSES, TASKS

__all__ = [
    "EvalReport",
    "PredictionSet",
    "instance_f1",
    "load_predictions",
    "make_report",
    "overall_micro_f1",
    "save_predictions",
    "task_accuracy",
    "task_micro_f1",
]

METRIC_DEFINITIONS = (
    "per-task micro-F1 = micro-averaged F1 over the task's classes (equals task accuracy)",
    "overall micro-F1 = micro-average pooled over all (instance, task) decisions",
    "instance F1 = exact-match rate of the full label triple",
)


@dataclass(frozen=True)
class PredictionSet:
    """One predicted label triple per instance id."""

    ids: tuple[str, ...]
    triples: tuple[LabelTriple, ...]

    def __post_init__(self) -> None:
        if len(self.ids) != len(self.triples):
            raise ValueError("one triple per id required")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("prediction ids must be unique")

    def __len__(self) -> int:
        return len(self.ids)

    def as_mapping(self) -> dict[str, LabelTriple]:
        return dict(zip(self.ids, self.triples))


def save_predictions(preds: PredictionSet, path: str | Path) -> Path:
    """Write the prediction table: id, aggression, gender, communal."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\t" + "\t".join(TASKS) + "\n")
        for inst_id, triple in zip(preds.ids, preds.triples):
            fh.write(inst_id + "\t" + "\t".join(triple.as_tuple()) + "\n")
    return path


def load_predictions(path: str | Path) -> PredictionSet:
    """Read a prediction table; a corpus-format file (with text) also works."""
    path = Path(path)
    lines = [line.rstrip("\r\n") for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty predictions file")
    header = [h.strip().lower() for h in lines[0].split("\t")]
    try:
        columns = {name: header.index(name) for name in ("id",) + TASKS}
    except ValueError as exc:
        raise ValueError(f"{path}: predictions need id and task columns, got {header}") from exc
    ids: list[str] = []
    triples: list[LabelTriple] = []
    width = len(header)
    for lineno, line in enumerate(lines[1:], start=2):
        row = line.split("\t")
        if len(row) != width:
            raise ValueError(f"{path}:{lineno}: expected {width} fields, found {len(row)}")
        ids.append(row[columns["id"]].strip())
        triples.append(LabelTriple(*(row[columns[task]].strip().upper() for task in TASKS)))
    return PredictionSet(tuple(ids), tuple(triples))


def _gold_mapping(golds: Corpus | PredictionSet) -> dict[str, LabelTriple]:
    if isinstance(golds, PredictionSet):
        return golds.as_mapping()
    if not golds.labeled:
        raise ValueError(f"gold corpus {golds.name!r} is unlabeled")
    return {inst.id: inst.labels for inst in golds}


def _aligned(preds: PredictionSet, golds: Corpus | PredictionSet) -> list[tuple[LabelTriple, LabelTriple]]:
    gold_map = _gold_mapping(golds)
    pred_map = preds.as_mapping()
    if set(gold_map) != set(pred_map):
        missing = sorted(set(gold_map) - set(pred_map))[:3]
        extra = sorted(set(pred_map) - set(gold_map))[:3]
        raise ValueError(f"prediction/gold id mismatch (missing e.g. {missing}, unexpected e.g. {extra})")
    return [(pred_map[i], gold_map[i]) for i in sorted(gold_map)]


def task_micro_f1(preds: PredictionSet, golds: Corpus | PredictionSet, task: str) -> float:
    """Micro-F1 over the task's classes via pooled TP/FP/FN counts."""
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    pairs = _aligned(preds, golds)
    tp = fp = fn = 0
    for cls in TASK_CLASSES[task]:
        for pred, gold in pairs:
            p = pred.for_task(task) == cls
            g = gold.for_task(task) == cls
            tp += p and g
            fp += p and not g
            fn += g and not p
    if tp == 0:
        return 0.0
    return 2 * tp / (2 * tp + fp + fn)


def task_accuracy(preds: PredictionSet, golds: Corpus | PredictionSet, task: str) -> float:
    pairs = _aligned(preds, golds)
    return sum(pred.for_task(task) == gold.for_task(task) for pred, gold in pairs) / len(pairs)


def overall_micro_f1(preds: PredictionSet, golds: Corpus | PredictionSet) -> float:
    """Micro-average over the pooled (instance, task) decisions of all tasks."""
    pairs = _aligned(preds, golds)
    correct = sum(
        pred.for_task(task) == gold.for_task(task) for pred, gold in pairs for task in TASKS
    )
    return correct / (len(pairs) * len(TASKS))


def instance_f1(preds: PredictionSet, golds: Corpus | PredictionSet) -> float:
    """Exact-match rate of the whole triple."""
    pairs = _aligned(preds, golds)
    return sum(pred == gold for pred, gold in pairs) / len(pairs)


@dataclass(frozen=True)
class EvalReport:
    """All metrics of one scored prediction set."""

    instances: int
    accuracy: dict[str, float]
    micro_f1: dict[str, float]
    overall_micro_f1: float
    instance_f1: float
    confusion: dict[str, dict[str, dict[str, int]]]  # task -> gold -> pred -> count

    def as_dict(self) -> dict:
        return {
            "definitions": list(METRIC_DEFINITIONS),
            "instances": self.instances,
            "accuracy": dict(self.accuracy),
            "micro_f1": dict(self.micro_f1),
            "overall_micro_f1": self.overall_micro_f1,
            "instance_f1": self.instance_f1,
            "confusion": {t: {g: dict(p) for g, p in m.items()} for t, m in self.confusion.items()},
        }

    def to_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.as_dict(), indent=2) + "\n", encoding="utf-8")
        return path

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        return cls(
            instances=data["instances"],
            accuracy=dict(data["accuracy"]),
            micro_f1=dict(data["micro_f1"]),
            overall_micro_f1=data["overall_micro_f1"],
            instance_f1=data["instance_f1"],
            confusion={t: {g: dict(p) for g, p in m.items()} for t, m in data["confusion"].items()},
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "EvalReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def render_text(self) -> str:
        lines = ["Evaluation report", "=================", ""]
        lines.extend(f"- {d}" for d in METRIC_DEFINITIONS)
        lines.append("")
        lines.append(f"instances        {self.instances}")
        lines.append(f"instance F1      {self.instance_f1:.4f}")
        lines.append(f"overall micro-F1 {self.overall_micro_f1:.4f}")
        for task in TASKS:
            lines.append(f"{task:<10} accuracy {self.accuracy[task]:.4f}  micro-F1 {self.micro_f1[task]:.4f}")
        for task in TASKS:
            classes = TASK_CLASSES[task]
            lines.append("")
            lines.append(f"confusion [{task}] (rows gold, columns predicted)")
            lines.append("      " + " ".join(f"{c:>6}" for c in classes))
            for gold in classes:
                row = " ".join(f"{self.confusion[task][gold][pred]:>6}" for pred in classes)
                lines.append(f"{gold:>5} {row}")
        return "\n".join(lines) + "\n"


def make_report(preds: PredictionSet, golds: Corpus | PredictionSet) -> EvalReport:
    """Score a prediction set: all metrics plus per-task confusion matrices."""
    pairs = _aligned(preds, golds)
    confusion = {
        task: {g: {p: 0 for p in TASK_CLASSES[task]} for g in TASK_CLASSES[task]} for task in TASKS
    }
    for pred, gold in pairs:
        for task in TASKS:
            confusion[task][gold.for_task(task)][pred.for_task(task)] += 1
    return EvalReport(
        instances=len(pairs),
        accuracy={task: task_accuracy(preds, golds, task) for task in TASKS},
        micro_f1={task: task_micro_f1(preds, golds, task) for task in TASKS},
        overall_micro_f1=overall_micro_f1(preds, golds),
        instance_f1=instance_f1(preds, golds),
        confusion=confusion,
    )
