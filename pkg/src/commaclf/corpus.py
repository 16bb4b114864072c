"""Reading, validating and writing ComMA-format datasets.

A dataset file is a delimited table with a header row naming at least ``id``
and ``text`` columns, plus ``aggression``/``gender``/``communal`` columns for
labeled splits. Tab separation is the default; files ending in ``.csv`` are
parsed as RFC-4180 CSV. Ingestion is where all cleaning happens: rows with
missing or placeholder text, malformed labels, or repeated ids never reach a
:class:`Corpus`. Each load reports its drops on stderr and in a JSON sidecar
next to the input file.
"""

from __future__ import annotations

import csv
import json
import sys
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .text import tokenize

__all__ = [
    "TASKS",
    "TASK_CLASSES",
    "Corpus",
    "CorpusFormatError",
    "CorpusStats",
    "DropReport",
    "Instance",
    "LabelTriple",
    "corpus_stats",
    "load_dataset",
    "load_dataset_with_report",
    "save_dataset",
]

TASKS = ("aggression", "gender", "communal")

TASK_CLASSES = {
    "aggression": ("OAG", "CAG", "NAG"),
    "gender": ("GEN", "NGEN"),
    "communal": ("COM", "NCOM"),
}

# Text cells equal to these (after stripping) are treated as absent.
_TEXT_PLACEHOLDERS = ("NaN", "nan")

_LABEL_COLUMNS = TASKS
_REQUIRED_COLUMNS = ("id", "text")


class CorpusFormatError(ValueError):
    """Raised when a dataset file cannot be interpreted at all."""


@dataclass(frozen=True)
class LabelTriple:
    """Gold or predicted labels for the three tasks of one instance."""

    aggression: str
    gender: str
    communal: str

    def __post_init__(self) -> None:
        for task in TASKS:
            value = getattr(self, task)
            if value not in TASK_CLASSES[task]:
                raise ValueError(f"invalid {task} label {value!r}; expected one of {TASK_CLASSES[task]}")

    def for_task(self, task: str) -> str:
        if task not in TASKS:
            raise ValueError(f"unknown task {task!r}")
        return getattr(self, task)

    def as_tuple(self) -> tuple[str, str, str]:
        return (self.aggression, self.gender, self.communal)


@dataclass(frozen=True)
class Instance:
    """One social-media message, optionally with its gold label triple."""

    id: str
    text: str
    labels: LabelTriple | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("instance id must be non-empty")
        if not self.text:
            raise ValueError("instance text must be non-empty")


@dataclass(frozen=True)
class Corpus:
    """An immutable, order-preserving collection of instances."""

    name: str
    instances: tuple[Instance, ...]
    labeled: bool

    def __post_init__(self) -> None:
        ids = [inst.id for inst in self.instances]
        if len(set(ids)) != len(ids):
            raise ValueError(f"corpus {self.name!r} has duplicate instance ids")
        if self.labeled and any(inst.labels is None for inst in self.instances):
            raise ValueError(f"corpus {self.name!r} marked labeled but has unlabeled instances")
        if not self.labeled and any(inst.labels is not None for inst in self.instances):
            raise ValueError(f"corpus {self.name!r} marked unlabeled but has labeled instances")

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)

    def texts(self) -> list[str]:
        return [inst.text for inst in self.instances]

    def labels_for(self, task: str) -> list[str]:
        if not self.labeled:
            raise ValueError(f"corpus {self.name!r} is unlabeled")
        return [inst.labels.for_task(task) for inst in self.instances]


@dataclass
class DropReport:
    """Accounting of rows removed during ingestion."""

    total_rows: int = 0
    reasons: Counter = field(default_factory=Counter)

    @property
    def dropped(self) -> int:
        return sum(self.reasons.values())

    @property
    def retained(self) -> int:
        return self.total_rows - self.dropped

    def as_dict(self) -> dict:
        return {"dropped": self.dropped, "reasons": dict(sorted(self.reasons.items()))}


def _read_raw_rows(path: Path) -> list[list[str]]:
    if path.suffix.lower() == ".csv":
        with path.open("r", encoding="utf-8", newline="") as fh:
            return [row for row in csv.reader(fh) if any(cell.strip() for cell in row)]
    with path.open("r", encoding="utf-8") as fh:
        return [line.rstrip("\r\n").split("\t") for line in fh if line.strip()]


def _column_map(header: list[str], labeled: bool, path: Path) -> dict[str, int]:
    names = [h.strip().lower() for h in header]
    columns: dict[str, int] = {}
    wanted = _REQUIRED_COLUMNS + (_LABEL_COLUMNS if labeled else ())
    for name in wanted:
        if name not in names:
            raise CorpusFormatError(f"{path}: required column {name!r} missing from header {names}")
        columns[name] = names.index(name)
    return columns


def load_dataset_with_report(
    path: str | Path,
    labeled: bool,
    *,
    strict: bool = False,
    name: str | None = None,
    sidecar: bool = True,
) -> tuple[Corpus, DropReport]:
    """Load a dataset and also return the drop accounting.

    In lenient mode (default) malformed rows and unknown labels are dropped
    and counted; in strict mode they abort the load. Empty/placeholder text
    is always dropped: that cleaning is the point of ingestion.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    rows = _read_raw_rows(path)
    if not rows:
        raise CorpusFormatError(f"{path}: file has no header row")
    columns = _column_map(rows[0], labeled, path)
    width = len(rows[0])

    report = DropReport(total_rows=len(rows) - 1)
    instances: list[Instance] = []
    seen_ids: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            if strict:
                raise CorpusFormatError(f"{path}:{lineno}: expected {width} fields, found {len(row)}")
            report.reasons["malformed_row"] += 1
            continue
        inst_id = row[columns["id"]].strip()
        if not inst_id:
            if strict:
                raise CorpusFormatError(f"{path}:{lineno}: empty id")
            report.reasons["malformed_row"] += 1
            continue
        text = row[columns["text"]].strip()
        if not text:
            report.reasons["empty_text"] += 1
            continue
        if text in _TEXT_PLACEHOLDERS:
            report.reasons["nan_text"] += 1
            continue
        labels = None
        if labeled:
            values = {task: row[columns[task]].strip().upper() for task in TASKS}
            bad = [task for task, v in values.items() if v not in TASK_CLASSES[task]]
            if bad:
                if strict:
                    raise CorpusFormatError(
                        f"{path}:{lineno}: invalid label(s) {', '.join(repr(values[t]) for t in bad)}"
                    )
                report.reasons["bad_label"] += 1
                continue
            labels = LabelTriple(**values)
        if inst_id in seen_ids:
            # Keep the first occurrence; repeats are dropped and counted.
            report.reasons["duplicate_id"] += 1
            continue
        seen_ids.add(inst_id)
        instances.append(Instance(inst_id, text, labels))

    corpus = Corpus(name or path.stem, tuple(instances), labeled)
    _emit_drop_report(path, report, sidecar=sidecar)
    return corpus, report


def load_dataset(
    path: str | Path,
    labeled: bool,
    *,
    strict: bool = False,
    name: str | None = None,
    sidecar: bool = True,
) -> Corpus:
    """Load a ComMA-format dataset, dropping unusable rows."""
    corpus, _ = load_dataset_with_report(path, labeled, strict=strict, name=name, sidecar=sidecar)
    return corpus


def _emit_drop_report(path: Path, report: DropReport, *, sidecar: bool) -> None:
    summary = ", ".join(f"{k}={v}" for k, v in sorted(report.reasons.items())) or "none"
    print(
        f"{path.name}: kept {report.retained} of {report.total_rows} rows; dropped {report.dropped} ({summary})",
        file=sys.stderr,
    )
    if not sidecar:
        return
    sidecar_path = path.with_name(path.name + ".drops.json")
    try:
        sidecar_path.write_text(json.dumps(report.as_dict(), indent=2) + "\n", encoding="utf-8")
    except OSError as exc:  # read-only input locations are tolerated
        print(f"could not write drop sidecar {sidecar_path}: {exc}", file=sys.stderr)


def save_dataset(corpus: Corpus, path: str | Path) -> Path:
    """Write a corpus back out in the same delimited format.

    Tab-separated unless the path ends in ``.csv``. In TSV mode tabs and
    newlines inside texts are flattened to spaces (the format cannot carry
    them); CSV mode quotes and preserves them.
    """
    path = Path(path)
    header = list(_REQUIRED_COLUMNS) + (list(_LABEL_COLUMNS) if corpus.labeled else [])
    if path.suffix.lower() == ".csv":
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for inst in corpus:
                row = [inst.id, inst.text]
                if corpus.labeled:
                    row.extend(inst.labels.as_tuple())
                writer.writerow(row)
        return path
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for inst in corpus:
            text = inst.text.replace("\t", " ").replace("\n", " ").replace("\r", " ")
            row = [inst.id, text]
            if corpus.labeled:
                row.extend(inst.labels.as_tuple())
            fh.write("\t".join(row) + "\n")
    return path


@dataclass(frozen=True)
class CorpusStats:
    instances: int
    tokens: int
    chars: int


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Instance, token and character totals for a corpus."""
    tokens = sum(len(tokenize(inst.text)) for inst in corpus)
    chars = sum(len(inst.text) for inst in corpus)
    return CorpusStats(len(corpus), tokens, chars)
