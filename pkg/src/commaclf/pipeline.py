"""Experiment orchestration: train, predict, sweep, score, manifest.

All artifacts land under the configured output directory:

    models/<system>_<task>.json   trained per-task models
    models/meta.json              system, tasks, majority-label fills
    predictions.tsv               id, aggression, gender, communal
    report.json / report.txt      metrics when the test split is labeled
    figures/*.png                 confusion matrices / sweep heatmaps
    sweep_<task>.{tsv,json}       model-selection grids
    manifest.json                 config, config hash, versions

Everything is deterministic given the config contents and input files; the
manifest is enough to re-run an experiment.
"""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .corpus import Corpus, LabelTriple, TASKS, load_dataset
from .evaluation import EvalReport, PredictionSet, load_predictions, make_report, save_predictions
from .knn import KnnModel, knn_fit, knn_predict, knn_sweep
from .learners import DenseFeaturizer
from .stacking import StackModel, default_base_specs, fit_stacked, predict_stacked
from .vsm import select_features

__all__ = [
    "PipelineError",
    "has_label_columns",
    "load_models",
    "predict_corpus",
    "run",
    "run_sweep",
    "score_files",
    "train_models",
    "write_manifest",
]

MODEL_FORMAT = "commaclf-task-model"
MODEL_VERSION = 1


class PipelineError(RuntimeError):
    """Failure while executing a valid configuration; maps to exit code 1."""


def has_label_columns(path: str | Path) -> bool:
    """Peek at a dataset header to see whether it carries the label columns."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline()
    if path.suffix.lower() == ".csv":
        names = [h.strip().lower() for h in header.split(",")]
    else:
        names = [h.strip().lower() for h in header.split("\t")]
    return all(task in names for task in TASKS)


class S2TaskModel:
    """KNN system wrapper for one task."""

    system = "s2"

    def __init__(self, knn: KnnModel):
        self.knn = knn
        self.task = knn.task

    def predict_labels(self, corpus: Corpus) -> list[str]:
        return [knn_predict(self.knn, inst.text) for inst in corpus]

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "system": self.system,
            "task": self.task,
            "knn": self.knn.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "S2TaskModel":
        return cls(KnnModel.from_dict(data["knn"]))


class S1TaskModel:
    """Stacked-ensemble system wrapper for one task."""

    system = "s1"

    def __init__(self, featurizer: DenseFeaturizer, stack: StackModel):
        self.featurizer = featurizer
        self.stack = stack
        self.task = stack.task

    def predict_labels(self, corpus: Corpus) -> list[str]:
        X = self.featurizer.transform(corpus)
        labels, _ = predict_stacked(self.stack, X)
        return [str(lab) for lab in labels]

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "system": self.system,
            "task": self.task,
            "featurizer": self.featurizer.to_dict(),
            "stack": self.stack.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "S1TaskModel":
        return cls(DenseFeaturizer.from_dict(data["featurizer"]), StackModel.from_dict(data["stack"]))


def _load_task_model(path: Path):
    data = json.loads(path.read_text(encoding="utf-8"))
    if data.get("format") != MODEL_FORMAT or data.get("version") != MODEL_VERSION:
        raise PipelineError(f"{path}: unsupported model container")
    return S2TaskModel.from_dict(data) if data["system"] == "s2" else S1TaskModel.from_dict(data)


def _fit_task_model(config: ExperimentConfig, train: Corpus, task: str):
    if config.system == "s2":
        fs = select_features(train, task, config.features, config.feature_unit)
        if config.k > len(train):
            raise PipelineError(f"k={config.k} exceeds the {len(train)}-document training set")
        return S2TaskModel(knn_fit(train, task, fs, config.k))
    featurizer = DenseFeaturizer.fit(train, task, config.meta_features, config.feature_unit)
    X = featurizer.transform(train)
    y = np.asarray(train.labels_for(task), dtype=object)
    stack = fit_stacked(default_base_specs(config.seed), X, y, config.folds, config.seed, task)
    return S1TaskModel(featurizer, stack)


def train_models(config: ExperimentConfig, train: Corpus | None = None) -> dict[str, Path]:
    """Train the configured system for every selected task and save it."""
    config.require_paths("train")
    if train is None:
        train = load_dataset(config.train, labeled=True, strict=config.strict, name="train")
    if len(train) == 0:
        raise PipelineError("training corpus is empty after ingestion")
    models_dir = Path(config.outdir) / "models"
    models_dir.mkdir(parents=True, exist_ok=True)
    majority = {
        task: Counter(train.labels_for(task)).most_common(1)[0][0] for task in TASKS
    }
    paths: dict[str, Path] = {}
    for task in config.tasks:
        model = _fit_task_model(config, train, task)
        path = models_dir / f"{config.system}_{task}.json"
        path.write_text(json.dumps(model.to_dict()) + "\n", encoding="utf-8")
        paths[task] = path
    meta = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "system": config.system,
        "tasks": list(config.tasks),
        "majority": majority,
        "config_hash": config.config_hash(),
    }
    (models_dir / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return paths


def load_models(models_dir: str | Path) -> tuple[dict[str, object], dict[str, str]]:
    """Load every trained task model plus the majority-label fills."""
    models_dir = Path(models_dir)
    meta_path = models_dir / "meta.json"
    if not meta_path.exists():
        raise PipelineError(f"no meta.json in {models_dir}; not a model directory?")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    models = {
        task: _load_task_model(models_dir / f"{meta['system']}_{task}.json") for task in meta["tasks"]
    }
    return models, meta["majority"]


def predict_corpus(models: dict[str, object], majority: dict[str, str], corpus: Corpus) -> PredictionSet:
    """Predict every instance; tasks without a model fall back to the
    training majority label, so the output table always has all columns."""
    per_task: dict[str, list[str]] = {}
    for task in TASKS:
        if task in models:
            per_task[task] = models[task].predict_labels(corpus)
        else:
            per_task[task] = [majority[task]] * len(corpus)
    triples = tuple(
        LabelTriple(per_task["aggression"][i], per_task["gender"][i], per_task["communal"][i])
        for i in range(len(corpus))
    )
    return PredictionSet(tuple(inst.id for inst in corpus), triples)


def write_manifest(config: ExperimentConfig, artifacts: dict[str, str]) -> Path:
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "versions": {"commaclf": __version__, "numpy": np.__version__},
        "artifacts": dict(sorted(artifacts.items())),
    }
    path = outdir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


def _render_report(report: EvalReport, outdir: Path, figures: bool) -> dict[str, str]:
    artifacts: dict[str, str] = {}
    artifacts["report_json"] = str(report.to_json(outdir / "report.json"))
    text_path = outdir / "report.txt"
    text_path.write_text(report.render_text(), encoding="utf-8")
    artifacts["report_txt"] = str(text_path)
    if figures:
        from .plots import save_confusion_figure

        fig_dir = outdir / "figures"
        fig_dir.mkdir(parents=True, exist_ok=True)
        artifacts["confusion_png"] = str(save_confusion_figure(report, fig_dir / "confusion.png"))
    return artifacts


def run(config: ExperimentConfig) -> dict[str, str]:
    """Train, predict and (when gold labels exist) score in one pass."""
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, str] = {}

    model_paths = train_models(config)
    artifacts.update({f"model_{task}": str(p) for task, p in model_paths.items()})

    if config.test is not None:
        config.require_paths("test")
        models, majority = load_models(outdir / "models")
        test_labeled = has_label_columns(config.test)
        test = load_dataset(config.test, labeled=test_labeled, strict=config.strict, name="test")
        preds = predict_corpus(models, majority, test)
        artifacts["predictions"] = str(save_predictions(preds, outdir / "predictions.tsv"))
        if test_labeled:
            report = make_report(preds, test)
            artifacts.update(_render_report(report, outdir, config.figures))

    artifacts["manifest"] = str(write_manifest(config, artifacts))
    return artifacts


def run_sweep(config: ExperimentConfig) -> dict[str, str]:
    """KNN model-selection sweep on the dev split, per task."""
    config.require_paths("train", "dev")
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    train = load_dataset(config.train, labeled=True, strict=config.strict, name="train")
    dev = load_dataset(config.dev, labeled=True, strict=config.strict, name="dev")
    artifacts: dict[str, str] = {}
    for task in config.tasks:
        grid = knn_sweep(
            train,
            dev,
            task,
            ks=config.sweep_k,
            feature_counts=config.sweep_features,
            unit=config.feature_unit,
        )
        artifacts[f"sweep_{task}_tsv"] = str(grid.to_tsv(outdir / f"sweep_{task}.tsv"))
        artifacts[f"sweep_{task}_json"] = str(grid.to_json(outdir / f"sweep_{task}.json"))
        if config.figures:
            from .plots import save_sweep_heatmap

            fig_dir = outdir / "figures"
            fig_dir.mkdir(parents=True, exist_ok=True)
            artifacts[f"sweep_{task}_png"] = str(save_sweep_heatmap(grid, fig_dir / f"sweep_{task}.png"))
    artifacts["manifest"] = str(write_manifest(config, artifacts))
    return artifacts


def score_files(
    predictions_path: str | Path,
    gold_path: str | Path,
    outdir: str | Path | None = None,
    figures: bool = False,
) -> tuple[EvalReport, dict[str, str]]:
    """Score a prediction table against a gold dataset."""
    preds = load_predictions(predictions_path)
    gold = load_dataset(gold_path, labeled=True, name="gold")
    report = make_report(preds, gold)
    artifacts: dict[str, str] = {}
    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        artifacts = _render_report(report, outdir, figures)
    return report, artifacts
