"""Command-line interface.

Subcommands: ingest, sweep, train, predict, score, synth, report.
Exit codes: 0 success, 1 runtime failure, 2 usage/configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig
from .corpus import CorpusFormatError, corpus_stats, load_dataset, load_dataset_with_report, save_dataset
from .evaluation import save_predictions
from .pipeline import (
    PipelineError,
    has_label_columns,
    load_models,
    predict_corpus,
    run,
    run_sweep,
    score_files,
)
from .synth import generate_synthetic, separated_spec

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

_FLAG_HELP = {
    "train": "training split path",
    "dev": "development split path",
    "test": "test split path",
    "system": "classifier system: s1 (stacking) or s2 (cosine KNN)",
    "tasks": "comma-separated subset of aggression,gender,communal",
    "seed": "experiment seed (drives every stochastic component)",
    "outdir": "output directory for artifacts",
    "strict": "abort on malformed rows instead of dropping them",
    "feature_unit": "feature strings: token or char (2..5-grams)",
    "features": "S2 feature count",
    "k": "S2 neighbor count",
    "sweep_features": "sweep feature counts, list (a,b,c) or range (lo:hi:step)",
    "sweep_k": "sweep K values, list or range",
    "folds": "S1 cross-validation folds",
    "meta_features": "S1 chi2 feature count for dense rows",
    "figures": "render figures alongside delimited outputs",
}


def _add_config_flags(parser: argparse.ArgumentParser, keys: tuple[str, ...]) -> None:
    parser.add_argument("--config", type=Path, default=None, help="INI config file; flags override its keys")
    for key in keys:
        flag = "--" + key.replace("_", "-")
        if key in ("strict", "figures"):
            group = parser.add_mutually_exclusive_group()
            group.add_argument(flag, dest=key, action="store_const", const="true", help=_FLAG_HELP[key])
            group.add_argument(
                "--no-" + key.replace("_", "-"), dest=key, action="store_const", const="false"
            )
            parser.set_defaults(**{key: None})
        else:
            parser.add_argument(flag, dest=key, default=None, help=_FLAG_HELP[key])


def _config_from_args(args: argparse.Namespace, keys: tuple[str, ...]) -> ExperimentConfig:
    overrides = {key: getattr(args, key) for key in keys}
    return ExperimentConfig.from_sources(args.config, overrides)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commaclf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load, clean and describe a dataset")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--labeled", action="store_true", help="expect the three label columns")
    p.add_argument("--strict", action="store_true", help="abort on malformed rows")
    p.add_argument("--output", type=Path, default=None, help="write the cleaned copy here")

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--outdir", type=Path, required=True)
    p.add_argument("--train-size", type=int, default=3000)
    p.add_argument("--dev-size", type=int, default=1000)
    p.add_argument("--test-size", type=int, default=1000)
    p.add_argument("--vocab", type=int, default=60)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=1)

    p = sub.add_parser("sweep", help="KNN (feature count x K) dev-accuracy sweep")
    _add_config_flags(p, ("train", "dev", "tasks", "seed", "outdir", "strict", "feature_unit", "sweep_features", "sweep_k", "figures"))

    p = sub.add_parser("train", help="train the configured system per task")
    _add_config_flags(
        p,
        ("train", "test", "system", "tasks", "seed", "outdir", "strict", "feature_unit", "features", "k", "folds", "meta_features", "figures"),
    )

    p = sub.add_parser("predict", help="label a dataset with trained models")
    p.add_argument("--models", type=Path, required=True, help="models/ directory from a train run")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("score", help="score predictions against a gold dataset")
    p.add_argument("--predictions", type=Path, required=True)
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--output", type=Path, default=None, help="also write report.json/report.txt here")

    p = sub.add_parser("report", help="full report with figures from predictions + gold")
    p.add_argument("--predictions", type=Path, required=True)
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--outdir", type=Path, required=True)

    return parser


def _cmd_ingest(args: argparse.Namespace) -> int:
    labeled = bool(args.labeled)
    corpus, report = load_dataset_with_report(args.input, labeled, strict=args.strict)
    stats = corpus_stats(corpus)
    print(f"instances={stats.instances} tokens={stats.tokens} chars={stats.chars} dropped={report.dropped}")
    if args.output is not None:
        save_dataset(corpus, args.output)
        print(f"cleaned copy written to {args.output}")
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    args.outdir.mkdir(parents=True, exist_ok=True)
    for split, size, offset in (("train", args.train_size, 0), ("dev", args.dev_size, 1), ("test", args.test_size, 2)):
        spec = separated_spec(size, vocab_size=args.vocab, noise=args.noise, seed=args.seed * 10 + offset)
        corpus = generate_synthetic(spec, name=split)
        path = args.outdir / f"{split}.tsv"
        save_dataset(corpus, path)
        print(f"{split}: {size} instances -> {path}")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    keys = ("train", "dev", "tasks", "seed", "outdir", "strict", "feature_unit", "sweep_features", "sweep_k", "figures")
    config = _config_from_args(args, keys)
    artifacts = run_sweep(config)
    for name, path in sorted(artifacts.items()):
        print(f"{name}: {path}")
    return EXIT_OK


def _cmd_train(args: argparse.Namespace) -> int:
    keys = ("train", "test", "system", "tasks", "seed", "outdir", "strict", "feature_unit", "features", "k", "folds", "meta_features", "figures")
    config = _config_from_args(args, keys)
    artifacts = run(config)
    for name, path in sorted(artifacts.items()):
        print(f"{name}: {path}")
    return EXIT_OK


def _cmd_predict(args: argparse.Namespace) -> int:
    if not args.models.exists():
        raise ConfigError(f"models directory does not exist: {args.models}")
    if not args.input.exists():
        raise ConfigError(f"input path does not exist: {args.input}")
    models, majority = load_models(args.models)
    labeled = has_label_columns(args.input)
    corpus = load_dataset(args.input, labeled=labeled, name="input")
    preds = predict_corpus(models, majority, corpus)
    save_predictions(preds, args.output)
    print(f"predictions for {len(preds)} instances -> {args.output}")
    return EXIT_OK


def _cmd_score(args: argparse.Namespace) -> int:
    _require_files(args.predictions, args.gold)
    report, _ = score_files(args.predictions, args.gold, outdir=args.output, figures=False)
    print(report.render_text())
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    _require_files(args.predictions, args.gold)
    report, artifacts = score_files(args.predictions, args.gold, outdir=args.outdir, figures=True)
    print(report.render_text())
    for name, path in sorted(artifacts.items()):
        print(f"{name}: {path}")
    return EXIT_OK


def _require_files(*paths: Path) -> None:
    for path in paths:
        if not path.exists():
            raise ConfigError(f"path does not exist: {path}")


_COMMANDS = {
    "ingest": _cmd_ingest,
    "synth": _cmd_synth,
    "sweep": _cmd_sweep,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "score": _cmd_score,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PipelineError, CorpusFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
