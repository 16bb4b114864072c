"""Experiment configuration: flat keys in an INI-style file, CLI-overridable.

Every key can appear in any section of the config file (sections organize,
they do not namespace) and has a command-line flag of the same name that
takes precedence.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .corpus import TASKS
from .knn import DEFAULT_FEATURE_COUNTS, DEFAULT_KS
from .vsm import FEATURE_UNITS

__all__ = ["ConfigError", "ExperimentConfig", "parse_bool", "parse_int_tuple"]


class ConfigError(ValueError):
    """Unusable configuration; maps to exit code 2."""


def parse_bool(value: str | bool) -> bool:
    if isinstance(value, bool):
        return value
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


def parse_int_tuple(value: str | tuple) -> tuple[int, ...]:
    """Parse "1,2,5" lists or "500:30000:500" inclusive ranges."""
    if isinstance(value, tuple):
        return value
    text = value.strip()
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) != 3:
            raise ConfigError(f"range syntax is start:stop:step, got {value!r}")
        start, stop, step = parts
        if step < 1:
            raise ConfigError(f"range step must be >= 1, got {step}")
        return tuple(range(start, stop + 1, step))
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise ConfigError(f"expected integers, got {value!r}") from exc


def _parse_tasks(value: str | tuple) -> tuple[str, ...]:
    if isinstance(value, tuple):
        return value
    tasks = tuple(t.strip() for t in value.split(",") if t.strip())
    unknown = [t for t in tasks if t not in TASKS]
    if unknown:
        raise ConfigError(f"unknown task(s) {unknown}; expected subset of {TASKS}")
    return tasks


def _parse_path(value: str | Path | None) -> Path | None:
    if value is None or value == "":
        return None
    return Path(value)


@dataclass
class ExperimentConfig:
    """All knobs of one experiment; defaults reproduce the submitted setup."""

    train: Path | None = None
    dev: Path | None = None
    test: Path | None = None
    system: str = "s2"
    tasks: tuple[str, ...] = TASKS
    seed: int = 1
    outdir: Path = field(default_factory=lambda: Path("runs/latest"))
    strict: bool = False
    feature_unit: str = "token"
    features: int = 30_000
    k: int = 1
    sweep_features: tuple[int, ...] = DEFAULT_FEATURE_COUNTS
    sweep_k: tuple[int, ...] = DEFAULT_KS
    folds: int = 5
    meta_features: int = 2000
    figures: bool = True

    _PARSERS = {
        "train": _parse_path,
        "dev": _parse_path,
        "test": _parse_path,
        "system": str,
        "tasks": _parse_tasks,
        "seed": int,
        "outdir": Path,
        "strict": parse_bool,
        "feature_unit": str,
        "features": int,
        "k": int,
        "sweep_features": parse_int_tuple,
        "sweep_k": parse_int_tuple,
        "folds": int,
        "meta_features": int,
        "figures": parse_bool,
    }

    @classmethod
    def keys(cls) -> tuple[str, ...]:
        return tuple(cls._PARSERS)

    @classmethod
    def from_sources(cls, config_file: str | Path | None = None, overrides: dict | None = None) -> "ExperimentConfig":
        """Defaults, then config-file values, then explicit overrides."""
        values: dict = {}
        if config_file is not None:
            values.update(cls._read_file(Path(config_file)))
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = value
        config = cls()
        for key, raw in values.items():
            if key not in cls._PARSERS:
                raise ConfigError(f"unknown configuration key {key!r}")
            try:
                setattr(config, key, cls._PARSERS[key](raw))
            except ConfigError:
                raise
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from exc
        config.validate()
        return config

    @staticmethod
    def _read_file(path: Path) -> dict[str, str]:
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        parser = configparser.ConfigParser()
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
        flat: dict[str, str] = {}
        for section in parser.sections():
            for key, value in parser.items(section):
                if key in flat:
                    raise ConfigError(f"configuration key {key!r} appears in more than one section")
                flat[key] = value
        return flat

    def validate(self) -> None:
        if self.system not in ("s1", "s2"):
            raise ConfigError(f"system must be s1 or s2, got {self.system!r}")
        if not self.tasks:
            raise ConfigError("at least one task must be selected")
        if self.feature_unit not in FEATURE_UNITS:
            raise ConfigError(f"feature_unit must be one of {FEATURE_UNITS}, got {self.feature_unit!r}")
        for key in ("features", "k", "meta_features"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1")
        if self.folds < 2:
            raise ConfigError("folds must be >= 2")
        if not self.sweep_features or not self.sweep_k:
            raise ConfigError("sweep ranges must be non-empty")

    def require_paths(self, *names: str) -> None:
        """Existence check for the inputs a stage is about to read."""
        for name in names:
            path = getattr(self, name)
            if path is None:
                raise ConfigError(f"{name} path is required for this command")
            if not Path(path).exists():
                raise ConfigError(f"{name} path does not exist: {path}")

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
