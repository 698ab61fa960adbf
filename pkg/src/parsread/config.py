"""Pipeline configuration: a TOML file whose values command-line flags override."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .classify import KINDS
from .errors import ConfigError


@dataclass
class PathsConfig:
    corpus: str | None = None
    tagged_corpus: str | None = None
    tagset: str | None = None
    stopwords: str | None = None
    lm_dir: str | None = None
    tagger: str | None = None
    model: str | None = None
    log: str | None = None
    gold: str | None = None
    docs: str | None = None


@dataclass
class FeaturesConfig:
    remove_stopwords: bool = True
    tag_before_stopwords: bool = True
    classical_gunning: bool = False


@dataclass
class ClassifierSection:
    kind: str = "linear-svm"
    lam: float = 1e-4
    epochs: int = 100
    var_floor: float = 1e-9
    max_depth: int | None = None
    min_leaf: int = 1
    n_estimators: int = 50
    max_features: int | str | None = "sqrt"
    bootstrap: bool = True


@dataclass
class EvaluateConfig:
    k: int = 10
    stratify: bool = True


@dataclass
class CurateConfig:
    min_labels: int = 3
    threshold: int = 80
    z_threshold: float = 3.0
    gold_floor: float = 1.0 / 3.0


@dataclass
class PipelineConfig:
    seed: int = 0
    paths: PathsConfig = field(default_factory=PathsConfig)
    features: FeaturesConfig = field(default_factory=FeaturesConfig)
    classifier: ClassifierSection = field(default_factory=ClassifierSection)
    evaluate: EvaluateConfig = field(default_factory=EvaluateConfig)
    curate: CurateConfig = field(default_factory=CurateConfig)


_SECTIONS = {
    "paths": PathsConfig,
    "features": FeaturesConfig,
    "classifier": ClassifierSection,
    "evaluate": EvaluateConfig,
    "curate": CurateConfig,
}


def _type_ok(value: Any, annotation: str) -> bool:
    allowed = {a.strip() for a in annotation.split("|")}
    if value is None:
        return "None" in allowed
    if isinstance(value, bool):
        return "bool" in allowed
    if isinstance(value, int):
        return bool(allowed & {"int", "float"})
    if isinstance(value, float):
        return "float" in allowed
    if isinstance(value, str):
        return "str" in allowed
    return False


def _coerce(value: Any, annotation: str) -> Any:
    if isinstance(value, int) and not isinstance(value, bool) and "float" in annotation and "int" not in annotation:
        return float(value)
    return value


def from_mapping(data: dict, source: str = "<config>") -> PipelineConfig:
    """Build and validate a config, collecting every problem before failing."""
    problems: list[str] = []
    cfg = PipelineConfig()
    for key, value in data.items():
        if key == "seed":
            if isinstance(value, int) and not isinstance(value, bool) and value >= 0:
                cfg.seed = value
            else:
                problems.append(f"{source}: seed must be a non-negative integer, got {value!r}")
            continue
        section_cls = _SECTIONS.get(key)
        if section_cls is None:
            problems.append(f"{source}: unknown key {key!r}")
            continue
        if not isinstance(value, dict):
            problems.append(f"{source}: [{key}] must be a table")
            continue
        section = getattr(cfg, key)
        known = {f.name: f for f in fields(section_cls)}
        for sub, v in value.items():
            f = known.get(sub)
            if f is None:
                problems.append(f"{source}: unknown key {key}.{sub}")
            elif not _type_ok(v, str(f.type)):
                problems.append(f"{source}: {key}.{sub} should be {f.type}, got {type(v).__name__} {v!r}")
            else:
                setattr(section, sub, _coerce(v, str(f.type)))
    problems.extend(validate(cfg, source))
    if problems:
        raise ConfigError(problems)
    return cfg


def validate(cfg: PipelineConfig, source: str = "<config>") -> list[str]:
    p = []
    c = cfg.classifier
    if c.kind not in KINDS:
        p.append(f"{source}: classifier.kind must be one of {list(KINDS)}, got {c.kind!r}")
    if c.lam <= 0:
        p.append(f"{source}: classifier.lam must be positive")
    if c.epochs < 1:
        p.append(f"{source}: classifier.epochs must be >= 1")
    if c.n_estimators < 1:
        p.append(f"{source}: classifier.n_estimators must be >= 1")
    if c.min_leaf < 1:
        p.append(f"{source}: classifier.min_leaf must be >= 1")
    if isinstance(c.max_features, str) and c.max_features != "sqrt":
        p.append(f"{source}: classifier.max_features must be 'sqrt', an integer, or absent")
    if cfg.evaluate.k < 2:
        p.append(f"{source}: evaluate.k must be >= 2")
    cu = cfg.curate
    if cu.min_labels < 1:
        p.append(f"{source}: curate.min_labels must be >= 1")
    if not 0 <= cu.threshold <= 100:
        p.append(f"{source}: curate.threshold must be within [0, 100]")
    if cu.z_threshold <= 0:
        p.append(f"{source}: curate.z_threshold must be positive")
    if not 0 <= cu.gold_floor <= 1:
        p.append(f"{source}: curate.gold_floor must be within [0, 1]")
    return p


def load_config(path: str | Path | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError([f"cannot read config {path}: {exc}"]) from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f"{path}: invalid TOML ({exc})"]) from exc
    return from_mapping(data, str(path))
