"""Experiment configuration: one declarative YAML file drives mining,
dataset construction, training, and evaluation. Every report embeds the
config hash so runs are traceable and reproducible."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from apilabels.codeparse import LANGUAGES
from apilabels.corpus.dataset import CORPUS_FIELD_CHOICES
from apilabels.errors import ConfigError
from apilabels.learn.relevance import BASE_KINDS

TRACKER_KINDS = ("github", "snapshot", "csv")
MODES = ("per_project", "merged", "transfer")

TOKEN_ENV_VARS = ("APILABELS_TOKEN", "GITHUB_TOKEN")


@dataclass
class ProjectConfig:
    name: str
    tracker: str = "snapshot"
    repo: str = ""  # owner/repo for github trackers
    language: str = "java"
    corpus_language: str = "en"
    checkout: str = ""  # source tree for parsing
    csv_issues: str = ""
    csv_issues_schema: str = ""
    csv_changes: str = ""
    csv_changes_schema: str = ""
    snapshot_dir: str = ""  # ndjson cache location override
    templates: list[str] = field(default_factory=list)
    companies: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if self.tracker not in TRACKER_KINDS:
            raise ConfigError(f"project {self.name}: unknown tracker {self.tracker!r}")
        if self.language not in LANGUAGES:
            raise ConfigError(f"project {self.name}: unknown language {self.language!r}")
        if self.tracker == "github" and not self.repo:
            raise ConfigError(f"project {self.name}: github tracker needs a repo slug")
        if self.tracker == "csv" and not (self.csv_issues and self.csv_issues_schema):
            raise ConfigError(f"project {self.name}: csv tracker needs csv_issues and its schema")


@dataclass
class ExperimentConfig:
    projects: list[ProjectConfig]
    mode: str = "per_project"
    fields: str = "B"
    ngram_range: tuple[int, int] = (1, 1)
    algorithm: str = "forest"
    algorithm_params: dict = field(default_factory=dict)
    test_fraction: float = 0.2
    n_splits: int = 10
    seed: int = 0
    smote: bool = False
    smote_k: int = 5
    label_filter_max_fraction: float = 0.9
    transfer_train: list[str] = field(default_factory=list)
    transfer_test: str = ""
    transfer_label_subset: list[str] | None = None
    vectors_path: str = ""
    workdir: str = "work"
    n_jobs: int = 1

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.fields not in CORPUS_FIELD_CHOICES:
            raise ConfigError(f"unknown corpus fields {self.fields!r}")
        if self.algorithm not in BASE_KINDS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if not self.projects:
            raise ConfigError("config names no projects")
        names = [p.name for p in self.projects]
        if len(set(names)) != len(names):
            raise ConfigError("project names must be unique")
        for project in self.projects:
            project.validate()
        if self.mode == "merged":
            if len(self.projects) < 2:
                raise ConfigError("merged mode needs at least two projects")
            languages = {p.corpus_language for p in self.projects}
            if len(languages) > 1:
                raise ConfigError(f"merged mode needs one shared vocabulary language, got {sorted(languages)}")
        if self.mode == "transfer":
            if not self.transfer_train or not self.transfer_test:
                raise ConfigError("transfer mode needs train projects and a test project")
            if self.transfer_test in self.transfer_train:
                raise ConfigError(f"test project {self.transfer_test!r} overlaps the training set")
            known = set(names)
            missing = [n for n in [*self.transfer_train, self.transfer_test] if n not in known]
            if missing:
                raise ConfigError(f"transfer names unknown projects: {missing}")

    def project(self, name: str) -> ProjectConfig:
        for project in self.projects:
            if project.name == name:
                return project
        raise ConfigError(f"no project named {name!r} in config")

    def project_workdir(self, name: str) -> Path:
        return Path(self.workdir) / name

    def corpus_settings(self) -> dict:
        return {
            "fields": self.fields,
            "ngram_range": list(self.ngram_range),
        }

    def config_hash(self) -> str:
        payload = {
            "mode": self.mode,
            "fields": self.fields,
            "ngram_range": list(self.ngram_range),
            "algorithm": self.algorithm,
            "algorithm_params": self.algorithm_params,
            "test_fraction": self.test_fraction,
            "n_splits": self.n_splits,
            "seed": self.seed,
            "smote": self.smote,
            "smote_k": self.smote_k,
            "label_filter_max_fraction": self.label_filter_max_fraction,
            "transfer_train": self.transfer_train,
            "transfer_test": self.transfer_test,
            "transfer_label_subset": self.transfer_label_subset,
            "projects": sorted(p.name for p in self.projects),
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    return config_from_dict(raw, base_dir=Path(path).parent)


def config_from_dict(raw: dict, base_dir: Path | None = None) -> ExperimentConfig:
    corpus = raw.get("corpus", {})
    split = raw.get("split", {})
    smote = raw.get("smote", {})
    algorithm = raw.get("algorithm", {})
    transfer = raw.get("transfer", {})
    projects = []
    for entry in raw.get("projects", []):
        projects.append(
            ProjectConfig(
                name=entry["name"],
                tracker=entry.get("tracker", "snapshot"),
                repo=entry.get("repo", ""),
                language=entry.get("language", "java"),
                corpus_language=entry.get("corpus_language", "en"),
                checkout=_resolve(entry.get("checkout", ""), base_dir),
                csv_issues=_resolve(entry.get("csv_issues", ""), base_dir),
                csv_issues_schema=_resolve(entry.get("csv_issues_schema", ""), base_dir),
                csv_changes=_resolve(entry.get("csv_changes", ""), base_dir),
                csv_changes_schema=_resolve(entry.get("csv_changes_schema", ""), base_dir),
                snapshot_dir=_resolve(entry.get("snapshot_dir", ""), base_dir),
                templates=list(entry.get("templates", [])),
                companies=list(entry.get("companies", [])),
            )
        )
    ngram = corpus.get("ngram_range", [1, 1])
    config = ExperimentConfig(
        projects=projects,
        mode=raw.get("mode", "per_project"),
        fields=corpus.get("fields", "B"),
        ngram_range=(int(ngram[0]), int(ngram[1])),
        algorithm=algorithm.get("kind", "forest"),
        algorithm_params=dict(algorithm.get("params", {})),
        test_fraction=float(split.get("test_fraction", 0.2)),
        n_splits=int(split.get("n_splits", 10)),
        seed=int(raw.get("seed", 0)),
        smote=bool(smote.get("enabled", False)),
        smote_k=int(smote.get("k", 5)),
        label_filter_max_fraction=float(raw.get("label_filter", {}).get("max_fraction", 0.9)),
        transfer_train=list(transfer.get("train_projects", [])),
        transfer_test=transfer.get("test_project", ""),
        transfer_label_subset=transfer.get("label_subset"),
        vectors_path=_resolve(raw.get("vectors", ""), base_dir),
        workdir=_resolve(raw.get("workdir", "work"), base_dir),
        n_jobs=int(raw.get("n_jobs", 1)),
    )
    config.validate()
    return config


def _resolve(value: str, base_dir: Path | None) -> str:
    if not value or base_dir is None:
        return value
    path = Path(value)
    return str(path if path.is_absolute() else base_dir / path)


def tracker_token() -> str:
    for name in TOKEN_ENV_VARS:
        value = os.environ.get(name)
        if value:
            return value
    return ""
