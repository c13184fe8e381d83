"""Label prediction for open issues and write-back to the tracker.

Prediction records serialize as newline-delimited JSON for pipeline
composition. Tracker labels carry an "api:" prefix so generated labels
never collide with project-native ones; application is idempotent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from apilabels.corpus import clean_text, remove_templates, select_fields
from apilabels.corpus.tfidf import TfidfModel
from apilabels.errors import CompatibilityError, RemoteError
from apilabels.ingestion.models import Issue
from apilabels.learn import (
    BinaryRelevanceModel,
    binary_relevance_predict,
    load_model,
    save_model,
)
from apilabels.learn.logreg import predict_proba_logreg
from apilabels.taxonomy import ApiDomain, domain_from_name

LABEL_PREFIX = "api:"
LABEL_COLOR = "5319e7"


def tracker_label_name(domain: ApiDomain) -> str:
    return LABEL_PREFIX + domain.value.lower()


_TRACKER_NAMES = {tracker_label_name(d): d for d in ApiDomain}


def domain_from_tracker_label(name: str) -> ApiDomain | None:
    return _TRACKER_NAMES.get(name.lower())


@dataclass
class PredictionRecord:
    project: str
    number: int
    domains: list[str]
    scores: dict[str, float] = field(default_factory=dict)
    model_hash: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {
                "project": self.project,
                "number": self.number,
                "domains": self.domains,
                "scores": self.scores,
                "model_hash": self.model_hash,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, line: str) -> "PredictionRecord":
        payload = json.loads(line)
        for name in payload["domains"]:
            domain_from_name(name)  # validate against the closed label set
        return cls(
            project=payload["project"],
            number=payload["number"],
            domains=payload["domains"],
            scores=payload.get("scores", {}),
            model_hash=payload.get("model_hash", ""),
        )


@dataclass
class TrainedPipeline:
    """A trained model plus everything needed to featurize new issues."""

    model: BinaryRelevanceModel
    tfidf: TfidfModel
    corpus_fields: str
    corpus_language: str
    templates: list[str]
    config_hash: str

    def save(self, path: str | Path) -> None:
        save_model(
            path,
            self.model,
            extra={
                "tfidf": self.tfidf.to_dict(),
                "corpus_fields": self.corpus_fields,
                "corpus_language": self.corpus_language,
                "templates": self.templates,
                "config_hash": self.config_hash,
            },
        )

    @classmethod
    def load(cls, path: str | Path) -> "TrainedPipeline":
        model, extra = load_model(path)
        return cls(
            model=model,
            tfidf=TfidfModel.from_dict(extra["tfidf"]),
            corpus_fields=extra["corpus_fields"],
            corpus_language=extra["corpus_language"],
            templates=list(extra.get("templates", [])),
            config_hash=extra.get("config_hash", ""),
        )


def predict_open_issues(
    pipeline: TrainedPipeline,
    issues: list[Issue],
    expected_fields: str | None = None,
) -> list[PredictionRecord]:
    """Clean and featurize open issues with the pipeline's own corpus
    settings, then predict. A conflicting fields request is an error."""
    if expected_fields is not None and expected_fields != pipeline.corpus_fields:
        raise CompatibilityError(
            f"model was trained on fields {pipeline.corpus_fields!r}, request asks {expected_fields!r}"
        )
    documents = []
    for issue in issues:
        segments = select_fields(issue.title, issue.body, issue.comments, pipeline.corpus_fields)
        raw = remove_templates("\n".join(segments), pipeline.templates)
        documents.append(clean_text(raw, pipeline.corpus_language))
    if not issues:
        return []
    features = pipeline.tfidf.transform(documents)
    predictions = binary_relevance_predict(pipeline.model, features)
    scores_matrix = None
    if pipeline.model.base_kind == "logreg":
        import numpy as np

        scores_matrix = np.column_stack(
            [predict_proba_logreg(m, features) for m in pipeline.model.models]
        )
    records = []
    for i, issue in enumerate(issues):
        domains = [
            pipeline.model.label_names[j]
            for j in range(predictions.shape[1])
            if predictions[i, j]
        ]
        scores = {}
        if scores_matrix is not None:
            scores = {
                pipeline.model.label_names[j]: round(float(scores_matrix[i, j]), 6)
                for j in range(predictions.shape[1])
                if predictions[i, j]
            }
        records.append(
            PredictionRecord(
                project=issue.project_id,
                number=issue.number,
                domains=domains,
                scores=scores,
                model_hash=pipeline.config_hash,
            )
        )
    return records


def write_predictions(path: str | Path, records: list[PredictionRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json() + "\n")


def read_predictions(path: str | Path) -> list[PredictionRecord]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            records.append(PredictionRecord.from_json(line))
    return records


# ---------------------------------------------------------------------------
# Write-back
# ---------------------------------------------------------------------------


class TrackerWriter:
    """Minimal write surface against the GitHub label endpoints."""

    def __init__(self, client, owner: str, repo: str):
        self._client = client
        self._owner = owner
        self._repo = repo

    def existing_issue_labels(self, number: int) -> set[str]:
        body = self._client._get(f"/repos/{self._owner}/{self._repo}/issues/{number}/labels", {}, 1)
        return {item["name"] for item in body or ()}

    def defined_labels(self) -> set[str]:
        body = self._client._paginate(f"/repos/{self._owner}/{self._repo}/labels", {})
        return {item["name"] for item in body}

    def create_label(self, name: str) -> None:
        self._client.post(
            f"/repos/{self._owner}/{self._repo}/labels",
            {"name": name, "color": LABEL_COLOR},
        )

    def add_labels(self, number: int, names: list[str]) -> None:
        self._client.post(
            f"/repos/{self._owner}/{self._repo}/issues/{number}/labels",
            {"labels": names},
        )


def apply_labels(
    records: list[PredictionRecord],
    writer: TrackerWriter | None,
    mode: str = "dry_run",
) -> dict:
    """Apply predicted labels. dry_run reports intended mutations without
    any tracker traffic; live applies them, skipping labels already
    present, with per-issue status and no rollback on partial failure."""
    if mode not in ("dry_run", "live"):
        raise ValueError(f"mode must be dry_run or live, got {mode!r}")
    report: dict = {"mode": mode, "issues": []}
    defined: set[str] = set()
    if mode == "live":
        if writer is None:
            raise RemoteError("live mode needs a tracker writer")
        defined = writer.defined_labels()
    for record in records:
        wanted = [tracker_label_name(domain_from_name(name)) for name in sorted(record.domains)]
        entry: dict = {"project": record.project, "number": record.number, "intended": wanted}
        if mode == "dry_run":
            entry["status"] = "dry_run"
            report["issues"].append(entry)
            continue
        try:
            existing = writer.existing_issue_labels(record.number)
            missing_definitions = [name for name in wanted if name not in defined]
            for name in missing_definitions:
                writer.create_label(name)
                defined.add(name)
            to_add = [name for name in wanted if name not in existing]
            if to_add:
                writer.add_labels(record.number, to_add)
            entry["added"] = to_add
            entry["skipped"] = [name for name in wanted if name in existing]
            entry["status"] = "ok"
        except RemoteError as exc:
            entry["status"] = "error"
            entry["error"] = str(exc)
        report["issues"].append(entry)
    return report
