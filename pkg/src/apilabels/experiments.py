"""Experiment orchestration: dataset construction from mined project
data, and the per-project, merged, and transfer evaluation protocols.

Per-project and merged runs split with repeated shuffle splits and train
on each split's training rows (oversampled when configured); transfer
runs freeze the vocabulary on the training projects and evaluate once on
the held-out project.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from apilabels import codeparse
from apilabels.config import ExperimentConfig, ProjectConfig
from apilabels.corpus import (
    MultiLabelDataset,
    assemble_text,
    clean_text,
    compose_row_id,
    filter_labels,
    fit_tfidf,
    merge_datasets,
    mlsmote,
    remove_templates,
    restrict_labels,
    select_fields,
    shuffle_split,
)
from apilabels.corpus.tfidf import TfidfModel
from apilabels.errors import ConfigError, DataError, DatasetTooSmallError
from apilabels.evaluation import EvalReport, summarize_reports
from apilabels.ingestion import filter_linked, load_snapshot
from apilabels.learn import binary_relevance_predict, binary_relevance_train
from apilabels.taxonomy import CoverageCounter, DomainMap, DOMAIN_NAMES, label_issue

logger = logging.getLogger(__name__)

DOCS_FILE = "docs.txt"
TFIDF_FILE = "tfidf.json"


# ---------------------------------------------------------------------------
# Dataset construction from mined data
# ---------------------------------------------------------------------------


@dataclass
class LabeledCorpus:
    """Cleaned documents and their ground-truth label sets for one project."""

    project: str
    row_ids: list[str]
    documents: list[str]
    labels: np.ndarray  # rows x 31, domain enumeration order
    coverage: CoverageCounter = field(default_factory=CoverageCounter)


def build_labeled_corpus(
    project: ProjectConfig,
    config: ExperimentConfig,
    domain_map: DomainMap,
    file_api_index: dict,
    snapshot_index: codeparse.SnapshotIndex,
) -> LabeledCorpus:
    """mined snapshot + API inventory + domain map -> documents and labels.

    Links are restricted to merged changes touching source files still in
    the snapshot; issues linked to several changes take the union of their
    labels and the deduplicated concatenation of their text segments.
    """
    workdir = config.project_workdir(project.name)
    issues, changes, links = load_snapshot(project.snapshot_dir or workdir / "snapshot")
    merged_links = [link for link in links if link.change.merged]
    source_links, discarded = filter_linked(
        merged_links, codeparse.LANGUAGE_EXTENSIONS[project.language]
    )
    live_links = codeparse.snapshot_filter(source_links, None, snapshot_index)
    logger.info(
        "%s: %d links, %d without source files, %d surviving the snapshot filter",
        project.name, len(links), discarded, len(live_links),
    )

    coverage = CoverageCounter()
    per_issue_labels: dict[tuple[str, int], set] = {}
    per_issue_segments: dict[tuple[str, int], list[str]] = {}
    issue_order: list[tuple[str, int]] = []
    for link in live_links:
        key = link.issue.key
        live_files = [
            path for path in link.change.changed_file_paths
            if path in snapshot_index.file_paths
        ]
        domains = label_issue(live_files, file_api_index, domain_map, coverage)
        if key not in per_issue_labels:
            per_issue_labels[key] = set()
            per_issue_segments[key] = []
            issue_order.append(key)
        per_issue_labels[key] |= domains
        per_issue_segments[key].extend(
            select_fields(link.issue.title, link.issue.body, link.issue.comments, config.fields)
        )

    row_ids, documents, label_rows = [], [], []
    for key in issue_order:
        domains = per_issue_labels[key]
        if not domains:
            continue
        raw = assemble_text(per_issue_segments[key])
        raw = remove_templates(raw, project.templates)
        cleaned = clean_text(raw, project.corpus_language)
        row_ids.append(compose_row_id(key[0], key[1]))
        documents.append(cleaned)
        label_rows.append([1 if name in {d.value for d in domains} else 0 for name in DOMAIN_NAMES])

    labels = (
        np.asarray(label_rows, dtype=np.uint8)
        if label_rows
        else np.zeros((0, len(DOMAIN_NAMES)), dtype=np.uint8)
    )
    return LabeledCorpus(
        project=project.name, row_ids=row_ids, documents=documents,
        labels=labels, coverage=coverage,
    )


def vectorize_corpus(
    corpus: LabeledCorpus, config: ExperimentConfig, projects: tuple[str, ...]
) -> tuple[MultiLabelDataset, TfidfModel]:
    model = fit_tfidf(corpus.documents, config.ngram_range, projects=projects)
    dataset = MultiLabelDataset(
        features=model.transform(corpus.documents),
        labels=corpus.labels,
        label_names=list(DOMAIN_NAMES),
        row_ids=list(corpus.row_ids),
    )
    return dataset, model


def save_dataset(directory: Path, dataset: MultiLabelDataset, documents: list[str],
                 model: TfidfModel, provenance: dict) -> None:
    dataset.save(directory, provenance=provenance)
    (directory / DOCS_FILE).write_text("\n".join(documents) + "\n", encoding="utf-8")
    (directory / TFIDF_FILE).write_text(json.dumps(model.to_dict(), sort_keys=True), encoding="utf-8")


def load_dataset(directory: Path) -> tuple[MultiLabelDataset, list[str], TfidfModel]:
    dataset = MultiLabelDataset.load(directory)
    documents = (directory / DOCS_FILE).read_text(encoding="utf-8").splitlines()
    model = TfidfModel.from_dict(json.loads((directory / TFIDF_FILE).read_text(encoding="utf-8")))
    return dataset, documents, model


# ---------------------------------------------------------------------------
# Evaluation protocols
# ---------------------------------------------------------------------------


def _evaluate_splits(
    dataset: MultiLabelDataset, config: ExperimentConfig, metadata: dict
) -> list[EvalReport]:
    filtered, dropped = filter_labels(dataset, config.label_filter_max_fraction)
    if dropped:
        logger.info("dropped labels: %s", [d["label"] for d in dropped])
    try:
        plan = shuffle_split(filtered.n_rows, config.test_fraction, config.n_splits, config.seed)
    except DatasetTooSmallError as exc:
        raise DatasetTooSmallError(f"{metadata.get('dataset', 'dataset')}: {exc}") from None
    reports = []
    for index, (train_rows, test_rows) in enumerate(plan.splits):
        train = filtered.subset(train_rows)
        test = filtered.subset(test_rows)
        # labels can lose all their training positives inside a split
        active = [
            j for j in range(train.labels.shape[1])
            if 0 < train.labels[:, j].sum()
        ]
        if not active:
            raise DataError(f"split {index}: no label kept any training positives")
        names = [train.label_names[j] for j in active]
        train = restrict_labels(train, names)
        test = restrict_labels(test, names)
        if config.smote:
            train = mlsmote(train, k=config.smote_k, seed=config.seed + index)
        model = binary_relevance_train(
            train.features, train.labels, names,
            base_kind=config.algorithm, params=config.algorithm_params,
            seed=config.seed + index, n_jobs=config.n_jobs,
        )
        predictions = binary_relevance_predict(model, test.features)
        reports.append(
            EvalReport.from_predictions(
                test.labels, predictions, names,
                metadata={**metadata, "split": index, "seed": config.seed,
                          "algorithm": config.algorithm,
                          "corpus_fields": config.fields,
                          "ngram_range": list(config.ngram_range)},
            )
        )
    return reports


def run_per_project(config: ExperimentConfig) -> dict[str, dict]:
    """Per project: split, train, evaluate; reports plus mean/spread."""
    results = {}
    for project in config.projects:
        directory = config.project_workdir(project.name) / "dataset"
        dataset, _, _ = load_dataset(directory)
        reports = _evaluate_splits(
            dataset, config,
            metadata={"dataset": project.name, "mode": "per_project",
                      "config_hash": config.config_hash()},
        )
        results[project.name] = {"reports": reports, "summary": summarize_reports(reports)}
    return results


def run_merged(config: ExperimentConfig) -> dict:
    """One dataset over all projects: documents re-vectorized together,
    composed row IDs keep rows unique, absent labels zero-filled."""
    if len(config.projects) < 2:
        raise ConfigError("merged mode needs at least two projects")
    all_docs, parts = [], []
    for project in config.projects:
        dataset, documents, _ = load_dataset(config.project_workdir(project.name) / "dataset")
        if len(documents) != dataset.n_rows:
            raise DataError(f"{project.name}: document count differs from dataset rows")
        all_docs.append((dataset, documents))
    model = fit_tfidf(
        [doc for _, docs in all_docs for doc in docs],
        config.ngram_range,
        projects=tuple(p.name for p in config.projects),
    )
    for dataset, documents in all_docs:
        parts.append(
            MultiLabelDataset(
                features=model.transform(documents),
                labels=dataset.labels,
                label_names=dataset.label_names,
                row_ids=dataset.row_ids,
            )
        )
    merged = merge_datasets(parts, label_order=list(DOMAIN_NAMES))
    reports = _evaluate_splits(
        merged, config,
        metadata={"dataset": "+".join(p.name for p in config.projects), "mode": "merged",
                  "config_hash": config.config_hash()},
    )
    return {"reports": reports, "summary": summarize_reports(reports)}


def run_transfer(config: ExperimentConfig) -> EvalReport:
    """Train on the source projects, evaluate on the held-out project.

    The vocabulary and idf come from the training projects only; the
    optional label subset restricts both training labels and evaluation.
    """
    if config.transfer_test in config.transfer_train:
        raise ConfigError("transfer test project overlaps the training set")
    train_parts = []
    for name in config.transfer_train:
        dataset, documents, _ = load_dataset(config.project_workdir(name) / "dataset")
        train_parts.append((name, dataset, documents))
    test_dataset, test_docs, _ = load_dataset(
        config.project_workdir(config.transfer_test) / "dataset"
    )

    model = fit_tfidf(
        [doc for _, _, docs in train_parts for doc in docs],
        config.ngram_range,
        projects=tuple(config.transfer_train),
    )
    if config.transfer_test in model.fitted_projects:
        raise ConfigError("TF-IDF provenance includes the test project; refusing to evaluate")

    vectorized = [
        MultiLabelDataset(
            features=model.transform(docs),
            labels=ds.labels, label_names=ds.label_names, row_ids=ds.row_ids,
        )
        for _, ds, docs in train_parts
    ]
    train = (
        merge_datasets(vectorized, label_order=list(DOMAIN_NAMES))
        if len(vectorized) > 1
        else vectorized[0]
    )
    train, dropped = filter_labels(train, config.label_filter_max_fraction)
    if config.transfer_label_subset:
        train = restrict_labels(train, list(config.transfer_label_subset))
    if config.smote:
        train = mlsmote(train, k=config.smote_k, seed=config.seed)
    br = binary_relevance_train(
        train.features, train.labels, train.label_names,
        base_kind=config.algorithm, params=config.algorithm_params,
        seed=config.seed, n_jobs=config.n_jobs,
    )

    test_features = model.transform(test_docs)
    test_labels = np.zeros((test_dataset.n_rows, len(train.label_names)), dtype=np.uint8)
    for j, name in enumerate(train.label_names):
        if name in test_dataset.label_names:
            test_labels[:, j] = test_dataset.labels[:, test_dataset.label_names.index(name)]
    predictions = binary_relevance_predict(br, test_features)
    return EvalReport.from_predictions(
        test_labels, predictions, train.label_names,
        metadata={
            "mode": "transfer",
            "train_projects": list(config.transfer_train),
            "test_project": config.transfer_test,
            "label_subset": list(config.transfer_label_subset or []),
            "algorithm": config.algorithm,
            "corpus_fields": config.fields,
            "ngram_range": list(config.ngram_range),
            "seed": config.seed,
            "config_hash": config.config_hash(),
        },
    )
