"""Multi-label datasets: document assembly, the dense feature/label pair,
diagnostics, label filtering, merging, and on-disk persistence.

A dataset directory holds features.bin (row-major float64) described by
features.json, a labels.csv with row IDs and the binary label matrix, and
provenance.json (config hash, seed, corpus settings).
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from apilabels.errors import DataError, EmptyLabelsError, IntegrityError

CORPUS_FIELD_CHOICES = ("T", "B", "T+B", "T+B+C")


@dataclass(frozen=True)
class Document:
    """Cleaned-ready text for one linked issue."""

    row_id: str
    text: str
    language: str
    fields_used: str


def compose_row_id(project_id: str, number: int) -> str:
    """Project-qualified issue ID, unique across merged datasets."""
    return f"{project_id}:{number}"


def assemble_text(segments: list[str]) -> str:
    """Join text segments, dropping exact duplicates (multi-link data)."""
    seen = set()
    kept = []
    for segment in segments:
        segment = segment.strip()
        if segment and segment not in seen:
            seen.add(segment)
            kept.append(segment)
    return "\n".join(kept)


def select_fields(title: str, body: str, comments: tuple[str, ...], fields: str) -> list[str]:
    if fields not in CORPUS_FIELD_CHOICES:
        raise DataError(f"unknown corpus fields {fields!r}, expected one of {CORPUS_FIELD_CHOICES}")
    segments: list[str] = []
    if "T" in fields:
        segments.append(title)
    if "B" in fields:
        segments.append(body)
    if "C" in fields:
        segments.extend(comments)
    return segments


@dataclass
class MultiLabelDataset:
    """Dense features paired with a binary label matrix."""

    features: np.ndarray
    labels: np.ndarray
    label_names: list[str]
    row_ids: list[str]
    synthetic: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.synthetic is None:
            self.synthetic = np.zeros(len(self.row_ids), dtype=bool)
        n = self.features.shape[0]
        if not (self.labels.shape[0] == n == len(self.row_ids) == len(self.synthetic)):
            raise DataError("features, labels, row_ids, and synthetic flags disagree on row count")
        if self.labels.shape[1] != len(self.label_names):
            raise DataError("label matrix width does not match label names")

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    def subset(self, rows: np.ndarray) -> "MultiLabelDataset":
        return MultiLabelDataset(
            features=self.features[rows],
            labels=self.labels[rows],
            label_names=list(self.label_names),
            row_ids=[self.row_ids[i] for i in rows],
            synthetic=self.synthetic[rows],
        )

    def save(self, directory: str | Path, provenance: dict | None = None) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        feats = np.ascontiguousarray(self.features, dtype=np.float64)
        (directory / "features.bin").write_bytes(feats.tobytes())
        (directory / "features.json").write_text(
            json.dumps(
                {"rows": feats.shape[0], "cols": feats.shape[1], "dtype": "float64", "order": "C"},
                indent=2,
            )
        )
        with open(directory / "labels.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["row_id", "synthetic", *self.label_names])
            for i, row_id in enumerate(self.row_ids):
                writer.writerow([row_id, int(self.synthetic[i]), *(int(v) for v in self.labels[i])])
        (directory / "provenance.json").write_text(json.dumps(provenance or {}, indent=2, sort_keys=True))

    @classmethod
    def load(cls, directory: str | Path) -> "MultiLabelDataset":
        directory = Path(directory)
        header = json.loads((directory / "features.json").read_text())
        feats = np.frombuffer((directory / "features.bin").read_bytes(), dtype=np.float64)
        feats = feats.reshape(header["rows"], header["cols"]).copy()
        with open(directory / "labels.csv", newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            head = next(reader)
            label_names = head[2:]
            row_ids, synthetic, rows = [], [], []
            for record in reader:
                row_ids.append(record[0])
                synthetic.append(bool(int(record[1])))
                rows.append([int(v) for v in record[2:]])
        labels = np.asarray(rows, dtype=np.uint8).reshape(len(row_ids), len(label_names))
        return cls(
            features=feats,
            labels=labels,
            label_names=label_names,
            row_ids=row_ids,
            synthetic=np.asarray(synthetic, dtype=bool),
        )

    @staticmethod
    def load_provenance(directory: str | Path) -> dict:
        return json.loads((Path(directory) / "provenance.json").read_text())


def diagnostics(labels: np.ndarray) -> tuple[float, float]:
    """(label cardinality, label density): mean labels per row and that
    mean divided by the number of label columns."""
    labels = np.asarray(labels)
    if labels.ndim != 2 or labels.shape[0] < 1:
        raise DataError("diagnostics needs a non-empty 2-D label matrix")
    if labels.shape[1] == 0:
        raise DataError("diagnostics needs at least one label column")
    cardinality = float(labels.sum(axis=1).mean())
    return cardinality, cardinality / labels.shape[1]


def filter_labels(
    dataset: MultiLabelDataset, max_fraction: float = 0.9
) -> tuple[MultiLabelDataset, list[dict]]:
    """Drop label columns with zero positives or a positive rate above
    max_fraction; returns the reduced dataset and the drop report."""
    if not (0.0 < max_fraction <= 1.0):
        raise DataError(f"max_fraction must be in (0, 1], got {max_fraction}")
    rates = dataset.labels.mean(axis=0)
    positives = dataset.labels.sum(axis=0)
    dropped = []
    keep = []
    for j, name in enumerate(dataset.label_names):
        if positives[j] == 0:
            dropped.append({"label": name, "reason": "absent", "rate": 0.0})
        elif rates[j] > max_fraction:
            dropped.append({"label": name, "reason": "over_threshold", "rate": float(rates[j])})
        else:
            keep.append(j)
    if not keep:
        raise EmptyLabelsError("label filtering removed every label column")
    out = MultiLabelDataset(
        features=dataset.features,
        labels=dataset.labels[:, keep],
        label_names=[dataset.label_names[j] for j in keep],
        row_ids=list(dataset.row_ids),
        synthetic=dataset.synthetic,
    )
    return out, dropped


def merge_datasets(datasets: list[MultiLabelDataset], label_order: list[str]) -> MultiLabelDataset:
    """Concatenate rows; the label space is the union of active labels in
    label_order, zero-filled where a project lacks a label. Features must
    come from a shared vocabulary (same width)."""
    if len(datasets) < 2:
        raise DataError("merging needs at least two datasets")
    width = datasets[0].features.shape[1]
    for ds in datasets[1:]:
        if ds.features.shape[1] != width:
            raise DataError("merged datasets must share a feature vocabulary")
    union = [name for name in label_order if any(name in ds.label_names for ds in datasets)]
    blocks = []
    for ds in datasets:
        block = np.zeros((ds.n_rows, len(union)), dtype=np.uint8)
        for j, name in enumerate(union):
            if name in ds.label_names:
                block[:, j] = ds.labels[:, ds.label_names.index(name)]
        blocks.append(block)
    row_ids = [rid for ds in datasets for rid in ds.row_ids]
    counts = Counter(row_ids)
    duplicates = sorted(rid for rid, c in counts.items() if c > 1)
    if duplicates:
        raise IntegrityError(f"duplicate composed row IDs after merge: {duplicates[:5]}")
    return MultiLabelDataset(
        features=np.vstack([ds.features for ds in datasets]),
        labels=np.vstack(blocks),
        label_names=union,
        row_ids=row_ids,
        synthetic=np.concatenate([ds.synthetic for ds in datasets]),
    )


def restrict_labels(dataset: MultiLabelDataset, subset: list[str]) -> MultiLabelDataset:
    """Keep only the named label columns (curated-label experiments)."""
    missing = [name for name in subset if name not in dataset.label_names]
    if missing:
        raise DataError(f"labels not in dataset: {missing}")
    idx = [dataset.label_names.index(name) for name in subset]
    return replace(
        dataset,
        labels=dataset.labels[:, idx],
        label_names=list(subset),
    )
