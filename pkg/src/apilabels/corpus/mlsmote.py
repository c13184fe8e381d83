"""Multi-label synthetic oversampling (MLSMOTE).

Minority labels are those whose imbalance ratio IRLbl (most frequent
label's positives over this label's positives) exceeds the mean ratio
MeanIR. Every occurrence of a minority label seeds one synthetic sample,
interpolated toward a random one of the seed's k nearest neighbors inside
that label's positive bag; the synthetic label row keeps the labels
carried by more than half of the seed-plus-neighbors group.
"""

from __future__ import annotations

import logging

import numpy as np

from apilabels import kernels
from apilabels.corpus.dataset import MultiLabelDataset
from apilabels.errors import UserError

logger = logging.getLogger(__name__)


def irlbl(labels: np.ndarray) -> np.ndarray:
    """Per-label imbalance ratio; labels without positives get NaN."""
    positives = labels.sum(axis=0).astype(np.float64)
    top = positives.max() if positives.size else 0.0
    out = np.full(labels.shape[1], np.nan)
    nz = positives > 0
    out[nz] = top / positives[nz]
    return out


def mean_ir(labels: np.ndarray) -> float:
    """Mean imbalance ratio over the labels that have positives."""
    ratios = irlbl(labels)
    present = ~np.isnan(ratios)
    if not present.any():
        return float("nan")
    return float(ratios[present].mean())


def mlsmote(train: MultiLabelDataset, k: int = 5, seed: int = 0) -> MultiLabelDataset:
    """Balanced copy of the training set; originals are never mutated."""
    n = train.n_rows
    if k >= n:
        raise UserError(f"mlsmote k={k} must be smaller than the {n} training rows")
    ratios = irlbl(train.labels)
    mean = mean_ir(train.labels)
    rng = np.random.default_rng(seed)

    new_features: list[np.ndarray] = []
    new_labels: list[np.ndarray] = []
    new_ids: list[str] = []
    for j, name in enumerate(train.label_names):
        if np.isnan(ratios[j]) or not ratios[j] > mean:
            continue
        bag = np.flatnonzero(train.labels[:, j] == 1)
        if bag.size < 2:
            logger.warning("minority label %s has %d positive sample(s), skipped", name, bag.size)
            continue
        k_eff = min(k, bag.size - 1)
        bag_feats = np.ascontiguousarray(train.features[bag])
        neighbors = kernels.knn_indices(
            bag_feats, bag_feats, k_eff, exclude=np.arange(bag.size, dtype=np.int64)
        )
        for local, row in enumerate(bag):
            pick = neighbors[local, rng.integers(0, k_eff)]
            u = rng.random()
            seed_feats = train.features[row]
            synth = seed_feats + u * (bag_feats[pick] - seed_feats)
            group = np.vstack([train.labels[row], train.labels[bag[neighbors[local]]]])
            votes = group.sum(axis=0)
            synth_labels = (votes * 2 > group.shape[0]).astype(np.uint8)
            new_features.append(synth)
            new_labels.append(synth_labels)
            new_ids.append(f"synthetic:{name}:{train.row_ids[row]}")

    if not new_features:
        return train
    return MultiLabelDataset(
        features=np.vstack([train.features, np.asarray(new_features)]),
        labels=np.vstack([train.labels, np.asarray(new_labels, dtype=np.uint8)]),
        label_names=list(train.label_names),
        row_ids=list(train.row_ids) + new_ids,
        synthetic=np.concatenate([train.synthetic, np.ones(len(new_ids), dtype=bool)]),
    )
