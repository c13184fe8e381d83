"""Binary decision tree with entropy splits.

Candidate thresholds are midpoints between consecutive distinct feature
values; the split search itself runs in the selected kernel backend.
Recursion stops on max depth, node size below min_samples_split, purity,
or zero best gain. Leaf ties predict positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from apilabels import kernels


@dataclass
class TreeParams:
    max_depth: int = 50
    min_samples_split: int = 3
    min_samples_leaf: int = 1


@dataclass
class TreeNode:
    """Internal node (feature/threshold/children) or leaf (class counts)."""

    feature: int = -1
    threshold: float = 0.0
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    counts: tuple[int, int] | None = None  # (negatives, positives)

    @property
    def is_leaf(self) -> bool:
        return self.counts is not None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"counts": list(self.counts)}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TreeNode":
        if "counts" in payload:
            return cls(counts=tuple(payload["counts"]))
        return cls(
            feature=payload["feature"],
            threshold=payload["threshold"],
            left=cls.from_dict(payload["left"]),
            right=cls.from_dict(payload["right"]),
        )


def entropy(counts: tuple[float, float]) -> float:
    """Binary entropy in bits of a (negatives, positives) count pair."""
    neg, pos = counts
    if neg < 0 or pos < 0 or neg + pos <= 0:
        raise ValueError(f"entropy needs non-negative counts with a positive total, got {counts}")
    total = neg + pos
    h = 0.0
    for c in (neg, pos):
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def train_tree(
    X: np.ndarray,
    y: np.ndarray,
    params: TreeParams | None = None,
    feature_sampler=None,
    rng: np.random.Generator | None = None,
) -> TreeNode:
    """Greedy best-gain tree. feature_sampler(rng, n_features) returns the
    candidate feature indices per split (all features when None)."""
    params = params or TreeParams()
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.uint8)
    all_features = np.arange(X.shape[1], dtype=np.int64)

    def build(rows: np.ndarray, depth: int) -> TreeNode:
        pos = int(y[rows].sum())
        neg = rows.size - pos
        if (
            depth >= params.max_depth
            or rows.size < params.min_samples_split
            or pos == 0
            or neg == 0
        ):
            return TreeNode(counts=(neg, pos))
        if feature_sampler is None:
            candidates = all_features
        else:
            candidates = np.asarray(feature_sampler(rng, X.shape[1]), dtype=np.int64)
        feature, threshold, gain = kernels.best_split(
            X, y, rows, candidates, params.min_samples_leaf
        )
        if feature < 0 or gain <= 0.0:
            return TreeNode(counts=(neg, pos))
        mask = X[rows, feature] <= threshold
        left = build(rows[mask], depth + 1)
        right = build(rows[~mask], depth + 1)
        return TreeNode(feature=feature, threshold=threshold, left=left, right=right)

    return build(np.arange(X.shape[0], dtype=np.int64), 0)


def predict_tree(root: TreeNode, X: np.ndarray) -> np.ndarray:
    """Leaf-majority class per row; ties go positive."""
    X = np.asarray(X, dtype=np.float64)
    out = np.empty(X.shape[0], dtype=np.uint8)
    for i in range(X.shape[0]):
        node = root
        while not node.is_leaf:
            node = node.left if X[i, node.feature] <= node.threshold else node.right
        neg, pos = node.counts
        out[i] = 1 if pos >= neg else 0
    return out
