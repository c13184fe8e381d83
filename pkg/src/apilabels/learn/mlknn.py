"""Multi-label k-nearest-neighbor classifier (MLkNN).

Lazy learner: stores the training matrix, estimates per-label priors
P(H1) = (s + positives) / (2s + n) and, from each training point's k
nearest neighbors (self excluded), Laplace-smoothed posteriors
P(count=c | H) for c in 0..k. Prediction takes the MAP side per label,
ties going positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from apilabels import kernels
from apilabels.errors import UserError


@dataclass
class MlknnModel:
    features: np.ndarray
    labels: np.ndarray
    k: int
    s: float
    prior1: np.ndarray  # (L,)
    prior0: np.ndarray
    posterior1: np.ndarray  # (L, k+1)
    posterior0: np.ndarray

    def to_dict(self) -> dict:
        return {
            "features": self.features.tolist(),
            "labels": self.labels.tolist(),
            "k": self.k,
            "s": self.s,
            "prior1": self.prior1.tolist(),
            "prior0": self.prior0.tolist(),
            "posterior1": self.posterior1.tolist(),
            "posterior0": self.posterior0.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MlknnModel":
        return cls(
            features=np.asarray(payload["features"], dtype=np.float64),
            labels=np.asarray(payload["labels"], dtype=np.uint8),
            k=payload["k"],
            s=payload["s"],
            prior1=np.asarray(payload["prior1"]),
            prior0=np.asarray(payload["prior0"]),
            posterior1=np.asarray(payload["posterior1"]),
            posterior0=np.asarray(payload["posterior0"]),
        )


def _neighbor_label_counts(model_labels: np.ndarray, neighbor_idx: np.ndarray) -> np.ndarray:
    """(n_queries, L) counts of positive neighbors per label."""
    return model_labels[neighbor_idx].sum(axis=1)


def train_mlknn(X: np.ndarray, Y: np.ndarray, k: int = 10, s: float = 1.0) -> MlknnModel:
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.uint8)
    n, n_labels = Y.shape
    if k >= n:
        raise UserError(f"mlknn needs k < n, got k={k} with {n} rows")

    positives = Y.sum(axis=0).astype(np.float64)
    prior1 = (s + positives) / (2.0 * s + n)
    prior0 = 1.0 - prior1

    neighbors = kernels.knn_indices(X, X, k, exclude=np.arange(n, dtype=np.int64))
    deltas = _neighbor_label_counts(Y, neighbors)  # (n, L)

    c1 = np.zeros((n_labels, k + 1), dtype=np.float64)
    c0 = np.zeros((n_labels, k + 1), dtype=np.float64)
    for i in range(n):
        for l in range(n_labels):
            if Y[i, l]:
                c1[l, deltas[i, l]] += 1.0
            else:
                c0[l, deltas[i, l]] += 1.0
    posterior1 = (s + c1) / (s * (k + 1) + c1.sum(axis=1, keepdims=True))
    posterior0 = (s + c0) / (s * (k + 1) + c0.sum(axis=1, keepdims=True))
    return MlknnModel(
        features=X, labels=Y, k=k, s=s,
        prior1=prior1, prior0=prior0,
        posterior1=posterior1, posterior0=posterior0,
    )


def predict_mlknn(model: MlknnModel, X: np.ndarray) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    neighbors = kernels.knn_indices(model.features, X, model.k)
    deltas = _neighbor_label_counts(model.labels, neighbors)  # (nq, L)
    nq, n_labels = deltas.shape
    out = np.empty((nq, n_labels), dtype=np.uint8)
    for l in range(n_labels):
        p1 = model.prior1[l] * model.posterior1[l, deltas[:, l]]
        p0 = model.prior0[l] * model.posterior0[l, deltas[:, l]]
        out[:, l] = (p1 >= p0).astype(np.uint8)
    return out
