"""Uniform-random baseline: every label is predicted 1 with probability
0.5, independent of the features. Predictions are a pure function of the
stored seed and the input shape."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class DummyModel:
    n_labels: int
    seed: int
    strategy: str = "uniform"

    def to_dict(self) -> dict:
        return {"n_labels": self.n_labels, "seed": self.seed, "strategy": self.strategy}

    @classmethod
    def from_dict(cls, payload: dict) -> "DummyModel":
        return cls(**payload)


def train_dummy(Y: np.ndarray, strategy: str = "uniform", seed: int = 0) -> DummyModel:
    if strategy != "uniform":
        raise ValueError(f"unsupported dummy strategy: {strategy!r}")
    return DummyModel(n_labels=Y.shape[1], seed=seed, strategy=strategy)


def predict_dummy(model: DummyModel, X: np.ndarray) -> np.ndarray:
    rng = np.random.default_rng(model.seed)
    return (rng.random((X.shape[0], model.n_labels)) < 0.5).astype(np.uint8)
