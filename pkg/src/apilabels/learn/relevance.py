"""Binary relevance: one independent base model per label column.

Per-label seeds are derived from (seed, column index), so adding or
permuting label columns never changes another column's model.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from apilabels.errors import DataError
from apilabels.learn.dummy import DummyModel, predict_dummy, train_dummy
from apilabels.learn.forest import ForestModel, ForestParams, predict_forest, train_forest
from apilabels.learn.logreg import LogregModel, LogregParams, predict_logreg, train_logreg
from apilabels.learn.mlknn import MlknnModel, predict_mlknn, train_mlknn
from apilabels.learn.tree import TreeNode, TreeParams, predict_tree, train_tree

BASE_KINDS = ("tree", "forest", "logreg", "mlknn", "dummy")

MODEL_SCHEMA_VERSION = 1


def _label_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence((seed, index)).generate_state(1)[0])


@dataclass
class BinaryRelevanceModel:
    label_names: list[str]
    base_kind: str
    models: list[Any]
    params: dict
    seed: int

    def to_dict(self) -> dict:
        return {
            "label_names": self.label_names,
            "base_kind": self.base_kind,
            "models": [m.to_dict() for m in self.models],
            "params": self.params,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "BinaryRelevanceModel":
        kind = payload["base_kind"]
        loader = {
            "tree": TreeNode.from_dict,
            "forest": ForestModel.from_dict,
            "logreg": LogregModel.from_dict,
            "mlknn": MlknnModel.from_dict,
            "dummy": DummyModel.from_dict,
        }[kind]
        return cls(
            label_names=payload["label_names"],
            base_kind=kind,
            models=[loader(m) for m in payload["models"]],
            params=payload["params"],
            seed=payload["seed"],
        )


def _train_one(kind: str, X: np.ndarray, y: np.ndarray, params: dict, seed: int):
    if kind == "tree":
        return train_tree(X, y, TreeParams(**params))
    if kind == "forest":
        return train_forest(X, y, ForestParams(**params), seed=seed)
    if kind == "logreg":
        return train_logreg(X, y, LogregParams(**params))
    if kind == "mlknn":
        return train_mlknn(X, y[:, None], **params)
    if kind == "dummy":
        return train_dummy(y[:, None], seed=seed, **params)
    raise ValueError(f"unknown base kind {kind!r}, expected one of {BASE_KINDS}")


def _predict_one(kind: str, model, X: np.ndarray) -> np.ndarray:
    if kind == "tree":
        return predict_tree(model, X)
    if kind == "forest":
        return predict_forest(model, X)
    if kind == "logreg":
        return predict_logreg(model, X)
    if kind == "mlknn":
        return predict_mlknn(model, X)[:, 0]
    if kind == "dummy":
        return predict_dummy(model, X)[:, 0]
    raise ValueError(f"unknown base kind {kind!r}")


def binary_relevance_train(
    X: np.ndarray,
    Y: np.ndarray,
    label_names: list[str],
    base_kind: str,
    params: dict | None = None,
    seed: int = 0,
    n_jobs: int = 1,
) -> BinaryRelevanceModel:
    params = dict(params or {})
    Y = np.asarray(Y, dtype=np.uint8)
    constant_negative = [label_names[j] for j in range(Y.shape[1]) if Y[:, j].sum() == 0]
    if constant_negative:
        raise DataError(
            f"labels with no positives reached training (filter first): {constant_negative}"
        )

    def fit(j: int):
        return _train_one(base_kind, X, Y[:, j], params, _label_seed(seed, j))

    indices = range(Y.shape[1])
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            models = list(pool.map(fit, indices))
    else:
        models = [fit(j) for j in indices]
    return BinaryRelevanceModel(
        label_names=list(label_names), base_kind=base_kind, models=models,
        params=params, seed=seed,
    )


def binary_relevance_predict(model: BinaryRelevanceModel, X: np.ndarray) -> np.ndarray:
    out = np.empty((X.shape[0], len(model.models)), dtype=np.uint8)
    for j, base in enumerate(model.models):
        out[:, j] = _predict_one(model.base_kind, base, X)
    return out


# ---------------------------------------------------------------------------
# Versioned model files
# ---------------------------------------------------------------------------


def params_hash(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def save_model(path: str | Path, model: BinaryRelevanceModel, extra: dict | None = None) -> None:
    """Versioned JSON with an embedded params hash for report traceability."""
    body = {"model": model.to_dict()}
    body.update(extra or {})
    envelope = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "params_hash": params_hash({"params": model.params, "base_kind": model.base_kind, "seed": model.seed}),
        **body,
    }
    Path(path).write_text(json.dumps(envelope, sort_keys=True))


def load_model(path: str | Path) -> tuple[BinaryRelevanceModel, dict]:
    envelope = json.loads(Path(path).read_text())
    version = envelope.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        raise DataError(f"unsupported model schema version: {version!r}")
    model = BinaryRelevanceModel.from_dict(envelope["model"])
    extra = {k: v for k, v in envelope.items() if k not in ("model", "schema_version")}
    return model, extra
