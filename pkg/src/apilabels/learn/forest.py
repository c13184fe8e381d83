"""Random forest over the entropy decision tree.

Each tree trains on a bootstrap resample (n draws with replacement) and
considers ceil(sqrt(d)) random features per split; prediction is the
majority vote of per-tree leaf-majority classes, ties voting positive.
Per-tree generators are spawned from the seed by tree index, so training
is deterministic regardless of how trees are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from apilabels.learn.tree import TreeNode, TreeParams, predict_tree, train_tree


@dataclass
class ForestParams:
    n_estimators: int = 50
    max_depth: int = 50
    min_samples_split: int = 3
    min_samples_leaf: int = 1
    bootstrap: bool = True  # test hook: off makes a 1-tree forest equal a lone tree
    max_features: str | None = "sqrt"  # "sqrt" or None for all features


@dataclass
class ForestModel:
    trees: list[TreeNode]
    params: ForestParams
    seed: int

    def to_dict(self) -> dict:
        return {
            "trees": [t.to_dict() for t in self.trees],
            "params": vars(self.params).copy(),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ForestModel":
        return cls(
            trees=[TreeNode.from_dict(t) for t in payload["trees"]],
            params=ForestParams(**payload["params"]),
            seed=payload["seed"],
        )


def _sqrt_sampler(rng: np.random.Generator, n_features: int) -> np.ndarray:
    m = min(n_features, math.isqrt(n_features - 1) + 1)  # ceil(sqrt(d))
    return np.sort(rng.choice(n_features, size=m, replace=False))


def _tree_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, index)))


def train_forest(
    X: np.ndarray,
    y: np.ndarray,
    params: ForestParams | None = None,
    seed: int = 0,
    n_jobs: int = 1,
) -> ForestModel:
    params = params or ForestParams()
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.uint8)
    tree_params = TreeParams(
        max_depth=params.max_depth,
        min_samples_split=params.min_samples_split,
        min_samples_leaf=params.min_samples_leaf,
    )
    sampler = _sqrt_sampler if params.max_features == "sqrt" else None

    def fit_one(index: int) -> TreeNode:
        rng = _tree_rng(seed, index)
        if params.bootstrap:
            rows = rng.integers(0, X.shape[0], size=X.shape[0])
            Xb, yb = X[rows], y[rows]
        else:
            Xb, yb = X, y
        return train_tree(Xb, yb, tree_params, feature_sampler=sampler, rng=rng)

    indices = range(params.n_estimators)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trees = list(pool.map(fit_one, indices))
    else:
        trees = [fit_one(i) for i in indices]
    return ForestModel(trees=trees, params=params, seed=seed)


def predict_forest(model: ForestModel, X: np.ndarray) -> np.ndarray:
    votes = np.zeros(X.shape[0], dtype=np.int64)
    for tree in model.trees:
        votes += predict_tree(tree, X)
    return (2 * votes >= len(model.trees)).astype(np.uint8)
