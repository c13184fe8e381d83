"""Repeated random train/test partitions (shuffle-split style)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from apilabels.errors import DataError, DatasetTooSmallError

MIN_ROWS = 10


@dataclass
class SplitPlan:
    n_splits: int
    test_fraction: float
    seed: int
    splits: list[tuple[np.ndarray, np.ndarray]]


def shuffle_split(n_rows: int, test_fraction: float, n_splits: int = 10, seed: int = 0) -> SplitPlan:
    """n_splits independent uniform partitions at the requested fraction.

    The test size is the rounded fraction of the row count (half rounds
    up), so 1648 rows at 0.2/0.3/0.4 give test sets of 330/494/659.
    """
    if not (0.0 < test_fraction < 1.0):
        raise DataError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if n_rows < MIN_ROWS:
        raise DatasetTooSmallError(f"{n_rows} rows is below the minimum of {MIN_ROWS}")
    n_test = int(math.floor(n_rows * test_fraction + 0.5))
    n_test = min(max(n_test, 1), n_rows - 1)
    rng = np.random.default_rng(seed)
    splits = []
    for _ in range(n_splits):
        perm = rng.permutation(n_rows)
        test = np.sort(perm[:n_test])
        train = np.sort(perm[n_test:])
        splits.append((train, test))
    return SplitPlan(n_splits=n_splits, test_fraction=test_fraction, seed=seed, splits=splits)
