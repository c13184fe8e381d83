from __future__ import annotations

import shutil
from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20211101)


@pytest.fixture
def miniproj(tmp_path: Path) -> Path:
    """Fresh copy of the bundled fixture project."""
    target = tmp_path / "miniproj"
    shutil.copytree(FIXTURES / "miniproj", target)
    return target


def random_multilabel(
    rng: np.random.Generator,
    n_rows: int = 60,
    n_features: int = 8,
    n_labels: int = 5,
    rates: list[float] | None = None,
):
    """Random dataset with integer-valued features (exact float arithmetic
    keeps kernel backends bit-identical) and imbalanced labels."""
    from apilabels.corpus import MultiLabelDataset

    features = rng.integers(0, 30, size=(n_rows, n_features)).astype(np.float64)
    if rates is None:
        rates = list(rng.uniform(0.05, 0.8, size=n_labels))
    labels = np.zeros((n_rows, n_labels), dtype=np.uint8)
    for j, rate in enumerate(rates):
        labels[:, j] = rng.random(n_rows) < rate
    return MultiLabelDataset(
        features=features,
        labels=labels,
        label_names=[f"L{j}" for j in range(n_labels)],
        row_ids=[f"p:{i + 1}" for i in range(n_rows)],
    )
