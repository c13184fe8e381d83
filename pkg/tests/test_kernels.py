"""Backend parity and correctness of the compiled/numpy hot kernels.

Parity cases use integer-valued features so squared distances and split
gains are exact in float64 regardless of summation order.
"""

from __future__ import annotations

import numpy as np
import pytest

from apilabels import kernels

fast = pytest.importorskip("apilabels.kernels._fast", reason="compiled kernels not built")
pure = kernels.get_backend("pure")


def _naive_best_split(X, y, rows, features, min_leaf):
    """Brute force: evaluate every midpoint threshold directly."""
    from apilabels.learn.tree import entropy

    sub, lab = X[rows], y[rows]
    n = len(rows)
    parent = entropy((n - lab.sum(), lab.sum()))
    best = (-1, 0.0, 0.0)
    for f in features:
        values = np.unique(sub[:, f])
        for lo, hi in zip(values, values[1:]):
            threshold = (lo + hi) / 2
            mask = sub[:, f] <= threshold
            nl, nr = int(mask.sum()), int((~mask).sum())
            if nl < min_leaf or nr < min_leaf:
                continue
            hl = entropy((nl - lab[mask].sum(), lab[mask].sum()))
            hr = entropy((nr - lab[~mask].sum(), lab[~mask].sum()))
            gain = parent - (nl / n) * hl - (nr / n) * hr
            if gain > best[2] and gain > kernels.GAIN_EPS:
                best = (int(f), threshold, gain)
    return best


class TestBestSplit:
    @pytest.mark.parametrize("seed", range(5))
    def test_backends_agree(self, seed):
        rng = np.random.default_rng(seed)
        X = rng.integers(0, 12, size=(40, 6)).astype(np.float64)
        y = (X[:, 2] + X[:, 4] > 11).astype(np.uint8)
        rows = np.sort(rng.choice(40, size=25, replace=False)).astype(np.int64)
        feats = np.arange(6, dtype=np.int64)
        assert fast.best_split(X, y, rows, feats, 1) == pure.best_split(X, y, rows, feats, 1)

    @pytest.mark.parametrize("backend", [fast, pure])
    def test_matches_naive_search(self, backend, rng):
        X = rng.integers(0, 10, size=(30, 4)).astype(np.float64)
        y = (X[:, 1] > 4).astype(np.uint8)
        rows = np.arange(30, dtype=np.int64)
        feats = np.arange(4, dtype=np.int64)
        got = backend.best_split(X, y, rows, feats, 2)
        want = _naive_best_split(X, y, rows, feats, 2)
        assert got[0] == want[0]
        assert got[1] == pytest.approx(want[1])
        assert got[2] == pytest.approx(want[2], rel=1e-12)

    @pytest.mark.parametrize("backend", [fast, pure])
    def test_pure_node_returns_no_split(self, backend):
        X = np.arange(20, dtype=np.float64).reshape(10, 2)
        rows = np.arange(10, dtype=np.int64)
        feats = np.arange(2, dtype=np.int64)
        assert backend.best_split(X, np.ones(10, dtype=np.uint8), rows, feats, 1)[0] == -1
        assert backend.best_split(X, np.zeros(10, dtype=np.uint8), rows, feats, 1)[0] == -1

    @pytest.mark.parametrize("backend", [fast, pure])
    def test_constant_feature_returns_no_split(self, backend):
        X = np.ones((8, 1), dtype=np.float64)
        y = np.array([0, 1] * 4, dtype=np.uint8)
        rows = np.arange(8, dtype=np.int64)
        assert backend.best_split(X, y, rows, np.array([0], dtype=np.int64), 1)[0] == -1

    @pytest.mark.parametrize("backend", [fast, pure])
    def test_min_leaf_respected(self, backend):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([1, 0, 0, 0], dtype=np.uint8)
        rows = np.arange(4, dtype=np.int64)
        feature, threshold, gain = backend.best_split(X, y, rows, np.array([0], dtype=np.int64), 2)
        if feature >= 0:  # only the middle threshold leaves 2 on each side
            assert threshold == pytest.approx(1.5)


class TestKnn:
    @pytest.mark.parametrize("seed", range(5))
    def test_backends_agree(self, seed):
        rng = np.random.default_rng(seed)
        X = rng.integers(0, 50, size=(30, 4)).astype(np.float64)
        Q = rng.integers(0, 50, size=(12, 4)).astype(np.float64)
        assert np.array_equal(fast.knn_indices(X, Q, 4), pure.knn_indices(X, Q, 4))
        exclude = np.arange(30, dtype=np.int64)
        assert np.array_equal(
            fast.knn_indices(X, X, 4, exclude=exclude),
            pure.knn_indices(X, X, 4, exclude=exclude),
        )

    @pytest.mark.parametrize("backend", [fast, pure])
    def test_matches_naive_ordering(self, backend, rng):
        X = rng.normal(size=(25, 3))
        Q = rng.normal(size=(7, 3))
        got = backend.knn_indices(X, Q, 5)
        for i in range(7):
            d2 = ((X - Q[i]) ** 2).sum(axis=1)
            want = np.lexsort((np.arange(25), d2))[:5]
            assert np.array_equal(got[i], want)

    @pytest.mark.parametrize("backend", [fast, pure])
    def test_self_exclusion(self, backend):
        X = np.array([[0.0], [1.0], [2.0]])
        neighbors = backend.knn_indices(X, X, 1, exclude=np.arange(3, dtype=np.int64))
        assert neighbors.tolist() == [[1], [0], [1]]

    @pytest.mark.parametrize("backend", [fast, pure])
    def test_ties_prefer_lower_index(self, backend):
        X = np.array([[1.0], [1.0], [1.0]])
        Q = np.array([[1.0]])
        assert backend.knn_indices(X, Q, 2).tolist() == [[0, 1]]

    @pytest.mark.parametrize("backend", [fast, pure])
    def test_k_out_of_range(self, backend):
        X = np.zeros((3, 2))
        with pytest.raises(ValueError):
            backend.knn_indices(X, X, 3, exclude=np.arange(3, dtype=np.int64))


def test_selected_backend_is_exported():
    assert kernels.BACKEND in ("fast", "pure")
    assert callable(kernels.best_split) and callable(kernels.knn_indices)
