"""Numpy fallback implementations of the hot kernels.

Same contracts as the compiled versions in ``_fast.pyx``: identical
tie-breaking (first feature in candidate order, lowest split position,
lowest neighbor index) so both backends grow identical models on data
without floating-point near-ties.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"

# Splits whose information gain does not exceed this are treated as zero gain.
GAIN_EPS = 1e-12


def _entropy_bits(neg: np.ndarray, pos: np.ndarray) -> np.ndarray:
    """Binary entropy in bits for parallel arrays of class counts."""
    total = neg + pos
    out = np.zeros_like(total, dtype=np.float64)
    nz = total > 0
    for counts in (neg, pos):
        p = np.zeros_like(out)
        m = nz & (counts > 0)
        p[m] = counts[m] / total[m]
        term = np.zeros_like(out)
        term[m] = p[m] * np.log2(p[m])
        out -= term
    return out


def best_split(
    X: np.ndarray,
    y: np.ndarray,
    rows: np.ndarray,
    features: np.ndarray,
    min_leaf: int,
) -> tuple[int, float, float]:
    """Exhaustive entropy-gain split search over candidate features.

    Thresholds are midpoints between consecutive distinct values of a
    feature within the node. Returns (feature, threshold, gain), or
    (-1, 0.0, 0.0) when no split beats zero gain under the min_leaf
    constraint.
    """
    n = rows.shape[0]
    lab = y[rows].astype(np.float64)
    total_pos = float(lab.sum())
    total_neg = float(n) - total_pos
    parent = float(_entropy_bits(np.array([total_neg]), np.array([total_pos]))[0])

    best_feature = -1
    best_threshold = 0.0
    best_gain = 0.0
    if n < 2 * min_leaf or total_pos == 0.0 or total_pos == float(n):
        return best_feature, best_threshold, best_gain

    for f in features:
        col = X[rows, f]
        order = np.argsort(col, kind="stable")
        sv = col[order]
        sy = lab[order]
        cum_pos = np.cumsum(sy)

        left_n = np.arange(1, n, dtype=np.float64)
        boundary = sv[1:] > sv[:-1]
        valid = boundary & (left_n >= min_leaf) & ((n - left_n) >= min_leaf)
        if not valid.any():
            continue

        left_pos = cum_pos[:-1]
        left_neg = left_n - left_pos
        right_pos = total_pos - left_pos
        right_neg = (n - left_n) - right_pos
        child = (left_n / n) * _entropy_bits(left_neg, left_pos) + (
            (n - left_n) / n
        ) * _entropy_bits(right_neg, right_pos)
        gains = np.where(valid, parent - child, -np.inf)

        i = int(np.argmax(gains))
        gain = float(gains[i])
        if gain > best_gain and gain > GAIN_EPS:
            best_gain = gain
            best_feature = int(f)
            best_threshold = (float(sv[i]) + float(sv[i + 1])) / 2.0
    return best_feature, best_threshold, best_gain


def knn_indices(
    X: np.ndarray,
    Q: np.ndarray,
    k: int,
    exclude: np.ndarray | None = None,
) -> np.ndarray:
    """Indices of the k nearest rows of X for every row of Q.

    Euclidean distance; ties broken toward the lower index. ``exclude[i]``
    names one X row ignored for query i (-1 for none), which lets a
    training matrix query itself with self-matches removed.
    """
    nq = Q.shape[0]
    n = X.shape[0]
    if k < 1 or k > n - (0 if exclude is None else 1):
        raise ValueError(f"k={k} out of range for {n} reference rows")
    out = np.empty((nq, k), dtype=np.int64)
    for i in range(nq):
        d2 = ((X - Q[i]) ** 2).sum(axis=1)
        if exclude is not None and exclude[i] >= 0:
            d2[exclude[i]] = np.inf
        order = np.lexsort((np.arange(n), d2))
        out[i] = order[:k]
    return out
