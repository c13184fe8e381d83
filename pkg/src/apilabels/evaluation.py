"""Multi-label evaluation: confusion accounting, averaged metrics,
rank statistics for comparing runs, and label co-occurrence counts.

Averaging conventions: micro sums TP/FP/FN over labels before applying the
precision/recall/F formulas; macro computes the per-label metric first
(0 on an empty denominator, flagged as degenerate) and then takes the
arithmetic mean. F is 2TP / (2TP + FP + FN) in both cases.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from apilabels.errors import DataError

# Effect-size magnitude thresholds on |d| (Romano et al. 2006).
CLIFFS_THRESHOLDS = ((0.147, "negligible"), (0.33, "small"), (0.474, "medium"))

# Sample sizes up to which the exact Mann-Whitney distribution is used
# under method="auto" (ties always force the normal approximation).
EXACT_MWU_MAX_N = 8

P_VALUE_LIMIT = 0.05


@dataclass
class ConfusionCounts:
    """Per-label confusion counts, one row per label."""

    labels: list[str]
    tp: np.ndarray
    fp: np.ndarray
    fn: np.ndarray
    tn: np.ndarray

    @property
    def n_rows(self) -> int:
        return int(self.tp[0] + self.fp[0] + self.fn[0] + self.tn[0]) if len(self.labels) else 0

    @classmethod
    def single(cls, label: str, tn: int, fp: int, fn: int, tp: int) -> "ConfusionCounts":
        """One-label counts, in the TN/FP/FN/TP order used by published tables."""
        return cls(
            labels=[label],
            tp=np.array([tp]),
            fp=np.array([fp]),
            fn=np.array([fn]),
            tn=np.array([tn]),
        )


def confusion(y_true: np.ndarray, y_pred: np.ndarray, labels: Sequence[str] | None = None) -> ConfusionCounts:
    """Count per-label TP/FP/FN/TN for binary matrices of identical shape."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise DataError(f"shape mismatch: truth {y_true.shape} vs prediction {y_pred.shape}")
    if y_true.ndim == 1:
        y_true = y_true[:, None]
        y_pred = y_pred[:, None]
    t = y_true.astype(bool)
    p = y_pred.astype(bool)
    names = list(labels) if labels is not None else [f"label_{j}" for j in range(t.shape[1])]
    if len(names) != t.shape[1]:
        raise DataError(f"{len(names)} label names for {t.shape[1]} columns")
    return ConfusionCounts(
        labels=names,
        tp=(t & p).sum(axis=0),
        fp=(~t & p).sum(axis=0),
        fn=(t & ~p).sum(axis=0),
        tn=(~t & ~p).sum(axis=0),
    )


def _prf(tp: float, fp: float, fn: float) -> tuple[float, float, float, list[str]]:
    degenerate = []
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision = 0.0
        degenerate.append("precision")
    if tp + fn > 0:
        recall = tp / (tp + fn)
    else:
        recall = 0.0
        degenerate.append("recall")
    if 2 * tp + fp + fn > 0:
        f = 2 * tp / (2 * tp + fp + fn)
    else:
        f = 0.0
        degenerate.append("f")
    return precision, recall, f, degenerate


def micro_metrics(counts: ConfusionCounts) -> dict:
    """Global precision/recall/F from summed counts."""
    tp, fp, fn = float(counts.tp.sum()), float(counts.fp.sum()), float(counts.fn.sum())
    precision, recall, f, degenerate = _prf(tp, fp, fn)
    return {"precision": precision, "recall": recall, "f": f, "degenerate": degenerate}


def macro_metrics(counts: ConfusionCounts) -> dict:
    """Arithmetic mean of per-label precision/recall/F (0 on empty denominators)."""
    if not counts.labels:
        raise DataError("macro metrics need at least one label")
    per = [per_label_metrics(counts, j) for j in range(len(counts.labels))]
    degenerate = sorted({flag for m in per for flag in m["degenerate"]})
    return {
        "precision": float(np.mean([m["precision"] for m in per])),
        "recall": float(np.mean([m["recall"] for m in per])),
        "f": float(np.mean([m["f"] for m in per])),
        "degenerate": degenerate,
    }


def per_label_metrics(counts: ConfusionCounts, j: int) -> dict:
    precision, recall, f, degenerate = _prf(
        float(counts.tp[j]), float(counts.fp[j]), float(counts.fn[j])
    )
    return {
        "label": counts.labels[j],
        "tn": int(counts.tn[j]),
        "fp": int(counts.fp[j]),
        "fn": int(counts.fn[j]),
        "tp": int(counts.tp[j]),
        "precision": precision,
        "recall": recall,
        "f": f,
        "degenerate": degenerate,
    }


def hamming_loss(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """Fraction of label cells where prediction and truth disagree."""
    y_true = np.asarray(y_true).astype(bool)
    y_pred = np.asarray(y_pred).astype(bool)
    if y_true.shape != y_pred.shape:
        raise DataError(f"shape mismatch: truth {y_true.shape} vs prediction {y_pred.shape}")
    return float((y_true != y_pred).mean())


# ---------------------------------------------------------------------------
# Rank statistics
# ---------------------------------------------------------------------------


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    sv = values[order]
    while i < len(sv):
        j = i
        while j + 1 < len(sv) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _mwu_exact_counts(n: int, m: int) -> np.ndarray:
    """Distribution of U over all C(n+m, n) rank assignments: counts[u].

    DP over pooled ranks in ascending order: assigning rank t to the first
    sample adds the number of second-sample values already placed (t - j)
    to U.
    """
    width = n * m + 1
    dp = np.zeros((n + 1, width), dtype=np.float64)
    dp[0, 0] = 1.0
    for t in range(1, n + m + 1):
        new = np.zeros_like(dp)
        for j in range(0, min(n, t) + 1):
            if t - j <= m:  # rank t goes to the second sample
                new[j] += dp[j]
            if j >= 1:  # rank t goes to the first sample, beating t - j others
                shift = t - j
                if shift < width:
                    new[j, shift:] += dp[j - 1, : width - shift]
        dp = new
    return dp[n]


def mann_whitney_u(a: Sequence[float], b: Sequence[float], method: str = "auto") -> tuple[float, float]:
    """Two-sided Mann-Whitney U test; returns (U of the first sample, p).

    method="auto" uses the exact null distribution for tie-free samples
    with both sizes <= EXACT_MWU_MAX_N, where the normal approximation is
    too coarse, and the midrank/tie-corrected normal approximation with
    continuity correction everywhere else. "exact" and "asymptotic" force
    one path.
    """
    a = np.asarray(list(a), dtype=np.float64)
    b = np.asarray(list(b), dtype=np.float64)
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        raise DataError("mann_whitney_u needs non-empty samples")
    pooled = np.concatenate([a, b])
    ranks = _midranks(pooled)
    r1 = float(ranks[:n].sum())
    u1 = r1 - n * (n + 1) / 2.0

    has_ties = len(np.unique(pooled)) < n + m
    if method == "auto":
        method = "exact" if (not has_ties and n <= EXACT_MWU_MAX_N and m <= EXACT_MWU_MAX_N) else "asymptotic"
    if method == "exact":
        if has_ties:
            raise DataError("exact Mann-Whitney p-value is undefined with ties")
        dist = _mwu_exact_counts(n, m)
        total = dist.sum()
        u_int = int(round(u1))
        p_low = dist[: u_int + 1].sum() / total
        p_high = dist[u_int:].sum() / total
        p = min(1.0, 2.0 * min(p_low, p_high))
        return u1, float(p)
    if method != "asymptotic":
        raise ValueError(f"unknown method {method!r}")

    mu = n * m / 2.0
    nm = n + m
    # tie correction on the variance
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = float(((tie_counts**3) - tie_counts).sum())
    var = n * m / 12.0 * ((nm + 1) - tie_term / (nm * (nm - 1)))
    if var <= 0:
        return u1, 1.0
    z = (abs(u1 - mu) - 0.5) / math.sqrt(var)
    z = max(z, 0.0)
    p = 2.0 * (1.0 - 0.5 * (1.0 + math.erf(z / math.sqrt(2.0))))
    return u1, float(min(1.0, p))


def mwu_exact_enumeration(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Brute-force oracle: enumerate every rank assignment. Tiny samples only."""
    a = list(a)
    b = list(b)
    n, m = len(a), len(b)
    pooled = np.asarray(a + b, dtype=np.float64)
    ranks = _midranks(pooled)
    u_obs = float(ranks[:n].sum()) - n * (n + 1) / 2.0
    us = []
    for combo in combinations(range(n + m), n):
        r = sum(ranks[i] for i in combo)
        us.append(r - n * (n + 1) / 2.0)
    us = np.asarray(us)
    p_low = float((us <= u_obs + 1e-9).mean())
    p_high = float((us >= u_obs - 1e-9).mean())
    return u_obs, min(1.0, 2.0 * min(p_low, p_high))


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> tuple[float, str]:
    """Cliff's delta effect size with its Romano magnitude bucket.

    d = (#pairs a>b - #pairs a<b) / (|a||b|), computed over all pairs.
    """
    a = np.asarray(list(a), dtype=np.float64)
    b = np.asarray(list(b), dtype=np.float64)
    if len(a) == 0 or len(b) == 0:
        raise DataError("cliffs_delta needs non-empty samples")
    diff = a[:, None] - b[None, :]
    d = float(((diff > 0).sum() - (diff < 0).sum()) / (len(a) * len(b)))
    return d, cliffs_magnitude(d)


def cliffs_magnitude(d: float) -> str:
    for threshold, name in CLIFFS_THRESHOLDS:
        if abs(d) < threshold:
            return name
    return "large"


@dataclass
class ComparisonResult:
    metric: str
    u_statistic: float
    p_value: float
    cliff_delta: float
    magnitude: str
    significant: bool

    @classmethod
    def compare(cls, metric: str, a: Sequence[float], b: Sequence[float]) -> "ComparisonResult":
        u, p = mann_whitney_u(a, b)
        d, magnitude = cliffs_delta(a, b)
        return cls(metric, u, p, d, magnitude, p < P_VALUE_LIMIT)


# ---------------------------------------------------------------------------
# Co-occurrence
# ---------------------------------------------------------------------------


def cooccurrence(labels: np.ndarray) -> np.ndarray:
    """Symmetric count matrix: cell (i, j) = rows where both labels are set."""
    m = np.asarray(labels)
    if m.ndim != 2 or m.shape[0] < 1:
        raise DataError("co-occurrence needs a non-empty binary matrix")
    b = m.astype(np.int64)
    return b.T @ b


def write_cooccurrence_csv(path, matrix: np.ndarray, names: Sequence[str]) -> None:
    """Export for external plotting; the artifact does not render figures."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", *names])
        for name, row in zip(names, matrix):
            writer.writerow([name, *(int(v) for v in row)])


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

REPORT_SCHEMA_VERSION = 1


@dataclass
class EvalReport:
    """Metrics for one (model, dataset, split) evaluation."""

    hamming_loss: float
    micro: dict
    macro: dict
    per_label: list[dict]
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_predictions(
        cls,
        y_true: np.ndarray,
        y_pred: np.ndarray,
        labels: Sequence[str],
        metadata: dict | None = None,
    ) -> "EvalReport":
        counts = confusion(y_true, y_pred, labels)
        return cls(
            hamming_loss=hamming_loss(y_true, y_pred),
            micro=micro_metrics(counts),
            macro=macro_metrics(counts),
            per_label=[per_label_metrics(counts, j) for j in range(len(counts.labels))],
            metadata=dict(metadata or {}),
        )

    def to_json(self) -> str:
        payload = {
            "schema_version": REPORT_SCHEMA_VERSION,
            "metadata": self.metadata,
            "hamming_loss": self.hamming_loss,
            "micro": self.micro,
            "macro": self.macro,
            "per_label": self.per_label,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        payload = json.loads(text)
        version = payload.get("schema_version")
        if version != REPORT_SCHEMA_VERSION:
            raise DataError(f"unsupported report schema version: {version!r}")
        return cls(
            hamming_loss=payload["hamming_loss"],
            micro=payload["micro"],
            macro=payload["macro"],
            per_label=payload["per_label"],
            metadata=payload.get("metadata", {}),
        )

    def to_text(self) -> str:
        """Aligned-column rendering; per-label rows keep the TN/FP/FN/TP order."""
        lines = []
        meta = " ".join(f"{k}={v}" for k, v in sorted(self.metadata.items()))
        if meta:
            lines.append(meta)
        lines.append(
            f"hamming_loss={self.hamming_loss:.4f}  "
            f"micro P={self.micro['precision']:.4f} R={self.micro['recall']:.4f} F={self.micro['f']:.4f}  "
            f"macro P={self.macro['precision']:.4f} R={self.macro['recall']:.4f} F={self.macro['f']:.4f}"
        )
        width = max((len(row["label"]) for row in self.per_label), default=5)
        lines.append(f"{'label':<{width}}  {'TN':>6} {'FP':>6} {'FN':>6} {'TP':>6}  {'P':>6} {'R':>6} {'F':>6}")
        for row in self.per_label:
            lines.append(
                f"{row['label']:<{width}}  {row['tn']:>6} {row['fp']:>6} {row['fn']:>6} {row['tp']:>6}  "
                f"{row['precision']:>6.2f} {row['recall']:>6.2f} {row['f']:>6.2f}"
            )
        return "\n".join(lines) + "\n"


def summarize_reports(reports: Sequence[EvalReport]) -> dict:
    """Mean and spread (standard deviation) of each headline metric."""
    if not reports:
        raise DataError("no reports to summarize")
    out: dict = {"n_reports": len(reports)}
    for key in ("precision", "recall", "f"):
        values = [r.micro[key] for r in reports]
        out[f"micro_{key}_mean"] = float(np.mean(values))
        out[f"micro_{key}_std"] = float(np.std(values))
    hl = [r.hamming_loss for r in reports]
    out["hamming_loss_mean"] = float(np.mean(hl))
    out["hamming_loss_std"] = float(np.std(hl))
    return out
