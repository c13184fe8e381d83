"""TF-IDF vectorizer over whitespace tokens with word n-grams.

tf is the raw n-gram count in the document; idf = ln((1+n)/(1+df)) + 1,
so a term present in every document gets idf exactly 1; rows are
L2-normalized after weighting. The vocabulary is frozen at fit time and
unseen n-grams contribute nothing at transform time.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from apilabels.errors import ConfigError, DataError


def ngrams(tokens: list[str], lo: int, hi: int) -> list[str]:
    """Word n-grams joined by single spaces, for n in [lo, hi]."""
    out = []
    for n in range(lo, hi + 1):
        for i in range(len(tokens) - n + 1):
            out.append(" ".join(tokens[i : i + n]))
    return out


@dataclass
class TfidfModel:
    """Fitted vocabulary with idf weights; use fit_tfidf to build one."""

    vocabulary: dict[str, int]
    idf: np.ndarray
    ngram_range: tuple[int, int]
    fitted_on: int
    fitted_projects: tuple[str, ...] = field(default_factory=tuple)

    def transform(self, docs: list[str]) -> np.ndarray:
        """Dense (len(docs), |vocabulary|) matrix of L2-normalized tf-idf."""
        rows = np.zeros((len(docs), len(self.vocabulary)), dtype=np.float64)
        lo, hi = self.ngram_range
        for i, doc in enumerate(docs):
            for gram in ngrams(doc.split(), lo, hi):
                j = self.vocabulary.get(gram)
                if j is not None:
                    rows[i, j] += 1.0
        rows *= self.idf[None, :]
        norms = np.linalg.norm(rows, axis=1)
        nz = norms > 0
        rows[nz] /= norms[nz, None]
        return rows

    def to_dict(self) -> dict:
        terms = sorted(self.vocabulary, key=self.vocabulary.get)
        return {
            "terms": terms,
            "idf": self.idf.tolist(),
            "ngram_range": list(self.ngram_range),
            "fitted_on": self.fitted_on,
            "fitted_projects": list(self.fitted_projects),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TfidfModel":
        terms = payload["terms"]
        return cls(
            vocabulary={t: i for i, t in enumerate(terms)},
            idf=np.asarray(payload["idf"], dtype=np.float64),
            ngram_range=tuple(payload["ngram_range"]),
            fitted_on=payload["fitted_on"],
            fitted_projects=tuple(payload.get("fitted_projects", ())),
        )

    def config_hash(self) -> str:
        raw = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(raw).hexdigest()[:16]


def fit_tfidf(
    docs: list[str],
    ngram_range: tuple[int, int] = (1, 1),
    projects: tuple[str, ...] = (),
) -> TfidfModel:
    """Build the vocabulary (sorted for determinism) and idf vector."""
    lo, hi = ngram_range
    if not (1 <= lo <= hi <= 4):
        raise ConfigError(f"ngram_range must satisfy 1 <= lo <= hi <= 4, got {ngram_range}")
    if not docs:
        raise DataError("fit_tfidf needs at least one document")
    df: dict[str, int] = {}
    for doc in docs:
        for gram in set(ngrams(doc.split(), lo, hi)):
            df[gram] = df.get(gram, 0) + 1
    terms = sorted(df)
    n = len(docs)
    idf = np.array([np.log((1.0 + n) / (1.0 + df[t])) + 1.0 for t in terms], dtype=np.float64)
    return TfidfModel(
        vocabulary={t: i for i, t in enumerate(terms)},
        idf=idf,
        ngram_range=(lo, hi),
        fitted_on=n,
        fitted_projects=tuple(projects),
    )


def transform(model: TfidfModel | None, docs: list[str]) -> np.ndarray:
    if model is None:
        raise RuntimeError("transform called before fit")
    return model.transform(docs)
