"""Word-vector store and similarity suggestions.

The store reads the common plain-text embedding format (one token per
line followed by its components); lookups are case-insensitive. Domain
vectors average the member words of the display name, so multi-word
categories compare against the mean of their word vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from apilabels.errors import StoreCorruptionError
from apilabels.taxonomy.domains import ALL_DOMAINS, DISPLAY_NAMES, ApiDomain


@dataclass
class WordVectorStore:
    dimension: int
    entries: dict[str, np.ndarray]

    @classmethod
    def load(cls, path: str | Path) -> "WordVectorStore":
        entries: dict[str, np.ndarray] = {}
        dimension = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                # word2vec-style "count dim" header
                if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                    continue
                token = parts[0].lower()
                try:
                    vec = np.asarray([float(p) for p in parts[1:]], dtype=np.float64)
                except ValueError as exc:
                    raise StoreCorruptionError(f"line {lineno}: non-numeric component: {exc}") from None
                if dimension is None:
                    dimension = len(vec)
                    if dimension == 0:
                        raise StoreCorruptionError(f"line {lineno}: token with no components")
                elif len(vec) != dimension:
                    raise StoreCorruptionError(
                        f"line {lineno}: dimension {len(vec)} != expected {dimension}"
                    )
                entries[token] = vec
        if dimension is None:
            raise StoreCorruptionError(f"no vectors found in {path}")
        return cls(dimension=dimension, entries=entries)

    def get(self, token: str) -> np.ndarray | None:
        return self.entries.get(token.lower())

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.entries


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(u @ v / (nu * nv))


def domain_vector(domain: ApiDomain, store: WordVectorStore) -> np.ndarray | None:
    """Mean of the display-name member-word vectors; None if all are missing."""
    vectors = [store.get(word) for word in DISPLAY_NAMES[domain].split()]
    vectors = [v for v in vectors if v is not None]
    if not vectors:
        return None
    return np.mean(vectors, axis=0)


@dataclass
class SuggestionResult:
    suggestions: list[tuple[ApiDomain, float]]  # sorted by score descending
    out_of_vocabulary: bool


def suggest_domains(token: str, store: WordVectorStore, k: int) -> SuggestionResult:
    """Top-k domains by cosine similarity between the token vector and each
    domain vector; ties keep enumeration order. Out-of-vocabulary tokens
    get no suggestions and a flag."""
    if not (1 <= k <= len(ALL_DOMAINS)):
        raise ValueError(f"k must be in 1..{len(ALL_DOMAINS)}, got {k}")
    vec = store.get(token)
    if vec is None:
        return SuggestionResult(suggestions=[], out_of_vocabulary=True)
    scored: list[tuple[ApiDomain, float]] = []
    for domain in ALL_DOMAINS:
        dv = domain_vector(domain, store)
        if dv is None:
            continue
        scored.append((domain, cosine(vec, dv)))
    ranked = sorted(
        scored, key=lambda pair: (-pair[1], ALL_DOMAINS.index(pair[0]))
    )
    return SuggestionResult(suggestions=ranked[:k], out_of_vocabulary=False)
