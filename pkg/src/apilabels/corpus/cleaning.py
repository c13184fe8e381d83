"""Issue-text cleaning: lowercasing, URL/code/digit/punctuation removal,
stopword filtering, and stemming. The full pipeline is idempotent, which
is enforced by stemming to a fixpoint and filtering stopwords after
stemming as well as before (a stem can land on a stopword, e.g.
"doing" -> "do").
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from apilabels.corpus.stemming import stem

_URL_RE = re.compile(r"(?:\w+://\S+|www\.\S+)")
_FENCED_CODE_RE = re.compile(r"```.*?```", re.DOTALL)
_INLINE_CODE_RE = re.compile(r"`[^`]*`")
_DIGIT_RE = re.compile(r"\d+")
_PUNCT_RE = re.compile(r"[^\w\s]|_")

SUPPORTED_LANGUAGES = ("en", "pt")


@lru_cache(maxsize=None)
def stopwords(language: str) -> frozenset[str]:
    """Stopword set for a language, loaded from the packaged data files."""
    if language not in SUPPORTED_LANGUAGES:
        raise ValueError(f"unsupported corpus language: {language!r}")
    text = resources.files("apilabels.corpus").joinpath(f"data/stopwords_{language}.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def clean_text(raw: str, language: str = "en") -> str:
    """Normalize raw issue text into space-joined stems."""
    sw = stopwords(language)
    text = raw.lower()
    text = _FENCED_CODE_RE.sub(" ", text)
    text = _INLINE_CODE_RE.sub(" ", text)
    text = _URL_RE.sub(" ", text)
    text = _DIGIT_RE.sub(" ", text)
    text = _PUNCT_RE.sub(" ", text)
    tokens = [t for t in text.split() if t not in sw]
    stems = [stem(t, language) for t in tokens]
    return " ".join(s for s in stems if s and s not in sw)


def remove_templates(text: str, templates: list[str]) -> str:
    """Delete lines that exactly match a template line (trimmed,
    case-insensitive). Multi-line templates match line by line."""
    template_lines = set()
    for template in templates:
        for line in template.splitlines() or [template]:
            line = line.strip().lower()
            if line:
                template_lines.add(line)
    if not template_lines:
        return text
    kept = [line for line in text.splitlines() if line.strip().lower() not in template_lines]
    return "\n".join(kept)
