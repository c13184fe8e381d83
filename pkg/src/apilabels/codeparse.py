"""Imported-API extraction for Java, C#, and C++ sources.

A single-pass lexer blanks comments and string literals (preserving line
structure), then line-anchored patterns pull the import/using/include
targets from the blanked text. C++ include paths in quotes are recovered
from the original line, since the directive survives blanking exactly
when it was real code. Parsing is best-effort and never fails on
malformed code.
"""

from __future__ import annotations

import csv
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from apilabels.errors import UserError

logger = logging.getLogger(__name__)

LANGUAGES = ("java", "csharp", "cpp")

LANGUAGE_EXTENSIONS: dict[str, frozenset[str]] = {
    "java": frozenset({".java"}),
    "csharp": frozenset({".cs"}),
    "cpp": frozenset({".cpp", ".h", ".hpp", ".cc"}),
}


@dataclass(frozen=True)
class ApiReference:
    namespace: str
    source_file: str
    language: str


@dataclass(frozen=True)
class SnapshotIndex:
    """Files and namespaces present in one checkout of a project."""

    file_paths: frozenset[str]
    api_namespaces: frozenset[str]


@dataclass
class ScanResult:
    file_apis: dict[str, list[ApiReference]] = field(default_factory=dict)
    unreadable: list[str] = field(default_factory=list)

    def snapshot(self) -> SnapshotIndex:
        return SnapshotIndex(
            file_paths=frozenset(self.file_apis),
            api_namespaces=frozenset(
                ref.namespace for refs in self.file_apis.values() for ref in refs
            ),
        )


# ---------------------------------------------------------------------------
# Comment / string blanking
# ---------------------------------------------------------------------------

_CODE, _LINE_COMMENT, _BLOCK_COMMENT, _STRING, _CHAR, _VERBATIM = range(6)


def _blank_comments_and_strings(content: str) -> str:
    """Replace comment and string-literal bytes with spaces, keeping
    newlines so line anchoring still works. Handles //, /* */, "...",
    '...', and C# @"..." verbatim strings."""
    out = list(content)
    state = _CODE
    i = 0
    n = len(content)
    while i < n:
        ch = content[i]
        nxt = content[i + 1] if i + 1 < n else ""
        if state == _CODE:
            if ch == "/" and nxt == "/":
                state = _LINE_COMMENT
                out[i] = out[i + 1] = " "
                i += 2
                continue
            if ch == "/" and nxt == "*":
                state = _BLOCK_COMMENT
                out[i] = out[i + 1] = " "
                i += 2
                continue
            if ch == "@" and nxt == '"':
                state = _VERBATIM
                out[i] = out[i + 1] = " "
                i += 2
                continue
            if ch == '"':
                state = _STRING
                out[i] = " "
            elif ch == "'":
                state = _CHAR
                out[i] = " "
            i += 1
            continue
        if state == _LINE_COMMENT:
            if ch == "\n":
                state = _CODE
            else:
                out[i] = " "
            i += 1
            continue
        if state == _BLOCK_COMMENT:
            if ch == "*" and nxt == "/":
                out[i] = out[i + 1] = " "
                state = _CODE
                i += 2
                continue
            if ch != "\n":
                out[i] = " "
            i += 1
            continue
        if state == _VERBATIM:
            if ch == '"' and nxt == '"':
                out[i] = out[i + 1] = " "
                i += 2
                continue
            if ch == '"':
                out[i] = " "
                state = _CODE
            elif ch != "\n":
                out[i] = " "
            i += 1
            continue
        # _STRING or _CHAR
        quote = '"' if state == _STRING else "'"
        if ch == "\\" and nxt:
            out[i] = " "
            if nxt != "\n":
                out[i + 1] = " "
            i += 2
            continue
        if ch == quote or ch == "\n":  # unterminated literals stop at EOL
            state = _CODE
            if ch == quote:
                out[i] = " "
        elif ch != "\n":
            out[i] = " "
        i += 1
    return "".join(out)


# ---------------------------------------------------------------------------
# Per-language extraction
# ---------------------------------------------------------------------------

_JAVA_IMPORT = re.compile(
    r"^\s*import\s+(?:static\s+)?(?P<ns>[A-Za-z_$][\w$]*(?:\.[\w$*]+)*)\s*;",
    re.MULTILINE,
)

_CSHARP_USING = re.compile(
    r"^\s*using\s+(?:static\s+)?(?:(?P<alias>[A-Za-z_]\w*)\s*=\s*)?(?P<ns>[A-Za-z_][\w.]*)\s*;",
    re.MULTILINE,
)

_CPP_INCLUDE_BLANKED = re.compile(r"^\s*#\s*include\b")
_CPP_INCLUDE_ANGLE = re.compile(r"#\s*include\s*<([^>\n]+)>")
_CPP_INCLUDE_QUOTE = re.compile(r"#\s*include\s*\"([^\"\n]+)\"")


def _parse_java(blanked: str, original: str) -> list[str]:
    out = []
    for match in _JAVA_IMPORT.finditer(blanked):
        ns = match.group("ns")
        if ns.endswith(".*"):  # wildcard import records the package
            ns = ns[:-2]
        if "*" in ns:
            continue
        out.append(ns)
    return out


def _parse_csharp(blanked: str, original: str) -> list[str]:
    return [m.group("ns") for m in _CSHARP_USING.finditer(blanked)]


def _parse_cpp(blanked: str, original: str) -> list[str]:
    out = []
    for blanked_line, original_line in zip(blanked.splitlines(), original.splitlines()):
        if not _CPP_INCLUDE_BLANKED.match(blanked_line):
            continue
        angle = _CPP_INCLUDE_ANGLE.search(blanked_line)
        if angle:
            out.append(angle.group(1).strip())
            continue
        quoted = _CPP_INCLUDE_QUOTE.search(original_line)
        if quoted:
            out.append(quoted.group(1).strip())
    return out


_PARSERS = {"java": _parse_java, "csharp": _parse_csharp, "cpp": _parse_cpp}


def parse_imports(content: str, language: str) -> list[ApiReference]:
    """Extract imported namespaces from one source file's text."""
    return parse_file_imports(content, language, source_file="<memory>")


def parse_file_imports(content: str, language: str, source_file: str) -> list[ApiReference]:
    if language not in _PARSERS:
        raise UserError(f"unsupported language {language!r}, expected one of {LANGUAGES}")
    blanked = _blank_comments_and_strings(content)
    seen = set()
    refs = []
    for ns in _PARSERS[language](blanked, content):
        ns = ns.strip().strip(";\"<>").strip()
        if not ns or ns in seen:
            continue
        seen.add(ns)
        refs.append(ApiReference(namespace=ns, source_file=source_file, language=language))
    return refs


# ---------------------------------------------------------------------------
# Tree scanning and the snapshot filter
# ---------------------------------------------------------------------------


def detect_language(root: str | Path) -> str:
    """Most frequent supported language by file-extension count."""
    counts: Counter[str] = Counter()
    for path in Path(root).rglob("*"):
        if not path.is_file():
            continue
        for language, extensions in LANGUAGE_EXTENSIONS.items():
            if path.suffix.lower() in extensions:
                counts[language] += 1
    if not counts:
        raise UserError(f"no supported source files under {root}")
    return counts.most_common(1)[0][0]


def scan_tree(root: str | Path, language: str) -> ScanResult:
    """Parse every source file of the language under root; unreadable
    files are logged, skipped, and counted."""
    if language not in LANGUAGE_EXTENSIONS:
        raise UserError(f"unsupported language {language!r}, expected one of {LANGUAGES}")
    root = Path(root)
    result = ScanResult()
    paths = sorted(
        p for p in root.rglob("*")
        if p.is_file() and p.suffix.lower() in LANGUAGE_EXTENSIONS[language]
    )
    for path in paths:
        rel = path.relative_to(root).as_posix()
        try:
            content = path.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            logger.warning("skipping unreadable file %s: %s", path, exc)
            result.unreadable.append(rel)
            continue
        result.file_apis[rel] = parse_file_imports(content, language, source_file=rel)
    return result


def build_snapshot(root: str | Path, language: str) -> SnapshotIndex:
    return scan_tree(root, language).snapshot()


def snapshot_filter(links: list, changes_by_key: dict | None, index: SnapshotIndex) -> list:
    """Keep links whose change touches at least one path present in the
    snapshot; changes touching only since-deleted files are dropped."""
    kept = []
    for link in links:
        change = link.change if changes_by_key is None else changes_by_key[
            (link.change.project_id, link.change.number)
        ]
        if any(path in index.file_paths for path in change.changed_file_paths):
            kept.append(link)
    return kept


# ---------------------------------------------------------------------------
# API inventory CSV
# ---------------------------------------------------------------------------


def write_inventory_csv(path: str | Path, result: ScanResult, language: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["file", "namespace", "language"])
        for source_file in sorted(result.file_apis):
            for ref in result.file_apis[source_file]:
                writer.writerow([source_file, ref.namespace, language])


def read_inventory_csv(path: str | Path) -> dict[str, list[ApiReference]]:
    out: dict[str, list[ApiReference]] = {}
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            ref = ApiReference(
                namespace=row["namespace"], source_file=row["file"], language=row["language"]
            )
            out.setdefault(row["file"], []).append(ref)
    return out
