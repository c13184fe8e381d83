"""Newline-delimited JSON caches of mined records, one record per line,
so every later pipeline stage is replayable offline."""

from __future__ import annotations

import json
from pathlib import Path

from apilabels.errors import DecodeError
from apilabels.ingestion.models import (
    ChangeSet,
    Issue,
    IssueChangeLink,
    change_from_dict,
    issue_from_dict,
    record_to_dict,
)

ISSUES_FILE = "issues.ndjson"
CHANGES_FILE = "changes.ndjson"
LINKS_FILE = "links.ndjson"


def _write_ndjson(path: Path, records: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def _read_ndjson(path: Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise DecodeError(f"{path}:{lineno}: bad JSON: {exc}", line=lineno) from None
    return records


def save_snapshot(
    directory: str | Path,
    issues: list[Issue],
    changes: list[ChangeSet],
    links: list[IssueChangeLink] | None = None,
) -> None:
    directory = Path(directory)
    _write_ndjson(directory / ISSUES_FILE, [record_to_dict(i) for i in issues])
    _write_ndjson(directory / CHANGES_FILE, [record_to_dict(c) for c in changes])
    if links is not None:
        _write_ndjson(
            directory / LINKS_FILE,
            [
                {
                    "issue": list(link.issue.key),
                    "change": list(link.change.key),
                    "link_source": link.link_source,
                }
                for link in links
            ],
        )


def load_snapshot(
    directory: str | Path,
) -> tuple[list[Issue], list[ChangeSet], list[IssueChangeLink]]:
    directory = Path(directory)
    issues = [issue_from_dict(r) for r in _read_ndjson(directory / ISSUES_FILE)]
    changes = [change_from_dict(r) for r in _read_ndjson(directory / CHANGES_FILE)]
    links: list[IssueChangeLink] = []
    links_path = directory / LINKS_FILE
    if links_path.exists():
        issue_by_key = {issue.key: issue for issue in issues}
        change_by_key = {change.key: change for change in changes}
        for record in _read_ndjson(links_path):
            issue = issue_by_key[tuple(record["issue"])]
            change = change_by_key[tuple(record["change"])]
            links.append(
                IssueChangeLink(issue=issue, change=change, link_source=record["link_source"])
            )
    return issues, changes, links
