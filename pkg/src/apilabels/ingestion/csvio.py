"""CSV import for tracker exports, with a key=column schema file.

Two schema kinds: "issues" (rows become Issues, an optional link column
references a change number) and "changes" (rows become ChangeSets with
their file lists). Rows that cannot be read are collected into a rejects
report instead of being dropped silently; rows with an empty link column
load their record but produce no link.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from apilabels.errors import DecodeError, SchemaError
from apilabels.ingestion.models import ChangeSet, Issue, IssueChangeLink

ISSUES_KIND = "issues"
CHANGES_KIND = "changes"

_REQUIRED = {
    ISSUES_KIND: ("id", "title"),
    CHANGES_KIND: ("id", "title"),
}


@dataclass
class CsvSchema:
    kind: str
    project: str
    columns: dict[str, str]  # field name -> csv column
    delimiter: str = ","
    link_source: str = "csv_key"

    @classmethod
    def load(cls, path: str | Path) -> "CsvSchema":
        options: dict[str, str] = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8-sig").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SchemaError(f"{path}:{lineno}: expected key = column, got {line!r}")
            key, _, value = line.partition("=")
            options[key.strip()] = value.strip()
        kind = options.pop("kind", ISSUES_KIND)
        if kind not in (_REQUIRED):
            raise SchemaError(f"{path}: unknown schema kind {kind!r}")
        project = options.pop("project", "")
        if not project:
            raise SchemaError(f"{path}: schema must name a project")
        delimiter = options.pop("delimiter", ",")
        link_source = options.pop("link_source", "csv_key")
        schema = cls(kind=kind, project=project, columns=options, delimiter=delimiter, link_source=link_source)
        for required in _REQUIRED[kind]:
            if required not in schema.columns:
                raise SchemaError(f"{path}: schema is missing the {required!r} column mapping")
        return schema


@dataclass
class CsvImport:
    issues: list[Issue] = field(default_factory=list)
    changes: list[ChangeSet] = field(default_factory=list)
    links: list[IssueChangeLink] = field(default_factory=list)
    rejects: list[dict] = field(default_factory=list)


def _parse_number(raw: str) -> int:
    """Accept plain integers or trailing-integer keys like PROJ-42 / R17."""
    raw = raw.strip()
    if raw.isdigit():
        return int(raw)
    digits = ""
    for ch in reversed(raw):
        if ch.isdigit():
            digits = ch + digits
        else:
            break
    if not digits:
        raise ValueError(f"no numeric id in {raw!r}")
    return int(digits)


def import_csv(path: str | Path, schema: CsvSchema) -> CsvImport:
    """Load one CSV per its schema; for issue schemas, rows referencing a
    change produce a link (with a stub ChangeSet if no change list was
    imported for the project)."""
    result = CsvImport()
    try:
        fh = open(path, newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise DecodeError(f"cannot open {path}: {exc}") from exc
    with fh:
        try:
            reader = csv.DictReader(fh, delimiter=schema.delimiter)
            header = reader.fieldnames
        except UnicodeDecodeError as exc:
            raise DecodeError(f"{path}: {exc}", line=1) from exc
        if header is None:
            raise SchemaError(f"{path}: empty file, no header row")
        for fieldname, column in schema.columns.items():
            if column not in header:
                raise SchemaError(f"{path}: mapped column {column!r} (for {fieldname!r}) not in header")
        stub_changes: dict[int, ChangeSet] = {}
        try:
            for lineno, row in enumerate(reader, start=2):
                try:
                    _import_row(row, schema, result, stub_changes)
                except (ValueError, KeyError) as exc:
                    result.rejects.append({"line": lineno, "kind": "malformed", "error": str(exc)})
        except UnicodeDecodeError as exc:
            raise DecodeError(f"{path}: {exc}", line=reader.line_num) from exc
        result.changes.extend(stub_changes[k] for k in sorted(stub_changes))
    return result


def _cell(row: dict, schema: CsvSchema, fieldname: str, default: str = "") -> str:
    column = schema.columns.get(fieldname)
    if column is None:
        return default
    return (row.get(column) or default).strip()


def _import_row(row: dict, schema: CsvSchema, result: CsvImport, stub_changes: dict) -> None:
    number = _parse_number(_cell(row, schema, "id"))
    title = _cell(row, schema, "title")
    body = _cell(row, schema, "body")
    if schema.kind == ISSUES_KIND:
        comments = tuple(c for c in (_cell(row, schema, "comments"),) if c)
        issue = Issue(
            project_id=schema.project, number=number, title=title, body=body,
            comments=comments, state="closed",
        )
        result.issues.append(issue)
        link_cell = _cell(row, schema, "link")
        if "link" in schema.columns and not link_cell:
            result.rejects.append({"line": None, "kind": "unlinked", "id": number})
            return
        if link_cell:
            change_number = _parse_number(link_cell)
            change = stub_changes.get(change_number)
            if change is None:
                change = ChangeSet(
                    project_id=schema.project, number=change_number,
                    title=f"revision {link_cell}", merged=True,
                )
                stub_changes[change_number] = change
            result.links.append(
                IssueChangeLink(issue=issue, change=change, link_source=schema.link_source)
            )
    else:
        files = tuple(p.strip() for p in _cell(row, schema, "files").split(";") if p.strip())
        messages = tuple(m for m in (_cell(row, schema, "message"),) if m)
        merged_cell = _cell(row, schema, "merged", "true").lower()
        result.changes.append(
            ChangeSet(
                project_id=schema.project, number=number, title=title, body=body,
                changed_file_paths=files, commit_messages=messages,
                merged=merged_cell in ("true", "1", "yes", "y"),
            )
        )


def merge_change_lists(
    imported: CsvImport, changes: list[ChangeSet]
) -> CsvImport:
    """Replace stub changes with full records (matching numbers) from a
    separately imported change list; links are re-pointed."""
    by_number = {c.number: c for c in changes}
    merged_changes = [by_number.get(c.number, c) for c in imported.changes]
    merged_links = [
        IssueChangeLink(
            issue=link.issue,
            change=by_number.get(link.change.number, link.change),
            link_source=link.link_source,
        )
        for link in imported.links
    ]
    return CsvImport(
        issues=imported.issues,
        changes=merged_changes,
        links=merged_links,
        rejects=imported.rejects,
    )


def export_csv(directory: str | Path, project: str, issues: list[Issue], changes: list[ChangeSet], links: list[IssueChangeLink]) -> None:
    """Write the canonical issue/change CSVs plus their schema files, so
    import_csv can round-trip a dataset."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    link_by_issue = {}
    for link in links:
        link_by_issue.setdefault(link.issue.number, link.change.number)
    with open(directory / "issues.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "summary", "description", "comments", "revision"])
        for issue in issues:
            writer.writerow([
                issue.number, issue.title, issue.body,
                "\n".join(issue.comments), link_by_issue.get(issue.number, ""),
            ])
    (directory / "issues.schema").write_text(
        f"kind = issues\nproject = {project}\nid = key\ntitle = summary\n"
        "body = description\ncomments = comments\nlink = revision\n",
        encoding="utf-8",
    )
    with open(directory / "changes.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["revision", "subject", "description", "files", "message", "merged"])
        for change in changes:
            writer.writerow([
                change.number, change.title, change.body,
                ";".join(change.changed_file_paths),
                "\n".join(change.commit_messages), str(change.merged).lower(),
            ])
    (directory / "changes.schema").write_text(
        f"kind = changes\nproject = {project}\nid = revision\ntitle = subject\n"
        "body = description\nfiles = files\nmessage = message\nmerged = merged\n",
        encoding="utf-8",
    )
