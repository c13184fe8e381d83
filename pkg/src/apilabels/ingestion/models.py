"""Mined tracker records. Frozen value objects, safe to share across
threads; list-like fields are tuples so records stay hashable."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class Issue:
    project_id: str
    number: int
    title: str
    body: str = ""
    comments: tuple[str, ...] = ()
    state: str = "closed"  # open | closed
    closed_at: str | None = None  # UTC ISO-8601
    existing_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.number <= 0:
            raise ValueError(f"issue number must be positive, got {self.number}")
        if self.state not in ("open", "closed"):
            raise ValueError(f"issue state must be open or closed, got {self.state!r}")

    @property
    def key(self) -> tuple[str, int]:
        return (self.project_id, self.number)


@dataclass(frozen=True)
class ChangeSet:
    project_id: str
    number: int
    title: str
    body: str = ""
    changed_file_paths: tuple[str, ...] = ()
    commit_messages: tuple[str, ...] = ()
    merged: bool = False

    def __post_init__(self):
        if self.number <= 0:
            raise ValueError(f"change number must be positive, got {self.number}")
        deduped = tuple(dict.fromkeys(self.changed_file_paths))
        if deduped != self.changed_file_paths:
            object.__setattr__(self, "changed_file_paths", deduped)

    @property
    def key(self) -> tuple[str, int]:
        return (self.project_id, self.number)


LINK_SOURCES = ("reference_pattern", "csv_key", "revision_field")


@dataclass(frozen=True)
class IssueChangeLink:
    issue: Issue
    change: ChangeSet
    link_source: str

    def __post_init__(self):
        if self.link_source not in LINK_SOURCES:
            raise ValueError(f"link_source must be one of {LINK_SOURCES}, got {self.link_source!r}")


def record_to_dict(record) -> dict:
    return asdict(record)


def issue_from_dict(payload: dict) -> Issue:
    return Issue(
        project_id=payload["project_id"],
        number=payload["number"],
        title=payload["title"],
        body=payload.get("body", ""),
        comments=tuple(payload.get("comments", ())),
        state=payload.get("state", "closed"),
        closed_at=payload.get("closed_at"),
        existing_labels=tuple(payload.get("existing_labels", ())),
    )


def change_from_dict(payload: dict) -> ChangeSet:
    return ChangeSet(
        project_id=payload["project_id"],
        number=payload["number"],
        title=payload["title"],
        body=payload.get("body", ""),
        changed_file_paths=tuple(payload.get("changed_file_paths", ())),
        commit_messages=tuple(payload.get("commit_messages", ())),
        merged=payload.get("merged", False),
    )
