"""Issue-change cross-references.

The reference pattern is '#' immediately followed by digits, accepted
only when the digits end at a non-alphanumeric boundary or end of text,
scanned over change titles and bodies. "#1.2" therefore links issue 1
(the dot is a boundary) while "PR#12abc" links nothing.
"""

from __future__ import annotations

import re

from apilabels.ingestion.models import ChangeSet, Issue, IssueChangeLink

REFERENCE_PATTERN = re.compile(r"#(\d+)(?![0-9A-Za-z])")


def link_by_reference(issues: list[Issue], changes: list[ChangeSet]) -> list[IssueChangeLink]:
    """One link per distinct (change, referenced issue number) whose number
    exists among the issues. Order-independent: output is sorted."""
    by_number = {issue.number: issue for issue in issues}
    links = []
    for change in sorted(changes, key=lambda c: (c.project_id, c.number)):
        text = f"{change.title}\n{change.body}"
        referenced = sorted({int(m.group(1)) for m in REFERENCE_PATTERN.finditer(text)})
        for number in referenced:
            issue = by_number.get(number)
            if issue is not None:
                links.append(IssueChangeLink(issue=issue, change=change, link_source="reference_pattern"))
    return links


def filter_linked(
    links: list[IssueChangeLink], source_extensions: set[str] | frozenset[str]
) -> tuple[list[IssueChangeLink], int]:
    """Keep links whose change touches at least one path with a listed
    extension; returns (kept, discarded count)."""
    extensions = {ext.lower() for ext in source_extensions}
    kept = []
    for link in links:
        paths = link.change.changed_file_paths
        if any(_extension(path) in extensions for path in paths):
            kept.append(link)
    return kept, len(links) - len(kept)


def _extension(path: str) -> str:
    dot = path.rfind(".")
    return path[dot:].lower() if dot >= 0 else ""
