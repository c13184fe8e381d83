"""Issue and change mining: GitHub REST, CSV exports, linking, caching."""

from apilabels.ingestion.csvio import (
    CsvImport,
    CsvSchema,
    export_csv,
    import_csv,
    merge_change_lists,
)
from apilabels.ingestion.github import (
    GithubClient,
    RequestsTransport,
    TrackerCoordinates,
)
from apilabels.ingestion.linking import REFERENCE_PATTERN, filter_linked, link_by_reference
from apilabels.ingestion.models import ChangeSet, Issue, IssueChangeLink
from apilabels.ingestion.snapshots import load_snapshot, save_snapshot

__all__ = [
    "ChangeSet",
    "CsvImport",
    "CsvSchema",
    "GithubClient",
    "Issue",
    "IssueChangeLink",
    "REFERENCE_PATTERN",
    "RequestsTransport",
    "TrackerCoordinates",
    "export_csv",
    "filter_linked",
    "import_csv",
    "link_by_reference",
    "load_snapshot",
    "merge_change_lists",
    "save_snapshot",
]
