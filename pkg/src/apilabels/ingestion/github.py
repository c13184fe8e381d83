"""GitHub REST v3 client for issues, comments, pulls, and pull files.

Transport is injectable so tests replay canned pages. Rate limits retry
with exponential backoff (1s doubling to a 64s cap, at most 8 retries);
auth failures and exhausted retries raise typed errors, and network
failures carry a resume cursor (the page that failed).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, Protocol

from apilabels.errors import CredentialError, RateLimitError, TransientError
from apilabels.ingestion.models import ChangeSet, Issue

logger = logging.getLogger(__name__)

API_ROOT = "https://api.github.com"
PER_PAGE = 100

BACKOFF_START = 1.0
BACKOFF_FACTOR = 2.0
BACKOFF_CAP = 64.0
MAX_RETRIES = 8


class Transport(Protocol):
    def get(self, url: str, params: dict, headers: dict) -> tuple[int, dict, object]:
        """Returns (status code, response headers, decoded JSON body)."""


class RequestsTransport:
    def __init__(self, timeout: float = 30.0):
        import requests

        self._session = requests.Session()
        self._timeout = timeout
        self._requests = requests

    def get(self, url: str, params: dict, headers: dict) -> tuple[int, dict, object]:
        try:
            response = self._session.get(url, params=params, headers=headers, timeout=self._timeout)
        except self._requests.RequestException as exc:
            raise ConnectionError(str(exc)) from exc
        try:
            body = response.json() if response.content else None
        except ValueError:
            body = None
        return response.status_code, dict(response.headers), body


@dataclass
class TrackerCoordinates:
    owner: str
    repo: str

    @classmethod
    def parse(cls, slug: str) -> "TrackerCoordinates":
        owner, _, repo = slug.partition("/")
        if not owner or not repo:
            raise ValueError(f"expected owner/repo, got {slug!r}")
        return cls(owner=owner, repo=repo)

    @property
    def project_id(self) -> str:
        return f"{self.owner}/{self.repo}"


class GithubClient:
    def __init__(
        self,
        token: str,
        transport: Transport | None = None,
        sleep: Callable[[float], None] = time.sleep,
        api_root: str = API_ROOT,
    ):
        self._token = token
        self._transport = transport or RequestsTransport()
        self._sleep = sleep
        self._root = api_root

    # -- request plumbing ----------------------------------------------------

    def _headers(self) -> dict:
        headers = {"Accept": "application/vnd.github+json"}
        if self._token:
            headers["Authorization"] = f"token {self._token}"
        return headers

    def _get(self, path: str, params: dict, page: int) -> object:
        url = f"{self._root}{path}"
        delay = BACKOFF_START
        for attempt in range(MAX_RETRIES + 1):
            try:
                status, headers, body = self._transport.get(url, params, self._headers())
            except ConnectionError as exc:
                raise TransientError(f"network failure fetching {path}: {exc}", resume_page=page) from exc
            if status == 401:
                raise CredentialError("token rejected (401); check scope and expiry")
            if status == 403 and _is_rate_limited(headers, body):
                if attempt == MAX_RETRIES:
                    break
                logger.info("rate limited on %s, retrying in %.0fs", path, delay)
                self._sleep(delay)
                delay = min(delay * BACKOFF_FACTOR, BACKOFF_CAP)
                continue
            if status == 403:
                raise CredentialError("access forbidden (403) and not rate-limited")
            if status >= 500:
                raise TransientError(f"server error {status} fetching {path}", resume_page=page)
            if status != 200:
                raise TransientError(f"unexpected status {status} fetching {path}", resume_page=page)
            return body
        raise RateLimitError(f"rate limit persisted after {MAX_RETRIES} retries on {path}")

    def _paginate(self, path: str, params: dict, start_page: int = 1) -> list:
        records = []
        page = start_page
        while True:
            body = self._get(path, {**params, "per_page": PER_PAGE, "page": page}, page)
            if not body:
                break
            records.extend(body)
            if len(body) < PER_PAGE:
                break
            page += 1
        return records

    # -- fetch operations ------------------------------------------------------

    def fetch_issues(
        self,
        project: TrackerCoordinates,
        since: str | None = None,
        state: str = "closed",
        with_comments: bool = True,
    ) -> list[Issue]:
        """All issues of the requested state, comments included, ordered by
        number ascending. Pull requests surfaced by the issues endpoint are
        excluded."""
        params = {"state": state}
        if since:
            params["since"] = since
        raw = self._paginate(f"/repos/{project.owner}/{project.repo}/issues", params)
        issues = []
        for item in raw:
            if "pull_request" in item:
                continue
            number = item["number"]
            comments: tuple[str, ...] = ()
            if with_comments and item.get("comments", 0):
                fetched = self._paginate(
                    f"/repos/{project.owner}/{project.repo}/issues/{number}/comments", {}
                )
                comments = tuple(c.get("body") or "" for c in fetched)
            issues.append(
                Issue(
                    project_id=project.project_id,
                    number=number,
                    title=item.get("title") or "",
                    body=item.get("body") or "",
                    comments=comments,
                    state=item.get("state", state),
                    closed_at=item.get("closed_at"),
                    existing_labels=tuple(
                        label["name"] if isinstance(label, dict) else str(label)
                        for label in item.get("labels", ())
                    ),
                )
            )
        issues.sort(key=lambda issue: issue.number)
        return issues

    def fetch_changes(self, project: TrackerCoordinates) -> list[ChangeSet]:
        """Merged-and-closed pull requests with their file lists and commit
        messages, ordered by number ascending."""
        raw = self._paginate(
            f"/repos/{project.owner}/{project.repo}/pulls", {"state": "closed"}
        )
        changes = []
        for item in raw:
            if not item.get("merged_at"):
                continue
            number = item["number"]
            files = self._paginate(
                f"/repos/{project.owner}/{project.repo}/pulls/{number}/files", {}
            )
            commits = self._paginate(
                f"/repos/{project.owner}/{project.repo}/pulls/{number}/commits", {}
            )
            changes.append(
                ChangeSet(
                    project_id=project.project_id,
                    number=number,
                    title=item.get("title") or "",
                    body=item.get("body") or "",
                    changed_file_paths=tuple(f["filename"] for f in files),
                    commit_messages=tuple(
                        c.get("commit", {}).get("message", "") for c in commits
                    ),
                    merged=True,
                )
            )
        changes.sort(key=lambda change: change.number)
        return changes

    # -- label write-back -------------------------------------------------------

    def post(self, path: str, payload: dict) -> object:
        """POST helper for label creation and application."""
        import requests

        url = f"{self._root}{path}"
        try:
            response = requests.post(url, json=payload, headers=self._headers(), timeout=30.0)
        except requests.RequestException as exc:
            raise TransientError(f"network failure posting {path}: {exc}") from exc
        if response.status_code == 401:
            raise CredentialError("token rejected (401)")
        if response.status_code in (403, 404):
            from apilabels.errors import PermissionDeniedError

            raise PermissionDeniedError(f"write denied ({response.status_code}) on {path}")
        if response.status_code >= 400:
            raise TransientError(f"unexpected status {response.status_code} posting {path}")
        return response.json() if response.content else None


def _is_rate_limited(headers: dict, body: object) -> bool:
    remaining = headers.get("X-RateLimit-Remaining")
    if remaining is not None and str(remaining) == "0":
        return True
    if isinstance(body, dict) and "rate limit" in str(body.get("message", "")).lower():
        return True
    return False
