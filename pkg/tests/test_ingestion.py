"""Mining: reference linking, source filters, CSV import/export, the
GitHub client against a canned transport, and NDJSON caches."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apilabels.errors import (
    CredentialError,
    RateLimitError,
    SchemaError,
    TransientError,
)
from apilabels.ingestion import (
    ChangeSet,
    CsvSchema,
    GithubClient,
    Issue,
    IssueChangeLink,
    TrackerCoordinates,
    export_csv,
    filter_linked,
    import_csv,
    link_by_reference,
    load_snapshot,
    merge_change_lists,
    save_snapshot,
)


def _issue(number, **kw):
    return Issue("proj", number, f"issue {number}", **kw)


def _change(number, body="", paths=(), merged=True, title=""):
    return ChangeSet(
        "proj", number, title or f"change {number}", body=body,
        changed_file_paths=tuple(paths), merged=merged,
    )


class TestLinkByReference:
    def test_two_references_in_body(self):
        issues = [_issue(42), _issue(7)]
        links = link_by_reference(issues, [_change(1, body="Fixes #42 and closes #7")])
        assert {link.issue.number for link in links} == {42, 7}
        assert all(link.link_source == "reference_pattern" for link in links)

    def test_dangling_reference_dropped(self):
        assert link_by_reference([_issue(1)], [_change(1, body="see #999")]) == []

    def test_dot_is_a_boundary(self):
        # "version #1.2" links issue 1: the dot ends the digit run
        links = link_by_reference([_issue(1)], [_change(1, body="version #1.2")])
        assert [link.issue.number for link in links] == [1]

    def test_embedded_alphanumerics_rejected(self):
        assert link_by_reference([_issue(12)], [_change(1, body="PR#12abc")]) == []

    def test_title_scanned_too(self):
        links = link_by_reference([_issue(3)], [_change(1, title="Revert #3", body="")])
        assert [link.issue.number for link in links] == [3]

    def test_duplicate_references_deduplicated(self):
        links = link_by_reference([_issue(5)], [_change(1, body="#5 #5 again #5")])
        assert len(links) == 1

    def test_many_to_many_allowed(self):
        issues = [_issue(1), _issue(2)]
        changes = [_change(10, body="#1 #2"), _change(11, body="#1")]
        links = link_by_reference(issues, changes)
        assert len(links) == 3

    @given(st.permutations(range(6)))
    @settings(max_examples=20, deadline=None)
    def test_order_independent(self, order):
        issues = [_issue(n + 1) for n in range(6)]
        changes = [_change(10 + n, body=f"fixes #{n + 1}") for n in range(6)]
        base = link_by_reference(issues, changes)
        shuffled = link_by_reference(
            [issues[i] for i in order], [changes[i] for i in reversed(order)]
        )
        key = lambda link: (link.issue.number, link.change.number)
        assert sorted(map(key, base)) == sorted(map(key, shuffled))

    def test_idempotent(self):
        issues = [_issue(1)]
        changes = [_change(2, body="#1")]
        assert link_by_reference(issues, changes) == link_by_reference(issues, changes)


class TestFilterLinked:
    def _link(self, paths):
        return IssueChangeLink(
            issue=_issue(1), change=_change(9, paths=paths), link_source="reference_pattern"
        )

    def test_docs_only_dropped(self):
        kept, discarded = filter_linked([self._link(["README.md"])], {".java"})
        assert kept == [] and discarded == 1

    def test_mixed_kept(self):
        link = self._link(["Foo.java", "docs.md"])
        kept, discarded = filter_linked([link], {".java"})
        assert kept == [link] and discarded == 0

    def test_fixpoint_and_subset(self):
        links = [self._link(["a.java"]), self._link(["b.md"])]
        kept, _ = filter_linked(links, {".java"})
        again, discarded = filter_linked(kept, {".java"})
        assert again == kept and discarded == 0
        assert set(kept) <= set(links)

    def test_case_insensitive_extensions(self):
        kept, _ = filter_linked([self._link(["FOO.JAVA"])], {".java"})
        assert len(kept) == 1


class TestCsvImport:
    def _write_schema(self, tmp_path, text):
        path = tmp_path / "schema.txt"
        path.write_text(text)
        return path

    def _issues_schema(self, tmp_path):
        return CsvSchema.load(
            self._write_schema(
                tmp_path,
                "kind = issues\nproject = cronos\nid = key\ntitle = summary\n"
                "body = description\nlink = ramo\n",
            )
        )

    def test_key_revision_links(self, tmp_path):
        csv_path = tmp_path / "issues.csv"
        csv_path.write_text("key,summary,description,ramo\nK1,first,body1,R1\nK2,second,body2,R2\n")
        result = import_csv(csv_path, self._issues_schema(tmp_path))
        assert len(result.issues) == 2 and len(result.links) == 2
        assert all(link.link_source == "csv_key" for link in result.links)
        assert result.links[0].change.number == 1

    def test_empty_link_cell_is_reject_not_link(self, tmp_path):
        csv_path = tmp_path / "issues.csv"
        csv_path.write_text("key,summary,description,ramo\nK1,first,body1,\n")
        result = import_csv(csv_path, self._issues_schema(tmp_path))
        assert len(result.issues) == 1 and not result.links
        assert result.rejects[0]["kind"] == "unlinked"

    def test_malformed_row_collected(self, tmp_path):
        csv_path = tmp_path / "issues.csv"
        csv_path.write_text("key,summary,description,ramo\nnodigits,first,body1,R1\n")
        result = import_csv(csv_path, self._issues_schema(tmp_path))
        assert not result.issues
        assert result.rejects[0]["kind"] == "malformed" and result.rejects[0]["line"] == 2

    def test_missing_mapped_column_names_it(self, tmp_path):
        csv_path = tmp_path / "issues.csv"
        csv_path.write_text("key,summary\nK1,first\n")
        with pytest.raises(SchemaError, match="description"):
            import_csv(csv_path, self._issues_schema(tmp_path))

    def test_schema_requires_project_and_id(self, tmp_path):
        with pytest.raises(SchemaError, match="project"):
            CsvSchema.load(self._write_schema(tmp_path, "kind = issues\nid = key\ntitle = t\n"))
        with pytest.raises(SchemaError, match="id"):
            CsvSchema.load(self._write_schema(tmp_path, "kind = issues\nproject = p\ntitle = t\n"))

    def test_bom_tolerated(self, tmp_path):
        csv_path = tmp_path / "issues.csv"
        csv_path.write_bytes("﻿key,summary,description,ramo\nK1,first,b,R9\n".encode("utf-8"))
        result = import_csv(csv_path, self._issues_schema(tmp_path))
        assert result.issues[0].number == 1

    def test_configurable_delimiter(self, tmp_path):
        schema = CsvSchema.load(
            self._write_schema(
                tmp_path,
                "kind = issues\nproject = p\nid = key\ntitle = summary\n"
                "link = ramo\ndelimiter = ;\n",
            )
        )
        csv_path = tmp_path / "issues.csv"
        csv_path.write_text("key;summary;ramo\nK1;first;R1\n")
        result = import_csv(csv_path, schema)
        assert len(result.links) == 1

    def test_round_trip_via_export(self, tmp_path):
        issues = [
            Issue("p", 1, "first", body="b1", comments=("c1",)),
            Issue("p", 2, "second", body="b2"),
        ]
        changes = [
            ChangeSet("p", 7, "rev 7", changed_file_paths=("a.java", "b.md"), merged=True),
        ]
        links = [IssueChangeLink(issues[0], changes[0], "csv_key")]
        export_csv(tmp_path, "p", issues, changes, links)
        imported = import_csv(tmp_path / "issues.csv", CsvSchema.load(tmp_path / "issues.schema"))
        change_import = import_csv(tmp_path / "changes.csv", CsvSchema.load(tmp_path / "changes.schema"))
        merged = merge_change_lists(imported, change_import.changes)
        assert [i.number for i in merged.issues] == [1, 2]
        assert merged.issues[0].title == "first" and merged.issues[0].body == "b1"
        assert merged.links[0].change.changed_file_paths == ("a.java", "b.md")
        assert merged.links[0].change.merged


class FakeTransport:
    """Replays canned responses keyed by (path, page)."""

    def __init__(self, pages: dict, failures: list | None = None):
        self.pages = pages
        self.failures = list(failures or [])
        self.calls = []

    def get(self, url, params, headers):
        path = url.replace("https://api.github.com", "")
        page = params.get("page", 1)
        self.calls.append((path, page))
        if self.failures:
            status, header, body = self.failures.pop(0)
            if status == "network":
                raise ConnectionError("boom")
            return status, header, body
        return 200, {}, self.pages.get((path, page), [])


def _issue_payload(number, **kw):
    return {
        "number": number,
        "title": kw.get("title", f"t{number}"),
        "body": kw.get("body", ""),
        "state": "closed",
        "closed_at": "2021-11-01T00:00:00Z",
        "comments": kw.get("comments", 0),
        "labels": kw.get("labels", []),
        **({"pull_request": {}} if kw.get("is_pr") else {}),
    }


class TestGithubClient:
    def test_empty_project(self):
        client = GithubClient("tok", transport=FakeTransport({}), sleep=lambda s: None)
        assert client.fetch_issues(TrackerCoordinates.parse("o/r")) == []

    def test_pagination_merges_pages(self):
        first = [_issue_payload(n) for n in range(1, 101)]
        second = [_issue_payload(n) for n in range(101, 151)]
        transport = FakeTransport({("/repos/o/r/issues", 1): first, ("/repos/o/r/issues", 2): second})
        client = GithubClient("tok", transport=transport, sleep=lambda s: None)
        issues = client.fetch_issues(TrackerCoordinates.parse("o/r"), with_comments=False)
        assert len(issues) == 150
        assert [i.number for i in issues] == sorted(i.number for i in issues)

    def test_pull_requests_excluded_from_issues(self):
        payload = [_issue_payload(1), _issue_payload(2, is_pr=True)]
        transport = FakeTransport({("/repos/o/r/issues", 1): payload})
        client = GithubClient("tok", transport=transport, sleep=lambda s: None)
        issues = client.fetch_issues(TrackerCoordinates.parse("o/r"), with_comments=False)
        assert [i.number for i in issues] == [1]

    def test_comments_fetched_in_order(self):
        transport = FakeTransport(
            {
                ("/repos/o/r/issues", 1): [_issue_payload(9, comments=2)],
                ("/repos/o/r/issues/9/comments", 1): [{"body": "first"}, {"body": "second"}],
            }
        )
        client = GithubClient("tok", transport=transport, sleep=lambda s: None)
        issues = client.fetch_issues(TrackerCoordinates.parse("o/r"))
        assert issues[0].comments == ("first", "second")

    def test_merged_only_changes(self):
        pulls = [
            {"number": 1, "title": "a", "body": "", "merged_at": "2021-01-01"},
            {"number": 2, "title": "b", "body": "", "merged_at": None},
        ]
        transport = FakeTransport(
            {
                ("/repos/o/r/pulls", 1): pulls,
                ("/repos/o/r/pulls/1/files", 1): [{"filename": "a.java"}, {"filename": "a.java"}],
                ("/repos/o/r/pulls/1/commits", 1): [{"commit": {"message": "m1"}}],
            }
        )
        client = GithubClient("tok", transport=transport, sleep=lambda s: None)
        changes = client.fetch_changes(TrackerCoordinates.parse("o/r"))
        assert [c.number for c in changes] == [1]
        assert changes[0].changed_file_paths == ("a.java",)  # deduplicated
        assert changes[0].commit_messages == ("m1",)

    def test_auth_failure(self):
        transport = FakeTransport({}, failures=[(401, {}, {"message": "Bad credentials"})])
        client = GithubClient("bad", transport=transport, sleep=lambda s: None)
        with pytest.raises(CredentialError):
            client.fetch_issues(TrackerCoordinates.parse("o/r"))

    def test_rate_limit_backoff_then_success(self):
        failures = [(403, {"X-RateLimit-Remaining": "0"}, {"message": "rate limit exceeded"})] * 3
        transport = FakeTransport({("/repos/o/r/issues", 1): [_issue_payload(1)]}, failures=failures)
        sleeps = []
        client = GithubClient("tok", transport=transport, sleep=sleeps.append)
        issues = client.fetch_issues(TrackerCoordinates.parse("o/r"), with_comments=False)
        assert len(issues) == 1
        assert sleeps == [1.0, 2.0, 4.0]

    def test_rate_limit_exhaustion(self):
        failures = [(403, {"X-RateLimit-Remaining": "0"}, {"message": "rate limit exceeded"})] * 20
        transport = FakeTransport({}, failures=failures)
        sleeps = []
        client = GithubClient("tok", transport=transport, sleep=sleeps.append)
        with pytest.raises(RateLimitError):
            client.fetch_issues(TrackerCoordinates.parse("o/r"))
        assert len(sleeps) == 8
        assert max(sleeps) <= 64.0

    def test_network_failure_carries_resume_cursor(self):
        first = [_issue_payload(n) for n in range(1, 101)]
        transport = FakeTransport({("/repos/o/r/issues", 1): first}, failures=[])

        real_get = transport.get

        def flaky(url, params, headers):
            if params.get("page") == 2:
                raise ConnectionError("net down")
            return real_get(url, params, headers)

        transport.get = flaky
        client = GithubClient("tok", transport=transport, sleep=lambda s: None)
        with pytest.raises(TransientError) as exc:
            client.fetch_issues(TrackerCoordinates.parse("o/r"), with_comments=False)
        assert exc.value.resume_page == 2


class TestSnapshots:
    def test_round_trip_with_links(self, tmp_path):
        issues = [_issue(1, body="b", comments=("c",)), _issue(2)]
        changes = [_change(9, body="#1", paths=("a.java",))]
        links = link_by_reference(issues, changes)
        save_snapshot(tmp_path, issues, changes, links)
        loaded_issues, loaded_changes, loaded_links = load_snapshot(tmp_path)
        assert loaded_issues == issues
        assert loaded_changes == changes
        assert loaded_links == links

    def test_ndjson_one_record_per_line(self, tmp_path):
        save_snapshot(tmp_path, [_issue(1)], [_change(2)])
        lines = (tmp_path / "issues.ndjson").read_text().strip().splitlines()
        assert len(lines) == 1
        assert json.loads(lines[0])["number"] == 1
