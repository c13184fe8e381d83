"""Import extraction across Java, C#, and C++, snapshot building, and the
snapshot filter."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apilabels.codeparse import (
    ApiReference,
    build_snapshot,
    detect_language,
    parse_imports,
    read_inventory_csv,
    scan_tree,
    snapshot_filter,
    write_inventory_csv,
)
from apilabels.errors import UserError
from apilabels.ingestion.models import ChangeSet, Issue, IssueChangeLink


def namespaces(content, language):
    return [ref.namespace for ref in parse_imports(content, language)]


class TestJava:
    def test_plain_import(self):
        assert namespaces("import java.util.List;", "java") == ["java.util.List"]

    def test_static_import_keeps_member(self):
        out = namespaces("import static org.junit.Assert.assertEquals;", "java")
        assert out == ["org.junit.Assert.assertEquals"]

    def test_wildcard_records_package(self):
        assert namespaces("import java.util.*;", "java") == ["java.util"]

    def test_comments_and_strings_excluded(self):
        code = (
            "// import line.Comment;\n"
            "/* import block.Comment; */\n"
            'String s = "import string.Literal;";\n'
            "import real.Thing;\n"
        )
        assert namespaces(code, "java") == ["real.Thing"]

    def test_duplicates_removed(self):
        code = "import a.B;\nimport a.B;\n"
        assert namespaces(code, "java") == ["a.B"]


class TestCsharp:
    def test_plain_using(self):
        assert namespaces("using System.IO;", "csharp") == ["System.IO"]

    def test_commented_using_excluded(self):
        assert namespaces("// using System.Net;\nusing System.IO;", "csharp") == ["System.IO"]

    def test_alias_captures_right_hand_side(self):
        assert namespaces("using IO = System.IO.Compression;", "csharp") == [
            "System.IO.Compression"
        ]

    def test_static_using(self):
        assert namespaces("using static System.Math;", "csharp") == ["System.Math"]

    def test_using_statement_block_excluded(self):
        code = "using (var f = File.Open(p)) { }\nusing System;\n"
        assert namespaces(code, "csharp") == ["System"]

    def test_verbatim_string_does_not_derail(self):
        code = 'var p = @"C:\\temp\\";\nusing System.Text;\n'
        assert namespaces(code, "csharp") == ["System.Text"]


class TestCpp:
    def test_bracket_and_quote_forms(self):
        out = namespaces('#include <vector>\n#include "audio/mixer.h"', "cpp")
        assert out == ["vector", "audio/mixer.h"]

    def test_preprocessor_conditional_kept(self):
        code = "#ifdef AUDIO\n#include <sndfile.h>\n#endif\n"
        assert namespaces(code, "cpp") == ["sndfile.h"]

    def test_comment_and_string_excluded(self):
        code = '// #include <commented>\nprintf("#include <evil>");\n#include <real>\n'
        assert namespaces(code, "cpp") == ["real"]

    def test_whitespace_variants(self):
        assert namespaces('#  include   "x.h"', "cpp") == ["x.h"]


class TestContracts:
    def test_unsupported_language(self):
        with pytest.raises(UserError):
            parse_imports("import x;", "cobol")

    def test_never_fails_on_malformed_code(self):
        garbage = 'import ;;; using ( "unterminated\n#include <\x00>\nimport a.B;'
        refs = parse_imports(garbage, "java")
        assert all(isinstance(r, ApiReference) for r in refs)

    @given(st.text(max_size=400))
    @settings(max_examples=80, deadline=None)
    def test_no_forbidden_characters_in_namespaces(self, content):
        for language in ("java", "csharp", "cpp"):
            for ref in parse_imports(content, language):
                assert not any(ch in ref.namespace for ch in ';<>"')
                assert ref.namespace == ref.namespace.strip()
                assert ref.namespace

    def test_concatenation_superset(self):
        a = "import a.A;\n"
        b = "import b.B;\nimport a.A;\n"
        combined = {r.namespace for r in parse_imports(a + b, "java")}
        separate = {r.namespace for r in parse_imports(a, "java")} | {
            r.namespace for r in parse_imports(b, "java")
        }
        assert combined >= separate


class TestScan:
    def _tree(self, tmp_path):
        (tmp_path / "src").mkdir()
        (tmp_path / "src/A.java").write_text("import java.util.List;\nimport java.io.File;\n")
        (tmp_path / "src/B.java").write_text("import java.util.Map;\n")
        (tmp_path / "README.md").write_text("# not source\n")
        return tmp_path

    def test_snapshot_contents(self, tmp_path):
        index = build_snapshot(self._tree(tmp_path), "java")
        assert index.file_paths == frozenset({"src/A.java", "src/B.java"})
        assert index.api_namespaces == frozenset(
            {"java.util.List", "java.io.File", "java.util.Map"}
        )

    def test_empty_tree(self, tmp_path):
        index = build_snapshot(tmp_path, "java")
        assert not index.file_paths and not index.api_namespaces

    def test_deterministic_across_orderings(self, tmp_path):
        tree = self._tree(tmp_path)
        assert build_snapshot(tree, "java") == build_snapshot(tree, "java")

    def test_detect_language(self, tmp_path):
        self._tree(tmp_path)
        assert detect_language(tmp_path) == "java"

    def test_inventory_round_trip(self, tmp_path):
        result = scan_tree(self._tree(tmp_path), "java")
        write_inventory_csv(tmp_path / "inv.csv", result, "java")
        loaded = read_inventory_csv(tmp_path / "inv.csv")
        assert {r.namespace for r in loaded["src/A.java"]} == {
            "java.util.List",
            "java.io.File",
        }


class TestSnapshotFilter:
    def _link(self, paths):
        issue = Issue("p", 1, "t")
        change = ChangeSet("p", 2, "t", changed_file_paths=tuple(paths), merged=True)
        return IssueChangeLink(issue=issue, change=change, link_source="reference_pattern")

    def _index(self, files):
        from apilabels.codeparse import SnapshotIndex

        return SnapshotIndex(file_paths=frozenset(files), api_namespaces=frozenset())

    def test_deleted_file_only_link_dropped(self):
        kept = snapshot_filter([self._link(["gone.java"])], None, self._index(["live.java"]))
        assert kept == []

    def test_one_live_file_keeps_link(self):
        link = self._link(["gone.java", "live.java"])
        assert snapshot_filter([link], None, self._index(["live.java"])) == [link]

    def test_monotone_in_index(self):
        links = [self._link(["a.java"]), self._link(["b.java"])]
        big = snapshot_filter(links, None, self._index(["a.java", "b.java"]))
        small = snapshot_filter(links, None, self._index(["a.java"]))
        assert set(small) <= set(big)
