"""Token/namespace decisions and namespace classification.

Precedence in classify_namespace: an explicit full-namespace override
wins, then the second-token rule, then the first-token rule; otherwise
the namespace is unresolved. The map persists as line-oriented JSON, one
decision per line, with a leading meta line carrying the blocklist used
at tokenization time so replays stay consistent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from apilabels.errors import DataError
from apilabels.taxonomy.domains import ApiDomain, domain_from_name
from apilabels.taxonomy.tokens import (
    POSITION_FIRST,
    POSITION_FULL,
    POSITION_SECOND,
    default_blocklist,
    tokenize_namespace,
)

DECIDED_BY = ("expert", "nlp_accepted", "unresolved")


@dataclass(frozen=True)
class Decision:
    domain: ApiDomain
    decided_by: str  # expert | nlp_accepted
    score: float | None = None  # similarity score shown at decision time


@dataclass
class DomainMap:
    """Total mapping of decided tokens plus full-namespace overrides."""

    blocklist: frozenset[str] = field(default_factory=default_blocklist)
    token_rules: dict[tuple[str, str], Decision] = field(default_factory=dict)
    namespace_overrides: dict[str, Decision] = field(default_factory=dict)

    def decide_token(self, position: str, token: str, decision: Decision) -> None:
        if position not in (POSITION_FIRST, POSITION_SECOND):
            raise DataError(f"token decisions take positions first/second, got {position!r}")
        self.token_rules[(position, token.lower())] = decision

    def decide_namespace(self, namespace: str, decision: Decision) -> None:
        self.namespace_overrides[namespace] = decision

    def classify_namespace(self, ns: str) -> ApiDomain | None:
        """None means unresolved."""
        override = self.namespace_overrides.get(ns)
        if override is not None:
            return override.domain
        tokens = dict(
            (pos, tok)
            for pos, tok in tokenize_namespace(ns, self.blocklist)
            if pos != POSITION_FULL
        )
        for position in (POSITION_SECOND, POSITION_FIRST):
            token = tokens.get(position)
            if token is not None:
                rule = self.token_rules.get((position, token))
                if rule is not None:
                    return rule.domain
        return None

    # -- persistence --------------------------------------------------------

    def dump_lines(self) -> list[str]:
        lines = [json.dumps({"kind": "meta", "blocklist": sorted(self.blocklist)}, sort_keys=True)]
        for (position, token), decision in sorted(self.token_rules.items()):
            lines.append(_decision_line("token", position, token, decision))
        for namespace, decision in sorted(self.namespace_overrides.items()):
            lines.append(_decision_line("namespace", POSITION_FULL, namespace, decision))
        return lines

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.dump_lines()) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "DomainMap":
        out = cls()
        raw = Path(path).read_text(encoding="utf-8")
        records = []
        for lineno, line in enumerate(raw.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append((lineno, json.loads(line)))
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: bad JSON: {exc}") from None
        # validate every record before mutating anything
        for lineno, record in records:
            if record.get("kind") not in ("meta", "token", "namespace"):
                raise DataError(f"{path}:{lineno}: unknown record kind {record.get('kind')!r}")
            if record["kind"] != "meta":
                try:
                    domain_from_name(record["domain"])
                except KeyError as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from None
        for _, record in records:
            out.apply_record(record)
        return out

    def apply_record(self, record: dict) -> None:
        kind = record["kind"]
        if kind == "meta":
            self.blocklist = frozenset(record["blocklist"])
            return
        decision = Decision(
            domain=domain_from_name(record["domain"]),
            decided_by=record.get("decided_by", "expert"),
            score=record.get("score"),
        )
        if kind == "token":
            self.decide_token(record["position"], record["token"], decision)
        else:
            self.decide_namespace(record["namespace"], decision)


def _decision_line(kind: str, position: str, key: str, decision: Decision) -> str:
    record: dict = {"kind": kind, "domain": decision.domain.value, "decided_by": decision.decided_by}
    if decision.score is not None:
        record["score"] = decision.score
    if kind == "token":
        record["position"] = position
        record["token"] = key
    else:
        record["namespace"] = key
    return json.dumps(record, sort_keys=True)


@dataclass
class CoverageCounter:
    """Tracks how many namespace classifications resolved."""

    resolved: int = 0
    unresolved: int = 0
    unresolved_namespaces: set[str] = field(default_factory=set)

    @property
    def total(self) -> int:
        return self.resolved + self.unresolved

    def rate(self) -> float:
        return self.resolved / self.total if self.total else 0.0


def label_issue(
    change_files: list[str],
    file_api_index: dict[str, list],
    domain_map: DomainMap,
    coverage: CoverageCounter | None = None,
) -> set[ApiDomain]:
    """Union of the domains of every API imported by the changed files
    that exist in the index; unresolved namespaces contribute nothing but
    are counted."""
    labels: set[ApiDomain] = set()
    for path in change_files:
        for ref in file_api_index.get(path, ()):
            namespace = getattr(ref, "namespace", ref)
            domain = domain_map.classify_namespace(namespace)
            if domain is None:
                if coverage is not None:
                    coverage.unresolved += 1
                    coverage.unresolved_namespaces.add(namespace)
            else:
                labels.add(domain)
                if coverage is not None:
                    coverage.resolved += 1
    return labels
