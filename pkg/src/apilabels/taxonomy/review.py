"""Token review: aggregate token records with suggestions, then resolve
them interactively or from a replayed decisions file.

The session walks first tokens by descending frequency, then second
tokens, then the namespaces still unresolved after the token rounds.
Every accepted decision is appended to the map file immediately, so a
killed session resumes where it stopped.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from apilabels.errors import UserError
from apilabels.taxonomy.domainmap import Decision, DomainMap, _decision_line
from apilabels.taxonomy.domains import ApiDomain, domain_from_name
from apilabels.taxonomy.tokens import (
    POSITION_FIRST,
    POSITION_FULL,
    POSITION_SECOND,
    tokenize_namespace,
)
from apilabels.taxonomy.vectors import SuggestionResult, WordVectorStore, suggest_domains

MAX_SAMPLES = 3
DEFAULT_SUGGESTIONS = 5


@dataclass
class TokenRecord:
    token: str
    position: str  # first | second | full_namespace
    frequency: int
    samples: list[str] = field(default_factory=list)
    suggestions: list[tuple[ApiDomain, float]] = field(default_factory=list)
    out_of_vocabulary: bool = False
    decision: ApiDomain | None = None
    decided_by: str = "unresolved"


def build_token_records(
    namespaces: Iterable[str],
    store: WordVectorStore,
    blocklist,
    k: int = DEFAULT_SUGGESTIONS,
) -> list[TokenRecord]:
    """Aggregate (position, token) pairs over distinct namespaces, with
    similarity suggestions attached."""
    buckets: dict[tuple[str, str], set[str]] = defaultdict(set)
    for ns in sorted(set(namespaces)):
        for position, token in tokenize_namespace(ns, blocklist):
            if position == POSITION_FULL:
                continue
            buckets[(position, token)].add(ns)
    records = []
    for (position, token), sources in sorted(buckets.items()):
        result: SuggestionResult = suggest_domains(token, store, k)
        records.append(
            TokenRecord(
                token=token,
                position=position,
                frequency=len(sources),
                samples=sorted(sources)[:MAX_SAMPLES],
                suggestions=result.suggestions,
                out_of_vocabulary=result.out_of_vocabulary,
            )
        )
    return records


def load_decisions_csv(path: str | Path) -> dict[tuple[str, str], Decision]:
    """Scripted decisions: position,token,domain[,decided_by]. Validated
    in full before anything is applied."""
    decisions: dict[tuple[str, str], Decision] = {}
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        required = {"position", "token", "domain"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise UserError(f"decisions file needs columns {sorted(required)}")
        for lineno, row in enumerate(reader, start=2):
            position = row["position"].strip()
            if position not in (POSITION_FIRST, POSITION_SECOND, POSITION_FULL):
                raise UserError(f"{path}:{lineno}: bad position {position!r}")
            try:
                domain = domain_from_name(row["domain"])
            except KeyError as exc:
                raise UserError(f"{path}:{lineno}: {exc}") from None
            decided_by = (row.get("decided_by") or "expert").strip()
            key_token = row["token"].strip() if position == POSITION_FULL else row["token"].strip().lower()
            decisions[(position, key_token)] = Decision(domain=domain, decided_by=decided_by)
    return decisions


class ReviewSession:
    """Drives the two token rounds plus the full-namespace round.

    decide_fn(record) returns a Decision, or None to leave the record
    unresolved. Decisions are persisted to map_path as they happen.
    """

    def __init__(
        self,
        records: list[TokenRecord],
        domain_map: DomainMap,
        namespaces: Iterable[str] = (),
        map_path: str | Path | None = None,
    ):
        self.records = records
        self.map = domain_map
        self.namespaces = sorted(set(namespaces))
        self.map_path = Path(map_path) if map_path else None
        if self.map_path and not self.map_path.exists():
            self.map.save(self.map_path)

    def _persist(self, kind: str, position: str, key: str, decision: Decision) -> None:
        if self.map_path is None:
            return
        with open(self.map_path, "a", encoding="utf-8") as fh:
            fh.write(_decision_line(kind, position, key, decision) + "\n")

    def _round(self, records: list[TokenRecord], decide_fn: Callable) -> None:
        for record in records:
            if (record.position, record.token) in self.map.token_rules:
                record.decision = self.map.token_rules[(record.position, record.token)].domain
                record.decided_by = self.map.token_rules[(record.position, record.token)].decided_by
                continue
            decision = decide_fn(record)
            if decision is None:
                continue
            record.decision = decision.domain
            record.decided_by = decision.decided_by
            self.map.decide_token(record.position, record.token, decision)
            self._persist("token", record.position, record.token, decision)

    def run(self, decide_fn: Callable[[TokenRecord], Decision | None]) -> DomainMap:
        firsts = [r for r in self.records if r.position == POSITION_FIRST]
        seconds = [r for r in self.records if r.position == POSITION_SECOND]
        firsts.sort(key=lambda r: (-r.frequency, r.token))
        seconds.sort(key=lambda r: (-r.frequency, r.token))
        self._round(firsts, decide_fn)
        self._round(seconds, decide_fn)
        # full-namespace round for what is still unresolved
        for ns in self.namespaces:
            if self.map.classify_namespace(ns) is not None:
                continue
            record = TokenRecord(token=ns, position=POSITION_FULL, frequency=1, samples=[ns])
            decision = decide_fn(record)
            if decision is None:
                continue
            self.map.decide_namespace(ns, decision)
            self._persist("namespace", POSITION_FULL, ns, decision)
        return self.map


def replay_decider(decisions: dict[tuple[str, str], Decision]) -> Callable[[TokenRecord], Decision | None]:
    def decide(record: TokenRecord) -> Decision | None:
        return decisions.get((record.position, record.token))

    return decide
