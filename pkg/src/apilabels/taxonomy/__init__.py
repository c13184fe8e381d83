"""API-domain taxonomy: the 31 labels, namespace tokenization, similarity
suggestions, expert decisions, and issue labeling."""

from apilabels.taxonomy.domainmap import (
    CoverageCounter,
    Decision,
    DomainMap,
    label_issue,
)
from apilabels.taxonomy.domains import (
    ALL_DOMAINS,
    DEFINITIONS,
    DISPLAY_NAMES,
    DOMAIN_NAMES,
    ApiDomain,
    domain_from_name,
)
from apilabels.taxonomy.review import (
    ReviewSession,
    TokenRecord,
    build_token_records,
    load_decisions_csv,
    replay_decider,
)
from apilabels.taxonomy.tokens import (
    COUNTRY_CODES,
    DEFAULT_COMPANY_NAMES,
    POSITION_FIRST,
    POSITION_FULL,
    POSITION_SECOND,
    TLD_TOKENS,
    default_blocklist,
    tokenize_namespace,
)
from apilabels.taxonomy.vectors import (
    SuggestionResult,
    WordVectorStore,
    cosine,
    domain_vector,
    suggest_domains,
)

__all__ = [
    "ALL_DOMAINS",
    "ApiDomain",
    "COUNTRY_CODES",
    "CoverageCounter",
    "DEFAULT_COMPANY_NAMES",
    "DEFINITIONS",
    "DISPLAY_NAMES",
    "DOMAIN_NAMES",
    "Decision",
    "DomainMap",
    "POSITION_FIRST",
    "POSITION_FULL",
    "POSITION_SECOND",
    "ReviewSession",
    "SuggestionResult",
    "TLD_TOKENS",
    "TokenRecord",
    "WordVectorStore",
    "build_token_records",
    "cosine",
    "default_blocklist",
    "domain_from_name",
    "domain_vector",
    "label_issue",
    "load_decisions_csv",
    "replay_decider",
    "suggest_domains",
    "tokenize_namespace",
]
