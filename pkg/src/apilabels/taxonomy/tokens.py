"""Namespace tokenization with a configurable blocklist.

Namespaces split on '.', '/', and '::'. Tokens are lowercased; blocked
tokens (top-level domain extensions, country codes, company names) are
dropped before picking the first and second token. The full namespace is
always emitted as its own entry.
"""

from __future__ import annotations

import re

POSITION_FIRST = "first"
POSITION_SECOND = "second"
POSITION_FULL = "full_namespace"

_SEPARATORS = re.compile(r"::|[./]")

TLD_TOKENS = frozenset({"com", "org", "net", "io", "edu", "gov"})

# ISO 3166-1 alpha-2 assigned codes
COUNTRY_CODES = frozenset(
    """
    ad ae af ag ai al am ao aq ar as at au aw ax az
    ba bb bd be bf bg bh bi bj bl bm bn bo bq br bs bt bv bw by bz
    ca cc cd cf cg ch ci ck cl cm cn co cr cu cv cw cx cy cz
    de dj dk dm do dz ec ee eg eh er es et fi fj fk fm fo fr
    ga gb gd ge gf gg gh gi gl gm gn gp gq gr gs gt gu gw gy
    hk hm hn hr ht hu id ie il im in io iq ir is it je jm jo jp
    ke kg kh ki km kn kp kr kw ky kz la lb lc li lk lr ls lt lu lv ly
    ma mc md me mf mg mh mk ml mm mn mo mp mq mr ms mt mu mv mw mx my mz
    na nc ne nf ng ni nl no np nr nu nz om
    pa pe pf pg ph pk pl pm pn pr ps pt pw py qa re ro rs ru rw
    sa sb sc sd se sg sh si sj sk sl sm sn so sr ss st sv sx sy sz
    tc td tf tg th tj tk tl tm tn to tr tt tv tw tz
    ua ug um us uy uz va vc ve vg vi vn vu wf ws ye yt za zm zw
    """.split()
)

DEFAULT_COMPANY_NAMES = frozenset({"microsoft", "google", "facebook"})


def default_blocklist(extra_companies: set[str] | frozenset[str] = frozenset()) -> frozenset[str]:
    return TLD_TOKENS | COUNTRY_CODES | DEFAULT_COMPANY_NAMES | {t.lower() for t in extra_companies}


def tokenize_namespace(ns: str, blocklist: frozenset[str] | set[str]) -> list[tuple[str, str]]:
    """(position, token) entries: the first and second surviving tokens
    plus the original namespace tagged full_namespace."""
    if not ns:
        raise ValueError("cannot tokenize an empty namespace")
    tokens = [t.lower() for t in _SEPARATORS.split(ns) if t]
    surviving = [t for t in tokens if t not in blocklist]
    out: list[tuple[str, str]] = []
    if surviving:
        out.append((POSITION_FIRST, surviving[0]))
    if len(surviving) > 1:
        out.append((POSITION_SECOND, surviving[1]))
    out.append((POSITION_FULL, ns))
    return out
