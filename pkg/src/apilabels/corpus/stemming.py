"""Suffix-stripping stemmers: Porter (English) and an RSLP-style reducer
(Portuguese).

Both are exposed through ``stem(token, language)`` which re-applies the
underlying algorithm until the token stops changing (bounded). A single
Porter pass is not idempotent (agreed -> agree -> agre), and corpus
cleaning promises idempotence, so the fixpoint is taken here.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Count of vowel-to-consonant transitions: stem ~ [C](VC)^m[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_consonant(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    if not (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
    ):
        return False
    return word[-1] not in "wxy"


_STEP2 = (
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
)

_STEP3 = (
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
)

_STEP4 = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
)


def _longest_rule(word: str, rules) -> tuple[str, str] | None:
    best = None
    for suffix, replacement in rules:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
            best = (suffix, replacement)
    return best


def porter_stem(word: str) -> str:
    """One pass of the 1980 Porter algorithm over a lowercase token."""
    if len(word) <= 2:
        return word

    # step 1a
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies"):
        word = word[:-2]
    elif not word.endswith("ss") and word.endswith("s"):
        word = word[:-1]

    # step 1b
    fired = False
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            word = word[:-1]
    elif word.endswith("ed") and _contains_vowel(word[:-2]):
        word = word[:-2]
        fired = True
    elif word.endswith("ing") and _contains_vowel(word[:-3]):
        word = word[:-3]
        fired = True
    if fired:
        if word.endswith(("at", "bl", "iz")):
            word += "e"
        elif _ends_double_consonant(word) and word[-1] not in "lsz":
            word = word[:-1]
        elif _measure(word) == 1 and _ends_cvc(word):
            word += "e"

    # step 1c
    if word.endswith("y") and _contains_vowel(word[:-1]):
        word = word[:-1] + "i"

    # step 2
    rule = _longest_rule(word, _STEP2)
    if rule and _measure(word[: -len(rule[0])]) > 0:
        word = word[: -len(rule[0])] + rule[1]

    # step 3
    rule = _longest_rule(word, _STEP3)
    if rule and _measure(word[: -len(rule[0])]) > 0:
        word = word[: -len(rule[0])] + rule[1]

    # step 4
    best = None
    for suffix in _STEP4:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best)):
            best = suffix
    if best is not None:
        stem = word[: -len(best)]
        if _measure(stem) > 1 and (best != "ion" or (stem and stem[-1] in "st")):
            word = stem

    # step 5a
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem

    # step 5b
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        word = word[:-1]

    return word


# Portuguese suffix reduction, after Orengo & Huyck's RSLP: ordered rule
# groups of (suffix, minimum stem length, replacement). The verb and noun
# tables are trimmed to the productive suffixes; tokens here are already
# lowercased.

_PT_PLURAL = (
    ("ões", 3, "ão"), ("ães", 1, "ão"), ("ais", 1, "al"), ("éis", 2, "el"),
    ("eis", 2, "el"), ("óis", 2, "ol"), ("is", 2, "il"), ("les", 3, "l"),
    ("res", 3, "r"), ("ns", 1, "m"), ("s", 2, ""),
)

_PT_FEMININE = (
    ("ona", 3, "ão"), ("ora", 3, "or"), ("na", 4, "no"), ("inha", 3, "inho"),
    ("esa", 3, "ês"), ("osa", 3, "oso"), ("íaca", 3, "íaco"), ("ica", 3, "ico"),
    ("ada", 2, "ado"), ("ida", 3, "ido"), ("eira", 3, "eiro"),
)

_PT_ADVERB = (("mente", 4, ""),)

_PT_DEGREE = (
    ("íssimo", 3, ""), ("íssima", 3, ""), ("zinho", 2, ""), ("zinha", 2, ""),
    ("inho", 3, ""), ("inha", 3, ""), ("zão", 2, ""), ("ão", 3, ""),
)

_PT_NOUN = (
    ("amento", 3, ""), ("imento", 3, ""), ("alizado", 4, ""), ("atizado", 4, ""),
    ("ização", 5, ""), ("ação", 3, ""), ("ções", 3, ""), ("adora", 4, ""),
    ("ador", 3, ""), ("edor", 3, ""), ("idade", 4, ""), ("ismo", 4, ""),
    ("ista", 4, ""), ("ável", 2, ""), ("ível", 3, ""), ("oso", 3, ""),
    ("ez", 4, ""), ("eza", 3, ""), ("ência", 3, ""), ("ante", 2, ""),
)

_PT_VERB = (
    ("aríamos", 2, ""), ("eríamos", 2, ""), ("iríamos", 2, ""),
    ("ássemos", 2, ""), ("êssemos", 2, ""), ("íssemos", 2, ""),
    ("aremos", 2, ""), ("eremos", 2, ""), ("iremos", 2, ""),
    ("ariam", 2, ""), ("eriam", 2, ""), ("iriam", 2, ""),
    ("assem", 2, ""), ("essem", 2, ""), ("issem", 2, ""),
    ("achar", 2, ""), ("ando", 2, ""), ("endo", 3, ""), ("indo", 3, ""),
    ("aram", 2, ""), ("eram", 2, ""), ("iram", 3, ""), ("aram", 2, ""),
    ("avam", 2, ""), ("arei", 2, ""), ("aria", 2, ""), ("eria", 2, ""),
    ("iria", 2, ""), ("asse", 2, ""), ("esse", 2, ""), ("isse", 2, ""),
    ("aste", 2, ""), ("este", 2, ""), ("iste", 3, ""), ("amos", 2, ""),
    ("emos", 2, ""), ("imos", 3, ""), ("amos", 2, ""), ("ara", 2, ""),
    ("era", 2, ""), ("ira", 3, ""), ("ava", 2, ""), ("emos", 2, ""),
    ("ou", 2, ""), ("am", 2, ""), ("ado", 2, ""), ("ido", 3, ""),
    ("ar", 2, ""), ("er", 2, ""), ("ir", 3, ""), ("as", 2, ""),
    ("es", 2, ""), ("is", 3, ""), ("em", 2, ""), ("ei", 3, ""),
)

_PT_VOWEL = (("a", 3, ""), ("e", 3, ""), ("o", 3, ""))

_PT_GROUPS = (
    _PT_PLURAL, _PT_ADVERB, _PT_FEMININE, _PT_DEGREE, _PT_NOUN, _PT_VERB,
    _PT_VOWEL,
)


def _apply_pt_group(word: str, rules) -> str:
    best = None
    for suffix, min_stem, replacement in rules:
        if not word.endswith(suffix):
            continue
        if len(word) - len(suffix) < min_stem:
            continue
        if best is None or len(suffix) > len(best[0]):
            best = (suffix, replacement)
    if best is None:
        return word
    return word[: -len(best[0])] + best[1]


def portuguese_stem(word: str) -> str:
    """One pass of the rule groups, in RSLP order."""
    if len(word) <= 3:
        return word
    for group in _PT_GROUPS:
        reduced = _apply_pt_group(word, group)
        if reduced != word:
            word = reduced
        if len(word) <= 3:
            break
    return word


_STEMMERS = {"en": porter_stem, "pt": portuguese_stem}

_MAX_PASSES = 5


def stem(token: str, language: str = "en") -> str:
    """Stem to a fixpoint so repeated cleaning is a no-op."""
    try:
        one_pass = _STEMMERS[language]
    except KeyError:
        raise ValueError(f"no stemmer for language {language!r}") from None
    for _ in range(_MAX_PASSES):
        reduced = one_pass(token)
        if reduced == token:
            return token
        token = reduced
    return token
