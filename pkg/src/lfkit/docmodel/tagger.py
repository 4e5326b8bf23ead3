"""Built-in coarse POS/NER tagging.

Lexicon-driven and deterministic. External tags supplied through the
pre-tokenized ingestion format are preserved: the tagger only fills fields
that are still empty.
"""
from __future__ import annotations

from .types import (
    NER_DATE,
    NER_NONE,
    NER_ORG_SUFFIX,
    NER_TIME_UNIT,
    POS_NUM,
    POS_PUNCT,
    POS_WORD,
    Token,
)

# one..twenty plus the tens up to hundred; larger numbers must be digits
SPELLED_NUMBERS = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
    "seventeen", "eighteen", "nineteen", "twenty", "thirty", "forty",
    "fifty", "sixty", "seventy", "eighty", "ninety", "hundred",
}

TIME_UNITS = {
    "hour", "hours", "day", "days", "week", "weeks", "month", "months",
    "year", "years", "shift", "shifts",
}

# "pay period(s)" is a two-token unit; both tokens get TIME_UNIT
_PAY_HEAD = "pay"
_PAY_TAILS = {"period", "periods"}

ORG_SUFFIXES = {
    "inc", "llc", "ltd", "corp", "union", "local", "association", "brotherhood",
}

MONTHS = {
    "january", "february", "march", "april", "may", "june", "july", "august",
    "september", "october", "november", "december",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct",
    "nov", "dec",
}


def _is_alnum_run(surface: str) -> bool:
    return all(ch.isalnum() for ch in surface) and surface != ""


def _fill_pos(tokens: list[Token]) -> None:
    memo: dict[str, str] = {}
    for t in tokens:
        if t.pos:
            continue
        pos = memo.get(t.surface)
        if pos is None:
            if t.surface.isdigit() or t.lower in SPELLED_NUMBERS:
                pos = POS_NUM
            elif _is_alnum_run(t.surface):
                pos = POS_WORD
            else:
                pos = POS_PUNCT
            memo[t.surface] = pos
        t.pos = pos


def _date_spans(tokens: list[Token]) -> list[tuple[int, int]]:
    """Index ranges [i, j) of recognized date expressions."""
    spans = []
    n = len(tokens)
    i = 0
    while i < n:
        j = _match_month_date(tokens, i) or _match_slashed_date(tokens, i) or _match_iso_date(tokens, i)
        if j:
            spans.append((i, j))
            i = j
        else:
            i += 1
    return spans


def _match_month_date(tokens: list[Token], i: int) -> int | None:
    # month-name [.] day [,] year
    n = len(tokens)
    if i >= n or tokens[i].lower not in MONTHS:
        return None
    j = i + 1
    if j < n and tokens[j].surface == ".":
        j += 1
    if j >= n or not (tokens[j].surface.isdigit() and len(tokens[j].surface) <= 2):
        return None
    j += 1
    if j < n and tokens[j].surface == ",":
        j += 1
    if j < n and tokens[j].surface.isdigit() and len(tokens[j].surface) == 4:
        return j + 1
    return None


def _match_slashed_date(tokens: list[Token], i: int) -> int | None:
    # d/m/yyyy
    n = len(tokens)
    pattern = [(True, 2), (False, 0), (True, 2), (False, 0), (True, 4)]
    if i + len(pattern) > n:
        return None
    for k, (is_num, width) in enumerate(pattern):
        t = tokens[i + k]
        if is_num:
            if not (t.surface.isdigit() and len(t.surface) <= width):
                return None
            if width == 4 and len(t.surface) != 4:
                return None
        elif t.surface != "/":
            return None
    return i + len(pattern)


def _match_iso_date(tokens: list[Token], i: int) -> int | None:
    # yyyy-mm-dd
    n = len(tokens)
    if i + 5 > n:
        return None
    t = tokens[i : i + 5]
    if (
        t[0].surface.isdigit() and len(t[0].surface) == 4
        and t[1].surface == "-"
        and t[2].surface.isdigit() and len(t[2].surface) <= 2
        and t[3].surface == "-"
        and t[4].surface.isdigit() and len(t[4].surface) <= 2
    ):
        return i + 5
    return None


def _fill_ner(tokens: list[Token]) -> None:
    in_date = set()
    for i, j in _date_spans(tokens):
        in_date.update(range(i, j))
    pay_unit = set()
    for idx in range(1, len(tokens)):
        if tokens[idx].lower in _PAY_TAILS and tokens[idx - 1].lower == _PAY_HEAD:
            pay_unit.update((idx - 1, idx))
    for idx, t in enumerate(tokens):
        if t.ner:
            continue
        if idx in in_date:
            t.ner = NER_DATE
        elif t.lower in TIME_UNITS or idx in pay_unit:
            t.ner = NER_TIME_UNIT
        elif t.lower in ORG_SUFFIXES and t.surface[0].isupper():
            t.ner = NER_ORG_SUFFIX
        else:
            t.ner = NER_NONE


def tag_tokens(tokens: list[Token]) -> None:
    """Fill empty pos/ner fields in place; pre-set tags are kept verbatim."""
    _fill_pos(tokens)
    _fill_ner(tokens)
