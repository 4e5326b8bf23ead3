"""Sentence segmentation over the token stream.

Boundaries sit after sentence-final punctuation followed by a capitalized
token, and at blank-line paragraph breaks. Boilerplate (header/footer)
lines and page-break markers are invisible, so a sentence can continue
across a page boundary. Periods after single capital letters, known
abbreviations, or before numeric tokens do not break: legal numbering
("Art. 14", "No. 42") would otherwise shatter sentences.
"""
from __future__ import annotations

import re

from .types import Sentence, Token

_BLANK_LINE_RE = re.compile(r"\n[^\S\n]*\n")

FINAL_PUNCT = {".", "!", "?"}

# lowercase forms whose trailing period is not sentence-final
ABBREVIATIONS = {
    "no", "art", "arts", "sec", "secs", "mr", "mrs", "ms", "dr", "st",
    "jr", "sr", "vs", "etc", "inc", "ltd", "corp", "dept", "fig", "figs",
    "vol", "approx", "para", "pp", "p",
}


def _excise(text: str, start: int, end: int, spans: list[tuple[int, int]]) -> str:
    """Gap text with the given spans removed; each span swallows one
    immediately following newline so an excised line does not leave a
    phantom blank line behind."""
    out = []
    pos = start
    for s, e in spans:
        if e <= start or s >= end:
            continue
        s = max(s, start)
        if e < end and text[e] == "\n":
            e += 1
        out.append(text[pos:s])
        pos = max(pos, min(e, end))
    out.append(text[pos:end])
    return "".join(out)


def segment_sentences(
    text: str,
    tokens: list[Token],
    skip_spans: list[tuple[int, int]] | None = None,
) -> list[Sentence]:
    """Group effective tokens into sentences and stamp sentence_index.

    ``skip_spans`` are boilerplate and page-marker ranges to ignore when
    looking for paragraph breaks. Boilerplate tokens keep sentence_index -1.
    """
    skip_spans = sorted(skip_spans or [])
    eff = [i for i, t in enumerate(tokens) if not t.boilerplate]
    if not eff:
        return []

    def paragraph_break(prev: Token, nxt: Token) -> bool:
        if text.find("\n", prev.end, nxt.start) < 0:
            return False  # most gaps are spaces; skip the excision work
        gap = _excise(text, prev.end, nxt.start, skip_spans)
        return _BLANK_LINE_RE.search(gap) is not None

    def punct_break(prev_i: int, prev: Token, nxt: Token) -> bool:
        if prev.surface not in FINAL_PUNCT:
            return False
        if prev.surface == ".":
            if nxt.surface.isdigit():
                return False  # "No. 42", "Section 12. 3" style numbering
            if prev_i > 0:
                before = tokens[eff[prev_i - 1]]
                if len(before.surface) == 1 and before.surface.isupper():
                    return False
                if before.lower in ABBREVIATIONS:
                    return False
            return nxt.surface[0].isupper()
        return nxt.surface[0].isupper() or nxt.surface.isdigit()

    sentences: list[Sentence] = []
    group = [eff[0]]
    for k in range(1, len(eff)):
        prev, nxt = tokens[eff[k - 1]], tokens[eff[k]]
        if paragraph_break(prev, nxt) or punct_break(k - 1, prev, nxt):
            sentences.append(_close(tokens, group, len(sentences)))
            group = [eff[k]]
        else:
            group.append(eff[k])
    sentences.append(_close(tokens, group, len(sentences)))
    return sentences


def _close(tokens: list[Token], group: list[int], index: int) -> Sentence:
    for i in group:
        tokens[i].sentence_index = index
    return Sentence(
        start=tokens[group[0]].start,
        end=tokens[group[-1]].end,
        first_token=group[0],
        last_token=group[-1],
    )
