"""Offset-faithful tokenizer.

Maximal runs of letters/digits form one token; every other non-whitespace
character is a token of its own. Gaps are pure whitespace, so joining
surfaces with the skipped gaps reconstructs the input exactly.
"""
from __future__ import annotations

import re

from .types import Token

# letter/digit runs first, then any single non-space char (incl. underscore)
_TOKEN_RE = re.compile(r"[^\W_]+|\S")


def token_shape(surface: str) -> str:
    """Collapsed character-class signature: "Granite" -> "Xx", "2020" -> "d"."""
    out: list[str] = []
    for ch in surface:
        if ch.isdigit():
            cls = "d"
        elif ch.isalpha():
            cls = "X" if ch.isupper() else "x"
        else:
            cls = ch
        if not out or out[-1] != cls:
            out.append(cls)
    return "".join(out)


def tokenize(raw: str, offset: int = 0) -> list[Token]:
    """Tokens with ranges and surfaces only; tags are filled in later."""
    tokens = []
    # corpora repeat surfaces heavily; share the derived strings
    memo: dict[str, tuple[str, str]] = {}
    for m in _TOKEN_RE.finditer(raw):
        surface = m.group()
        derived = memo.get(surface)
        if derived is None:
            derived = (surface.lower(), token_shape(surface))
            memo[surface] = derived
        tokens.append(
            Token(
                start=offset + m.start(),
                end=offset + m.end(),
                surface=surface,
                lower=derived[0],
                shape=derived[1],
            )
        )
    return tokens
