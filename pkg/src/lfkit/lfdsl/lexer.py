"""Lexer for ruleset files. Total: bad input yields ERROR tokens, never raises."""
from __future__ import annotations

from dataclasses import dataclass

PUNCT = set("{}()[]:,=|?")

KIND_NAME = "NAME"
KIND_INT = "INT"
KIND_STR = "STR"
KIND_EOF = "EOF"
KIND_ERROR = "ERROR"


@dataclass(frozen=True)
class Tok:
    kind: str  # NAME | INT | STR | EOF | ERROR | a punct char
    value: str
    line: int  # 1-based
    col: int  # 1-based

    def describe(self) -> str:
        if self.kind == KIND_EOF:
            return "end of input"
        if self.kind in (KIND_NAME, KIND_INT, KIND_STR, KIND_ERROR):
            return f"{self.value!r}"
        return f"'{self.kind}'"


def _is_name_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_name_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def lex(source: str) -> list[Tok]:
    toks: list[Tok] = []
    line, col = 1, 1
    i, n = 0, len(source)

    def advance(text: str) -> None:
        nonlocal line, col
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    while i < n:
        ch = source[i]
        if ch.isspace():
            advance(ch)
            i += 1
            continue
        if ch == "#":  # line comment
            j = source.find("\n", i)
            j = n if j < 0 else j
            advance(source[i:j])
            i = j
            continue
        start_line, start_col = line, col
        if _is_name_start(ch):
            j = i + 1
            while j < n and _is_name_char(source[j]):
                j += 1
            toks.append(Tok(KIND_NAME, source[i:j], start_line, start_col))
            advance(source[i:j])
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            toks.append(Tok(KIND_INT, source[i:j], start_line, start_col))
            advance(source[i:j])
            i = j
            continue
        if ch == '"':
            j = i + 1
            buf: list[str] = []
            closed = False
            while j < n:
                c = source[j]
                if c == "\\" and j + 1 < n and source[j + 1] in ('"', "\\"):
                    buf.append(source[j + 1])
                    j += 2
                    continue
                if c == '"':
                    closed = True
                    j += 1
                    break
                if c == "\n":
                    break
                buf.append(c)
                j += 1
            if closed:
                toks.append(Tok(KIND_STR, "".join(buf), start_line, start_col))
            else:
                toks.append(
                    Tok(KIND_ERROR, "unterminated string", start_line, start_col)
                )
            advance(source[i:j])
            i = j
            continue
        if ch in PUNCT:
            toks.append(Tok(ch, ch, start_line, start_col))
            advance(ch)
            i += 1
            continue
        toks.append(Tok(KIND_ERROR, f"unexpected character {ch!r}", start_line, start_col))
        advance(ch)
        i += 1

    toks.append(Tok(KIND_EOF, "", line, col))
    return toks


def escape_string(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
