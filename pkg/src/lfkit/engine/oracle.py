"""Reference matcher: exhaustive enumeration over small token streams.

Deliberately independent of the compiled engine: it walks the AST and
enumerates every (start, quantifier-count assignment) in greedy preference
order, then applies the same leftmost/resume-after-match rule. Slow and
only valid for small inputs; it exists to check the fast path.
"""
from __future__ import annotations

import re
from typing import Iterator

from ..docmodel import ConceptSchema, Token
from ..lfdsl import (
    Capture,
    Group,
    LabelingFunction,
    PatternNode,
    Quantified,
    TokenClass,
    Wildcard,
    WordLit,
)
from .types import CaptureSpan, Match, OracleSizeError

MAX_ORACLE_TOKENS = 16

_ATTRS = {
    "word": lambda t: t.surface,
    "lower": lambda t: t.lower,
    "pos": lambda t: t.pos,
    "ner": lambda t: t.ner,
    "shape": lambda t: t.shape,
}

_Caps = list[tuple[str, int, int]]


def _enum(node: PatternNode, tokens, pos: int) -> Iterator[tuple[int, _Caps]]:
    """Yield (end, captures) for every way node can match at pos, most
    greedy first."""
    n = len(tokens)
    if isinstance(node, WordLit):
        if pos < n and re.fullmatch(node.regex, tokens[pos].surface, re.IGNORECASE):
            yield pos + 1, []
    elif isinstance(node, Wildcard):
        if pos < n:
            yield pos + 1, []
    elif isinstance(node, TokenClass):
        if pos < n:
            t = tokens[pos]
            ok = True
            for attr, value in node.tests:
                flags = re.IGNORECASE if attr == "word" else 0
                if not re.fullmatch(value, _ATTRS[attr](t), flags):
                    ok = False
                    break
            if ok:
                yield pos + 1, []
    elif isinstance(node, Group):
        yield from _enum_seq(node.children, tokens, pos)
    elif isinstance(node, Capture):
        for end, caps in _enum_seq(node.children, tokens, pos):
            yield end, caps + [(node.name, pos, end)]
    elif isinstance(node, Quantified):
        yield from _enum_repeat(node.child, tokens, pos, node.min, node.max)
    else:
        raise TypeError(f"not a pattern node: {node!r}")


def _enum_seq(children, tokens, pos: int) -> Iterator[tuple[int, _Caps]]:
    if not children:
        yield pos, []
        return
    head, rest = children[0], children[1:]
    for mid, caps_a in _enum(head, tokens, pos):
        for end, caps_b in _enum_seq(rest, tokens, mid):
            yield end, caps_a + caps_b


def _enum_repeat(child, tokens, pos: int, lo: int, hi: int) -> Iterator[tuple[int, _Caps]]:
    if hi == 0:
        yield pos, []
        return
    # greedy: take another copy before stopping
    for mid, caps_a in _enum(child, tokens, pos):
        for end, caps_b in _enum_repeat(child, tokens, mid, max(0, lo - 1), hi - 1):
            yield end, caps_a + caps_b
    if lo == 0:
        yield pos, []


def _guards_hold(lf: LabelingFunction, tokens) -> bool:
    for guard in lf.guards:
        hit = False
        for alt in guard.alternatives:
            words = alt.split()
            if not words:
                continue
            positions = [0] if guard.kind == "starts" else range(
                len(tokens) - len(words) + 1
            )
            for i in positions:
                if i + len(words) <= len(tokens) and all(
                    re.fullmatch(w, tokens[i + k].surface, re.IGNORECASE)
                    for k, w in enumerate(words)
                ):
                    hit = True
                    break
            if hit:
                break
        if hit == guard.negated:
            return False
    return True


def brute_force_match(
    lf: LabelingFunction,
    tokens: list[Token],
    schema: ConceptSchema,
    doc_id: str = "oracle",
    window_index: int = 0,
) -> list[Match]:
    """Reference matches of ``lf`` treating ``tokens`` as a single window."""
    if len(tokens) > MAX_ORACLE_TOKENS:
        raise OracleSizeError(
            f"oracle bound is {MAX_ORACLE_TOKENS} tokens, got {len(tokens)}"
        )
    from ..lfdsl import resolve_captures

    concept_of = resolve_captures(lf, schema)
    if not _guards_hold(lf, tokens):
        return []

    matches: list[Match] = []
    i, n = 0, len(tokens)
    while i <= n:
        first = next(_enum(lf.pattern, tokens, i), None)
        if first is None:
            i += 1
            continue
        end, caps = first
        if end == i:
            i += 1
            continue
        by_name: dict[str, tuple[int, int]] = {}
        for name, s, e in caps:  # later entries win, matching the engine
            by_name[name] = (s, e)
        spans = [
            CaptureSpan(name, concept_of[name], tokens[s].start, tokens[e - 1].end)
            for name, (s, e) in by_name.items()
            if e > s
        ]
        if not spans:
            i += 1
            continue
        spans.sort(key=lambda c: (c.start, c.end, c.name))
        matches.append(
            Match(
                doc_id=doc_id,
                lf_name=lf.name,
                window_index=window_index,
                start=tokens[i].start,
                end=tokens[end - 1].end,
                captures=tuple(spans),
            )
        )
        i = end
    return matches
