"""Evaluate a compiled labeling function over a document.

Per window (sentence, leaf section, or whole document): guards first as a
cheap pre-filter, then a left-to-right scan with greedy backtracking; after
a match the scan resumes at the token following it, so one function's
matches never overlap. Boilerplate tokens are invisible to matching, but
all offsets refer to the original text.
"""
from __future__ import annotations

from ..docmodel import CLAUSE, Document, Token
from ..lfdsl import SCOPE_DOCUMENT, SCOPE_SECTION, SCOPE_SENTENCE
from .compiler import OP_ANY, OP_JMP, OP_MATCH, OP_PRED, OP_SAVE, OP_SPLIT, CompiledGuard, CompiledLF
from .types import DEFAULT_BUDGET, BudgetExceeded, CaptureSpan, EngineError, Match


class _Budget(Exception):
    pass


def windows_for(clf: CompiledLF, doc: Document):
    """Yield (window_index, token_list, window_range) for the LF's scope."""
    if clf.scope == SCOPE_SENTENCE:
        for si, sent in enumerate(doc.sentences):
            idxs = doc.sentence_token_indices(si)
            if idxs:
                yield si, [doc.tokens[i] for i in idxs], (sent.start, sent.end)
    elif clf.scope == SCOPE_SECTION:
        for wi, sec in enumerate(doc.leaf_sections()):
            idxs = doc.tokens_in_span(sec.start, sec.end)
            if idxs:
                yield wi, [doc.tokens[i] for i in idxs], (sec.start, sec.end)
    elif clf.scope == SCOPE_DOCUMENT:
        tokens = doc.effective_tokens()
        if tokens:
            yield 0, tokens, (0, len(doc.text))
    else:
        raise EngineError(f"unknown scope {clf.scope!r}")


def _phrase_at(phrase, tokens, start: int) -> bool:
    if start + len(phrase) > len(tokens):
        return False
    for k, rx in enumerate(phrase):
        if not rx.fullmatch(tokens[start + k].surface):
            return False
    return True


def guard_satisfied(guard: CompiledGuard, tokens: list[Token]) -> bool:
    if guard.kind == "starts":
        hit = any(_phrase_at(p, tokens, 0) for p in guard.phrases)
    else:
        hit = any(
            _phrase_at(p, tokens, i)
            for p in guard.phrases
            for i in range(len(tokens) - len(p) + 1)
        )
    return hit != guard.negated


def _run_vm(
    program: list[tuple],
    predicates,
    tokens: list[Token],
    start: int,
    steps: list[int],
    budget: int,
):
    """First (greedy) match from ``start``: (end, saves) or None.

    Explicit backtrack stack; ``steps`` is the per-window step counter.
    """
    n = len(tokens)
    stack = [(0, start, ())]
    used = steps[0]
    while stack:
        pc, pos, saves = stack.pop()
        while True:
            used += 1
            if used > budget:
                steps[0] = used
                raise _Budget()
            op = program[pc]
            code = op[0]
            if code == OP_PRED:
                if pos < n and predicates[op[1]](tokens[pos]):
                    pos += 1
                    pc += 1
                    continue
                break
            if code == OP_ANY:
                if pos < n:
                    pos += 1
                    pc += 1
                    continue
                break
            if code == OP_SPLIT:
                stack.append((op[2], pos, saves))
                pc = op[1]
                continue
            if code == OP_SAVE:
                saves = saves + ((op[1], pos),)
                pc += 1
                continue
            if code == OP_JMP:
                pc = op[1]
                continue
            # OP_MATCH
            steps[0] = used
            return pos, saves
    steps[0] = used
    return None


def _captures_from_saves(
    clf: CompiledLF, tokens: list[Token], saves
) -> list[CaptureSpan]:
    slots: dict[int, int] = {}
    for slot, pos in saves:
        slots[slot] = pos  # later writes win: repeats keep the last iteration
    spans = []
    for i, name in enumerate(clf.slot_names):
        s, e = slots.get(2 * i), slots.get(2 * i + 1)
        if s is None or e is None or e <= s:
            continue  # capture not entered, or matched zero tokens
        spans.append(
            CaptureSpan(
                name=name,
                concept_id=clf.captures[name],
                start=tokens[s].start,
                end=tokens[e - 1].end,
            )
        )
    spans.sort(key=lambda c: (c.start, c.end, c.name))
    return spans


def match_window(
    clf: CompiledLF,
    doc_id: str,
    window_index: int,
    tokens: list[Token],
    window_range: tuple[int, int],
    budget: int,
) -> list[Match]:
    """All matches in one window; raises _Budget when the step budget blows."""
    for guard in clf.guards:
        if not guard_satisfied(guard, tokens):
            return []
    matches: list[Match] = []
    steps = [0]
    i, n = 0, len(tokens)
    program, predicates = clf.program, clf.predicates
    while i + clf.min_match_len <= n:
        hit = _run_vm(program, predicates, tokens, i, steps, budget)
        if hit is None:
            i += 1
            continue
        end, saves = hit
        if end == i:  # zero-length: cannot happen for validated LFs
            i += 1
            continue
        captures = _captures_from_saves(clf, tokens, saves)
        if not captures:
            i += 1
            continue
        start_off, end_off = tokens[i].start, tokens[end - 1].end
        clause_expanded = False
        if clf.scope == SCOPE_SECTION:
            expanded = []
            for c in captures:
                if clf.concept_kinds.get(c.concept_id) == CLAUSE:
                    clause_expanded = True
                    expanded.append(
                        CaptureSpan(c.name, c.concept_id, window_range[0], window_range[1])
                    )
                else:
                    expanded.append(c)
            if clause_expanded:
                captures = expanded
                start_off = min(start_off, window_range[0])
                end_off = max(end_off, window_range[1])
        matches.append(
            Match(
                doc_id=doc_id,
                lf_name=clf.lf_name,
                window_index=window_index,
                start=start_off,
                end=end_off,
                captures=tuple(captures),
            )
        )
        if clause_expanded:
            # the match already covers the whole window; a second one would
            # duplicate it and break per-LF disjointness
            break
        i = end
    return matches


def match_document(
    clf: CompiledLF,
    doc: Document,
    *,
    budget: int = DEFAULT_BUDGET,
    diagnostics: list[BudgetExceeded] | None = None,
) -> list[Match]:
    """Matches of one compiled LF over one document.

    A window that exhausts the backtracking budget contributes nothing and
    is recorded in ``diagnostics``; evaluation always continues.
    """
    out: list[Match] = []
    for wi, tokens, wrange in windows_for(clf, doc):
        try:
            out.extend(match_window(clf, doc.doc_id, wi, tokens, wrange, budget))
        except _Budget:
            if diagnostics is not None:
                diagnostics.append(
                    BudgetExceeded(
                        doc_id=doc.doc_id,
                        lf_name=clf.lf_name,
                        scope=clf.scope,
                        window_index=wi,
                        budget=budget,
                    )
                )
    return out
