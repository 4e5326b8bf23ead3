"""Compile labeling functions into matchable programs.

The pattern becomes a flat instruction list over token predicates; bounded
repeats are unrolled into optional copies, so matching needs no recursion
and a step budget can cut off pathological backtracking cleanly. Regexes
compile once here, never during matching.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from ..docmodel import ConceptSchema, Token
from ..lfdsl import (
    Capture,
    Group,
    Guard,
    LabelingFunction,
    PatternNode,
    Quantified,
    TokenClass,
    Wildcard,
    WordLit,
    min_token_len,
    resolve_captures,
)
from ..lfdsl.validate import CaptureResolutionError
from .types import CompileError

# instruction opcodes
OP_PRED = 0   # (OP_PRED, pred_index): predicate must hold on current token
OP_ANY = 1    # consume any token
OP_SPLIT = 2  # (OP_SPLIT, primary, fallback): try primary, backtrack to fallback
OP_JMP = 3    # (OP_JMP, target)
OP_SAVE = 4   # (OP_SAVE, slot): record current token position
OP_MATCH = 5

MAX_PROGRAM_SIZE = 200_000

Predicate = Callable[[Token], bool]

_ATTR_GETTERS = {
    "word": lambda t: t.surface,
    "lower": lambda t: t.lower,
    "pos": lambda t: t.pos,
    "ner": lambda t: t.ner,
    "shape": lambda t: t.shape,
}


@dataclass(frozen=True)
class CompiledGuard:
    kind: str  # starts | contains
    negated: bool
    # one entry per alternative: the phrase as a list of per-word matchers
    phrases: tuple[tuple[re.Pattern, ...], ...]


@dataclass
class CompiledLF:
    lf: LabelingFunction
    captures: dict[str, str]  # capture name -> concept id
    concept_kinds: dict[str, str]  # concept id -> ENTITY | CLAUSE
    guards: list[CompiledGuard]
    program: list[tuple]
    predicates: list[Predicate]
    slot_names: list[str]  # capture name for slot pair (2i, 2i+1)
    min_match_len: int

    @property
    def lf_name(self) -> str:
        return self.lf.name

    @property
    def priority(self) -> int:
        return self.lf.priority

    @property
    def scope(self) -> str:
        return self.lf.scope


def _compile_regex(regex: str, ignore_case: bool) -> re.Pattern:
    try:
        return re.compile(regex, re.IGNORECASE if ignore_case else 0)
    except re.error as exc:
        raise CompileError(f"regex {regex!r} failed to compile: {exc}") from exc


def _word_pred(rx: re.Pattern) -> Predicate:
    fullmatch = rx.fullmatch
    return lambda t: fullmatch(t.surface) is not None


def _class_pred(tests: list[tuple[Callable, re.Pattern]]) -> Predicate:
    if len(tests) == 1:
        getter, rx = tests[0]
        fullmatch = rx.fullmatch
        return lambda t: fullmatch(getter(t)) is not None
    return lambda t: all(rx.fullmatch(getter(t)) for getter, rx in tests)


class _Compiler:
    def __init__(self) -> None:
        self.program: list[tuple] = []
        self.predicates: list[Predicate] = []
        self.slot_names: list[str] = []

    def emit(self, *ins) -> int:
        if len(self.program) >= MAX_PROGRAM_SIZE:
            raise CompileError("pattern too large after repeat expansion")
        self.program.append(tuple(ins))
        return len(self.program) - 1

    def slot_for(self, name: str) -> int:
        if name not in self.slot_names:
            self.slot_names.append(name)
        return self.slot_names.index(name) * 2

    def node(self, node: PatternNode) -> None:
        if isinstance(node, WordLit):
            self.predicates.append(_word_pred(_compile_regex(node.regex, True)))
            self.emit(OP_PRED, len(self.predicates) - 1)
        elif isinstance(node, Wildcard):
            self.emit(OP_ANY)
        elif isinstance(node, TokenClass):
            tests = []
            for attr, value in node.tests:
                getter = _ATTR_GETTERS.get(attr)
                if getter is None:
                    raise CompileError(f"unknown token attribute {attr!r}")
                # word matches case-insensitively like word literals;
                # lower/pos/ner/shape values are case-significant
                tests.append((getter, _compile_regex(value, attr == "word")))
            if not tests:
                self.emit(OP_ANY)
            else:
                self.predicates.append(_class_pred(tests))
                self.emit(OP_PRED, len(self.predicates) - 1)
        elif isinstance(node, Group):
            for child in node.children:
                self.node(child)
        elif isinstance(node, Capture):
            slot = self.slot_for(node.name)
            self.emit(OP_SAVE, slot)
            for child in node.children:
                self.node(child)
            self.emit(OP_SAVE, slot + 1)
        elif isinstance(node, Quantified):
            if isinstance(node.child, Capture):
                raise CompileError("quantifier directly wraps a capture")
            for _ in range(node.min):
                self.node(node.child)
            splits = []
            for _ in range(node.max - node.min):
                splits.append(self.emit(OP_SPLIT, None, None))
                self.node(node.child)
            after = len(self.program)
            for pc in splits:
                self.program[pc] = (OP_SPLIT, pc + 1, after)
        else:
            raise CompileError(f"unknown pattern node {node!r}")


def compile_guard(guard: Guard) -> CompiledGuard:
    phrases = []
    for alt in guard.alternatives:
        words = alt.split()
        if not words:
            raise CompileError(f"empty guard phrase in {guard!r}")
        phrases.append(tuple(_compile_regex(w, True) for w in words))
    return CompiledGuard(kind=guard.kind, negated=guard.negated, phrases=tuple(phrases))


def compile_lf(lf: LabelingFunction, schema: ConceptSchema) -> CompiledLF:
    """Deterministic compilation of a validated labeling function."""
    try:
        captures = resolve_captures(lf, schema)
    except CaptureResolutionError as exc:
        raise CompileError(str(exc)) from exc
    if not captures:
        raise CompileError(f"{lf.name}: pattern has no captures")
    if lf.concept_id not in schema:
        raise CompileError(f"{lf.name}: unknown concept {lf.concept_id!r}")
    min_len = min_token_len(lf.pattern)
    if min_len < 1:
        raise CompileError(f"{lf.name}: pattern can match zero tokens")

    comp = _Compiler()
    comp.node(lf.pattern)
    comp.emit(OP_MATCH)

    kinds = {cid: schema.kind_of(cid) for cid in captures.values()}
    return CompiledLF(
        lf=lf,
        captures=captures,
        concept_kinds=kinds,
        guards=[compile_guard(g) for g in lf.guards],
        program=comp.program,
        predicates=comp.predicates,
        slot_names=comp.slot_names,
        min_match_len=min_len,
    )


def compile_ruleset(
    lfs: list[LabelingFunction], schema: ConceptSchema
) -> list[CompiledLF]:
    return [compile_lf(lf, schema) for lf in lfs]
