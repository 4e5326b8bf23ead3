"""Recursive-descent parser for rulesets.

Total: every failure becomes a Diagnostic with line, column, and the
expected-token set; after an error the parser skips ahead to the next
``lf`` keyword and keeps going, so one bad function does not hide the rest.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (
    CLASS_ATTRS,
    DEFAULT_PRIORITY,
    GUARD_CONTAINS,
    GUARD_STARTS,
    MAX_QUANT,
    SCOPES,
    Capture,
    Diagnostic,
    Group,
    Guard,
    LabelingFunction,
    PatternNode,
    Quantified,
    TokenClass,
    Wildcard,
    WordLit,
)
from .lexer import KIND_EOF, KIND_ERROR, KIND_INT, KIND_NAME, KIND_STR, Tok, lex


@dataclass
class ParseResult:
    functions: list[LabelingFunction] = field(default_factory=list)
    errors: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


class RulesetSyntaxError(ValueError):
    """Raised by parse_ruleset_strict when the source has syntax errors."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.format() for d in diagnostics))
        self.diagnostics = diagnostics


class _Err(Exception):
    def __init__(self, message: str, tok: Tok, expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.message = message
        self.tok = tok
        self.expected = expected


class _Parser:
    def __init__(self, toks: list[Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Tok:
        return self.toks[self.pos]

    def next(self) -> Tok:
        tok = self.toks[self.pos]
        if tok.kind != KIND_EOF:
            self.pos += 1
        return tok

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def expect(self, kind: str, value: str | None = None) -> Tok:
        tok = self.peek()
        if tok.kind == KIND_ERROR:
            raise _Err(tok.value, tok)
        if not self.at(kind, value):
            want = value if value is not None else kind
            raise _Err(
                f"expected {want!r}, found {tok.describe()}", tok, expected=(want,)
            )
        return self.next()

    def keyword(self) -> str | None:
        tok = self.peek()
        return tok.value if tok.kind == KIND_NAME else None

    # grammar -----------------------------------------------------------

    def ruleset(self) -> ParseResult:
        result = ParseResult()
        names: dict[str, int] = {}
        while not self.at(KIND_EOF):
            if not self.at(KIND_NAME, "lf"):
                tok = self.next()
                result.errors.append(
                    Diagnostic(
                        "error",
                        f"expected 'lf', found {tok.describe()}",
                        tok.line,
                        tok.col,
                        expected=("lf",),
                    )
                )
                self._recover()
                continue
            start_tok = self.peek()
            try:
                lf = self.labeling_function()
            except _Err as err:
                result.errors.append(
                    Diagnostic(
                        "error", err.message, err.tok.line, err.tok.col,
                        expected=err.expected,
                    )
                )
                self._recover()
                continue
            if lf.name in names:
                result.errors.append(
                    Diagnostic(
                        "error",
                        f"duplicate labeling function name {lf.name!r}",
                        start_tok.line,
                        start_tok.col,
                        source=lf.name,
                    )
                )
                continue
            names[lf.name] = len(result.functions)
            result.functions.append(lf)
        return result

    def _recover(self) -> None:
        depth = 0
        while not self.at(KIND_EOF):
            tok = self.peek()
            if tok.kind == "{":
                depth += 1
            elif tok.kind == "}":
                depth = max(0, depth - 1)
            elif tok.kind == KIND_NAME and tok.value == "lf" and depth == 0:
                return
            self.next()

    def labeling_function(self) -> LabelingFunction:
        self.expect(KIND_NAME, "lf")
        name = self.expect(KIND_NAME).value
        self.expect(KIND_NAME, "for")
        concept = self.expect(KIND_NAME).value
        priority = DEFAULT_PRIORITY
        scope = "sentence"
        if self.at(KIND_NAME, "priority"):
            self.next()
            tok = self.expect(KIND_INT)
            priority = int(tok.value)
            if priority < 1:
                raise _Err("priority must be >= 1", tok)
        if self.at(KIND_NAME, "scope"):
            self.next()
            tok = self.expect(KIND_NAME)
            if tok.value not in SCOPES:
                raise _Err(
                    f"unknown scope {tok.value!r}", tok, expected=SCOPES
                )
            scope = tok.value
        self.expect("{")
        guards = []
        while self.at(KIND_NAME, "require"):
            guards.append(self.guard())
        self.expect(KIND_NAME, "match")
        self.expect(":")
        seq = self.sequence()
        self.expect("}")
        return LabelingFunction(
            name=name,
            concept_id=concept,
            pattern=Group(tuple(seq)),
            guards=tuple(guards),
            priority=priority,
            scope=scope,
        )

    def guard(self) -> Guard:
        self.expect(KIND_NAME, "require")
        negated = False
        if self.at(KIND_NAME, "not"):
            self.next()
            negated = True
        tok = self.expect(KIND_NAME)
        if tok.value not in (GUARD_STARTS, GUARD_CONTAINS):
            raise _Err(
                f"expected 'starts' or 'contains', found {tok.describe()}",
                tok,
                expected=(GUARD_STARTS, GUARD_CONTAINS),
            )
        kind = tok.value
        self.expect("(")
        alts = [self.expect(KIND_STR).value]
        while self.at("|"):
            self.next()
            alts.append(self.expect(KIND_STR).value)
        self.expect(")")
        return Guard(kind=kind, alternatives=tuple(alts), negated=negated)

    def sequence(self) -> list[PatternNode]:
        items = [self.item()]
        while True:
            tok = self.peek()
            if tok.kind in (")", "}", KIND_EOF):
                return items
            items.append(self.item())

    def item(self) -> PatternNode:
        atom, is_capture = self.atom()
        quant = self.quantifier()
        if quant is None:
            return atom
        lo, hi = quant
        if is_capture:
            # a quantifier never wraps a capture directly; group it
            atom = Group((atom,))
        return Quantified(atom, lo, hi)

    def atom(self) -> tuple[PatternNode, bool]:
        tok = self.peek()
        if tok.kind == KIND_STR:
            self.next()
            return WordLit(tok.value), False
        if tok.kind == "[":
            return self.token_class(), False
        if tok.kind == "(":
            self.next()
            seq = self.sequence()
            self.expect(")")
            return Group(tuple(seq)), False
        if tok.kind == KIND_NAME:
            name = self.next().value
            self.expect(":")
            self.expect("(")
            seq = self.sequence()
            self.expect(")")
            return Capture(name, tuple(seq)), True
        if tok.kind == KIND_ERROR:
            raise _Err(tok.value, tok)
        raise _Err(
            f"expected a pattern item, found {tok.describe()}",
            tok,
            expected=("string", "[", "(", "name"),
        )

    def token_class(self) -> PatternNode:
        self.expect("[")
        if self.at("]"):
            self.next()
            return Wildcard()
        tests = [self.class_test()]
        while self.at(","):
            self.next()
            tests.append(self.class_test())
        self.expect("]")
        return TokenClass(tuple(tests))

    def class_test(self) -> tuple[str, str]:
        tok = self.expect(KIND_NAME)
        if tok.value not in CLASS_ATTRS:
            raise _Err(
                f"unknown token attribute {tok.value!r}", tok, expected=CLASS_ATTRS
            )
        self.expect("=")
        value = self.expect(KIND_STR).value
        return (tok.value, value)

    def quantifier(self) -> tuple[int, int] | None:
        if self.at("?"):
            self.next()
            return (0, 1)
        if not self.at("{"):
            return None
        self.next()
        lo_tok = self.expect(KIND_INT)
        self.expect(",")
        hi_tok = self.expect(KIND_INT)
        self.expect("}")
        lo, hi = int(lo_tok.value), int(hi_tok.value)
        if not (0 <= lo <= hi <= MAX_QUANT):
            raise _Err(
                f"quantifier bounds {{{lo},{hi}}} out of range (0 <= min <= max <= {MAX_QUANT})",
                lo_tok,
            )
        return (lo, hi)


def parse_ruleset(source: str) -> ParseResult:
    """Parse a ruleset; never raises. Errors carry line/col/expected set."""
    return _Parser(lex(source)).ruleset()


def parse_ruleset_strict(source: str) -> list[LabelingFunction]:
    """Parse a ruleset, raising RulesetSyntaxError when anything is wrong."""
    result = parse_ruleset(source)
    if result.errors:
        raise RulesetSyntaxError(result.errors)
    return result.functions
