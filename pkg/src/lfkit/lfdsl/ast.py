"""AST for the labeling-function language."""
from __future__ import annotations

from dataclasses import dataclass, field

SCOPE_SENTENCE = "sentence"
SCOPE_SECTION = "section"
SCOPE_DOCUMENT = "document"
SCOPES = (SCOPE_SENTENCE, SCOPE_SECTION, SCOPE_DOCUMENT)

GUARD_STARTS = "starts"
GUARD_CONTAINS = "contains"

DEFAULT_PRIORITY = 100
MAX_QUANT = 64

CLASS_ATTRS = ("word", "lower", "pos", "ner", "shape")


@dataclass(frozen=True)
class Guard:
    kind: str  # starts | contains
    alternatives: tuple[str, ...]  # each a phrase: space-separated word regexes
    negated: bool = False


@dataclass(frozen=True)
class WordLit:
    regex: str


@dataclass(frozen=True)
class TokenClass:
    tests: tuple[tuple[str, str], ...]  # (attr, value regex)


@dataclass(frozen=True)
class Wildcard:
    pass


@dataclass(frozen=True)
class Group:
    children: tuple["PatternNode", ...]


@dataclass(frozen=True)
class Capture:
    name: str
    children: tuple["PatternNode", ...]


@dataclass(frozen=True)
class Quantified:
    child: "PatternNode"
    min: int
    max: int


PatternNode = WordLit | TokenClass | Wildcard | Group | Capture | Quantified


@dataclass(frozen=True)
class LabelingFunction:
    name: str
    concept_id: str
    pattern: Group  # root sequence
    guards: tuple[Guard, ...] = ()
    priority: int = DEFAULT_PRIORITY
    scope: str = SCOPE_SENTENCE

    def capture_names(self) -> list[str]:
        """Capture names in document order, first occurrence wins."""
        seen: list[str] = []

        def walk(node: PatternNode) -> None:
            if isinstance(node, Capture):
                if node.name not in seen:
                    seen.append(node.name)
                for c in node.children:
                    walk(c)
            elif isinstance(node, Group):
                for c in node.children:
                    walk(c)
            elif isinstance(node, Quantified):
                walk(node.child)

        walk(self.pattern)
        return seen


def min_token_len(node: PatternNode) -> int:
    """Smallest number of tokens the node can match."""
    if isinstance(node, (WordLit, TokenClass, Wildcard)):
        return 1
    if isinstance(node, (Group, Capture)):
        return sum(min_token_len(c) for c in node.children)
    if isinstance(node, Quantified):
        return node.min * min_token_len(node.child)
    raise TypeError(f"not a pattern node: {node!r}")


def iter_nodes(node: PatternNode):
    yield node
    if isinstance(node, (Group, Capture)):
        for c in node.children:
            yield from iter_nodes(c)
    elif isinstance(node, Quantified):
        yield from iter_nodes(node.child)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # error | warning
    message: str
    line: int = 0  # 1-based; 0 when not tied to a location
    col: int = 0
    source: str = ""  # labeling-function name when known
    expected: tuple[str, ...] = ()

    def format(self) -> str:
        loc = f"{self.line}:{self.col}: " if self.line else ""
        src = f"[{self.source}] " if self.source else ""
        return f"{loc}{self.severity}: {src}{self.message}"


def errors_only(diagnostics: list[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diagnostics if d.severity == "error"]
