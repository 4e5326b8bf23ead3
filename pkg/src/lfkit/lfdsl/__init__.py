"""The labeling-function language: parse, validate, format."""

from .ast import (
    CLASS_ATTRS,
    DEFAULT_PRIORITY,
    GUARD_CONTAINS,
    GUARD_STARTS,
    MAX_QUANT,
    SCOPE_DOCUMENT,
    SCOPE_SECTION,
    SCOPE_SENTENCE,
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
    errors_only,
    iter_nodes,
    min_token_len,
)
from .formatter import format_lf, format_ruleset
from .parser import (
    ParseResult,
    RulesetSyntaxError,
    parse_ruleset,
    parse_ruleset_strict,
)
from .validate import (
    CaptureResolutionError,
    resolve_capture,
    resolve_captures,
    validate,
)

__all__ = [
    "CLASS_ATTRS",
    "Capture",
    "CaptureResolutionError",
    "DEFAULT_PRIORITY",
    "Diagnostic",
    "GUARD_CONTAINS",
    "GUARD_STARTS",
    "Group",
    "Guard",
    "LabelingFunction",
    "MAX_QUANT",
    "ParseResult",
    "PatternNode",
    "Quantified",
    "RulesetSyntaxError",
    "SCOPES",
    "SCOPE_DOCUMENT",
    "SCOPE_SECTION",
    "SCOPE_SENTENCE",
    "TokenClass",
    "Wildcard",
    "WordLit",
    "errors_only",
    "format_lf",
    "format_ruleset",
    "iter_nodes",
    "min_token_len",
    "parse_ruleset",
    "parse_ruleset_strict",
    "resolve_capture",
    "resolve_captures",
    "validate",
]
