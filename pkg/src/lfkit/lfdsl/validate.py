"""Static checks on parsed labeling functions against a concept schema."""
from __future__ import annotations

import re

from ..docmodel import ConceptSchema
from .ast import (
    Capture,
    Diagnostic,
    Group,
    LabelingFunction,
    PatternNode,
    Quantified,
    TokenClass,
    WordLit,
    iter_nodes,
    min_token_len,
)


class CaptureResolutionError(KeyError):
    pass


def resolve_capture(name: str, schema: ConceptSchema) -> str:
    """Map a capture name to a concept id.

    Exact concept ids win; otherwise a name like "amount" binds to the
    single concept id ending in "_amount". Anything else is unresolved.
    """
    if name in schema:
        return name
    suffix_hits = [c.concept_id for c in schema if c.concept_id.endswith("_" + name)]
    if len(suffix_hits) == 1:
        return suffix_hits[0]
    if len(suffix_hits) > 1:
        raise CaptureResolutionError(
            f"capture {name!r} is ambiguous: matches {sorted(suffix_hits)}"
        )
    raise CaptureResolutionError(f"capture {name!r} does not name a known concept")


def resolve_captures(lf: LabelingFunction, schema: ConceptSchema) -> dict[str, str]:
    return {name: resolve_capture(name, schema) for name in lf.capture_names()}


def _compilable(regex: str) -> bool:
    try:
        re.compile(regex)
        return True
    except re.error:
        return False


def _matches_empty(regex: str) -> bool:
    try:
        return re.fullmatch(regex, "", flags=re.IGNORECASE) is not None
    except re.error:
        return False


def _top_level_branches(regex: str) -> list[str]:
    branches, depth, buf = [], 0, []
    bracket = False
    for ch in regex:
        if bracket:
            buf.append(ch)
            if ch == "]":
                bracket = False
            continue
        if ch == "[":
            bracket = True
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        elif ch == "|" and depth == 0:
            branches.append("".join(buf))
            buf = []
            continue
        buf.append(ch)
    branches.append("".join(buf))
    return branches


def _pattern_regexes(node: PatternNode):
    for sub in iter_nodes(node):
        if isinstance(sub, WordLit):
            yield sub.regex
        elif isinstance(sub, TokenClass):
            for _, value in sub.tests:
                yield value


def validate(
    lfs: list[LabelingFunction], schema: ConceptSchema
) -> list[Diagnostic]:
    """Diagnostics for a ruleset; an empty list means valid.

    Errors: unknown/unresolvable concepts, capture-free patterns, patterns
    able to match zero tokens, nested captures, malformed regexes,
    duplicate names. Warnings: regexes that can match the empty string,
    unreachable (duplicate) alternatives.
    """
    diags: list[Diagnostic] = []
    seen_names: set[str] = set()
    for lf in lfs:
        if lf.name in seen_names:
            diags.append(
                Diagnostic(
                    "error",
                    f"duplicate labeling function name {lf.name!r}",
                    source=lf.name,
                )
            )
            continue
        seen_names.add(lf.name)

        def err(msg: str) -> None:
            diags.append(Diagnostic("error", msg, source=lf.name))

        def warn(msg: str) -> None:
            diags.append(Diagnostic("warning", msg, source=lf.name))

        if lf.concept_id not in schema:
            err(f"unknown concept {lf.concept_id!r}")
        captures = lf.capture_names()
        if not captures:
            err("pattern has no captures; it can never emit a label")
        for name in captures:
            try:
                resolve_capture(name, schema)
            except CaptureResolutionError as exc:
                err(str(exc))

        for node in iter_nodes(lf.pattern):
            if isinstance(node, Capture):
                for inner in node.children:
                    for sub in iter_nodes(inner):
                        if isinstance(sub, Capture):
                            err(
                                f"capture {sub.name!r} is nested inside capture {node.name!r}"
                            )
            if isinstance(node, Quantified) and isinstance(node.child, Capture):
                err(f"quantifier directly wraps capture {node.child.name!r}")

        bad_regex = False
        for regex in _pattern_regexes(lf.pattern):
            if not _compilable(regex):
                err(f"invalid regex {regex!r}")
                bad_regex = True
            elif _matches_empty(regex):
                warn(f"regex {regex!r} can match the empty string")
            branches = _top_level_branches(regex)
            dupes = {b for b in branches if branches.count(b) > 1}
            for b in sorted(dupes):
                warn(f"unreachable alternative {b!r} in {regex!r}")
        for guard in lf.guards:
            alts = list(guard.alternatives)
            for alt in alts:
                for word in alt.split():
                    if not _compilable(word):
                        err(f"invalid regex {word!r} in guard")
                        bad_regex = True
                    elif _matches_empty(word):
                        warn(f"guard regex {word!r} can match the empty string")
            dupes = {a for a in alts if alts.count(a) > 1}
            for a in sorted(dupes):
                warn(f"unreachable guard alternative {a!r}")

        if not bad_regex and min_token_len(lf.pattern) == 0:
            err("pattern can match zero tokens; every match must consume at least one")
    return diags
