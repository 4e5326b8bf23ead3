"""Canonical pretty-printer; parse(format_lf(lf)) reproduces the AST."""
from __future__ import annotations

from .ast import (
    Capture,
    Group,
    Guard,
    LabelingFunction,
    PatternNode,
    Quantified,
    TokenClass,
    Wildcard,
    WordLit,
)
from .lexer import escape_string


def _format_node(node: PatternNode) -> str:
    if isinstance(node, WordLit):
        return escape_string(node.regex)
    if isinstance(node, Wildcard):
        return "[]"
    if isinstance(node, TokenClass):
        inner = ", ".join(f"{attr}={escape_string(v)}" for attr, v in node.tests)
        return f"[{inner}]"
    if isinstance(node, Group):
        return "(" + _format_seq(node.children) + ")"
    if isinstance(node, Capture):
        return f"{node.name}:(" + _format_seq(node.children) + ")"
    if isinstance(node, Quantified):
        child = node.child
        # name:(...){m,M} parses to Quantified(Group((Capture,)), m, M);
        # print that shape back in capture form
        if (
            isinstance(child, Group)
            and len(child.children) == 1
            and isinstance(child.children[0], Capture)
        ):
            body = _format_node(child.children[0])
        else:
            body = _format_node(child)
        return f"{body}{{{node.min},{node.max}}}"
    raise TypeError(f"not a pattern node: {node!r}")


def _format_seq(children: tuple[PatternNode, ...]) -> str:
    return " ".join(_format_node(c) for c in children)


def _format_guard(guard: Guard) -> str:
    alts = " | ".join(escape_string(a) for a in guard.alternatives)
    negated = "not " if guard.negated else ""
    return f"require {negated}{guard.kind}({alts})"


def format_lf(lf: LabelingFunction) -> str:
    """One canonical textual form: explicit priority and scope, `?` printed
    as {0,1}, guard-free functions on a single line."""
    head = f"lf {lf.name} for {lf.concept_id} priority {lf.priority} scope {lf.scope}"
    body = f"match: {_format_seq(lf.pattern.children)}"
    if not lf.guards:
        return f"{head} {{ {body} }}"
    lines = [f"{head} {{"]
    for guard in lf.guards:
        lines.append(f"  {_format_guard(guard)}")
    lines.append(f"  {body}")
    lines.append("}")
    return "\n".join(lines)


def format_ruleset(lfs: list[LabelingFunction]) -> str:
    return "\n\n".join(format_lf(lf) for lf in lfs) + "\n"
