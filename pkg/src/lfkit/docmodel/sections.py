"""Heading detection and section extents.

A line is a heading when it carries a numbering pattern ("ARTICLE 14",
"Section 12.3", bare "12.3", roman numerals) or is a short ALL-CAPS line.
A section runs from its heading to the next heading of equal or shallower
depth. Depth comes from the numbering (dot count + 1); unnumbered ALL-CAPS
headings are depth 1.
"""
from __future__ import annotations

import re

from .types import Section

_ARTICLE_RE = re.compile(
    r"^(?:ARTICLE|Article|ART\.?|Art\.?)\s+(?:\d+|[IVXLCDM]+)\b", re.UNICODE
)
_SECTION_RE = re.compile(r"^(?:SECTION|Section|SEC\.?|Sec\.?)\s+(\d+(?:\.\d+)*)\b")
_NUMBER_RE = re.compile(r"^(\d+(?:\.\d+)*)[.):]?(?:\s+\S.*)?$")
_ROMAN_RE = re.compile(
    r"^(M{0,3}(?:CM|CD|D?C{0,3})(?:XC|XL|L?X{0,3})(?:IX|IV|V?I{0,3}))\.?(?:\s+\S.*)?$"
)
MAX_HEADING_TOKENS = 8


def _heading_depth(line: str) -> int | None:
    """Depth of the heading this line introduces, or None."""
    stripped = line.strip()
    if not stripped:
        return None
    if _ARTICLE_RE.match(stripped):
        return 1
    m = _SECTION_RE.match(stripped)
    if m:
        return m.group(1).count(".") + 1
    m = _NUMBER_RE.match(stripped)
    if m:
        return m.group(1).count(".") + 1
    m = _ROMAN_RE.match(stripped)
    if m and m.group(1):
        return 1
    words = stripped.split()
    if len(words) <= MAX_HEADING_TOKENS:
        letters = [ch for ch in stripped if ch.isalpha()]
        if letters and all(ch.isupper() for ch in letters):
            return 1
    return None


def detect_sections(
    text: str, skip_spans: list[tuple[int, int]] | None = None
) -> list[Section]:
    """Sections from heading lines; a heading-free document is one section."""
    if not text:
        return []
    skip = sorted(skip_spans or [])
    skip_i = 0

    headings: list[tuple[int, int, int]] = []  # (line_start, line_end, depth)
    pos = 0
    for raw in text.split("\n"):
        line_start, line_end = pos, pos + len(raw)
        pos = line_end + 1
        while skip_i < len(skip) and skip[skip_i][1] < line_end:
            skip_i += 1
        if skip_i < len(skip) and skip[skip_i][0] <= line_start and line_end <= skip[skip_i][1]:
            continue
        depth = _heading_depth(raw)
        if depth is not None:
            headings.append((line_start, line_end, depth))

    if not headings:
        return [Section(0, len(text), 0, 0, 1)]

    sections = []
    for i, (hs, he, depth) in enumerate(headings):
        end = len(text)
        for js, _, jdepth in headings[i + 1 :]:
            if jdepth <= depth:
                end = js
                break
        sections.append(
            Section(start=hs, end=end, heading_start=hs, heading_end=he, depth=depth)
        )
    return sections
