"""Repeated header/footer line detection.

A line in the top or bottom zone of a page is boilerplate when its
normalized form (digits collapsed, whitespace collapsed, case-folded)
repeats in the same zone on enough pages. Poorly scanned corpora repeat
headers imperfectly, hence the normalization and the sub-1.0 threshold.
"""
from __future__ import annotations

import re
from collections import defaultdict
from typing import Sequence

DEFAULT_ZONE_LINES = 3
DEFAULT_THRESHOLD = 0.6

_DIGITS_RE = re.compile(r"\d+")
_WS_RE = re.compile(r"\s+")


def normalize_line(line: str) -> str:
    return _WS_RE.sub(" ", _DIGITS_RE.sub("#", line)).strip().casefold()


def _page_lines(text: str, base: int) -> list[tuple[int, int, str]]:
    """Non-blank lines as (abs_start, abs_end, content); end excludes newline."""
    lines = []
    pos = 0
    for raw in text.split("\n"):
        if raw.strip():
            lines.append((base + pos, base + pos + len(raw), raw))
        pos += len(raw) + 1
    return lines


def detect_headers_footers(
    page_texts: Sequence[str],
    page_starts: Sequence[int] | None = None,
    *,
    zone_lines: int = DEFAULT_ZONE_LINES,
    threshold: float = DEFAULT_THRESHOLD,
) -> list[tuple[int, int]]:
    """Char ranges (document coordinates) of repeated header/footer lines.

    Single-page documents never produce marks: with one page the repetition
    threshold is meaningless.
    """
    n_pages = len(page_texts)
    if n_pages < 2:
        return []
    if page_starts is None:
        starts = []
        acc = 0
        for text in page_texts:
            starts.append(acc)
            acc += len(text)
        page_starts = starts

    # zone -> normalized form -> set of page indices containing it
    seen: dict[tuple[str, str], set[int]] = defaultdict(set)
    zones_per_page: list[list[tuple[str, int, int, str]]] = []
    for pi, text in enumerate(page_texts):
        lines = _page_lines(text, page_starts[pi])
        zoned: list[tuple[str, int, int, str]] = []
        for s, e, content in lines[:zone_lines]:
            zoned.append(("top", s, e, normalize_line(content)))
        for s, e, content in lines[-zone_lines:]:
            zoned.append(("bottom", s, e, normalize_line(content)))
        zones_per_page.append(zoned)
        for zone, _, _, norm in zoned:
            seen[(zone, norm)].add(pi)

    marked: set[tuple[int, int]] = set()
    for zoned in zones_per_page:
        for zone, s, e, norm in zoned:
            if len(seen[(zone, norm)]) / n_pages >= threshold - 1e-12:
                marked.add((s, e))
    return sorted(marked)
