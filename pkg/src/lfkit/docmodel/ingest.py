"""Document ingestion: plain text, pre-tokenized JSON, and corpus directories."""
from __future__ import annotations

import bisect
import json
from pathlib import Path

from .boilerplate import detect_headers_footers
from .sections import detect_sections
from .sentences import segment_sentences
from .tagger import tag_tokens
from .tokenizer import token_shape, tokenize
from .types import DocmodelError, Document, Sentence, Token

DEFAULT_PAGE_MARKER = "\f"


class PretokenizedError(DocmodelError):
    """Pre-tokenized payload failed validation."""

    def __init__(self, message: str, token_index: int | None = None):
        super().__init__(message)
        self.token_index = token_index


def _find_markers(raw: str, marker: str) -> list[tuple[int, int]]:
    if not marker:
        return []
    spans = []
    pos = 0
    while True:
        hit = raw.find(marker, pos)
        if hit < 0:
            return spans
        spans.append((hit, hit + len(marker)))
        pos = hit + len(marker)


def ingest_text(
    doc_id: str, raw: str, page_break_marker: str = DEFAULT_PAGE_MARKER
) -> Document:
    """Build a fully enriched Document from raw text.

    Pure function of its arguments: tokenize, mark repeated header/footer
    lines, segment sentences (boilerplate-invisible), detect sections, tag.
    """
    if not doc_id:
        raise DocmodelError("doc_id must be non-empty")
    marker_spans = _find_markers(raw, page_break_marker)

    pages = [0] + [e for _, e in marker_spans]
    page_bounds = [(pages[i], marker_spans[i][0] if i < len(marker_spans) else len(raw))
                   for i in range(len(pages))]

    tokens: list[Token] = []
    for start, end in page_bounds:
        tokens.extend(tokenize(raw[start:end], offset=start))
    for t in tokens:
        t.page_index = bisect.bisect_right(pages, t.start) - 1

    hf_spans = detect_headers_footers(
        [raw[s:e] for s, e in page_bounds], [s for s, _ in page_bounds]
    )
    _mark_boilerplate(tokens, hf_spans)

    sentences = segment_sentences(raw, tokens, skip_spans=hf_spans + marker_spans)
    sections = detect_sections(raw, skip_spans=hf_spans)
    tag_tokens(tokens)

    return Document(
        doc_id=doc_id,
        text=raw,
        pages=pages,
        tokens=tokens,
        sentences=sentences,
        sections=sections,
        header_footer_spans=list(hf_spans),
    )


def _mark_boilerplate(tokens: list[Token], spans: list[tuple[int, int]]) -> None:
    spans = sorted(spans)
    si = 0
    for t in tokens:  # tokens and spans are both offset-ordered
        while si < len(spans) and spans[si][1] <= t.start:
            si += 1
        if si < len(spans) and spans[si][0] < t.end:
            t.boilerplate = True


_TOKEN_FIELDS = {"start", "end", "pos", "ner"}


def load_pretokenized(doc_id: str, payload: dict) -> Document:
    """Document from externally tokenized/tagged JSON; layers not supplied
    are derived. Supplied pos/ner tags are kept verbatim and matchable."""
    if not doc_id:
        raise DocmodelError("doc_id must be non-empty")
    if payload.get("doc_id") not in (None, doc_id):
        raise PretokenizedError(
            f"payload doc_id {payload.get('doc_id')!r} does not match {doc_id!r}"
        )
    text = payload.get("text")
    if not isinstance(text, str):
        raise PretokenizedError("payload missing text")

    pages = payload.get("pages") or [0]
    if pages[0] != 0 or pages != sorted(pages) or pages[-1] > len(text):
        raise PretokenizedError(f"invalid page offsets: {pages}")

    raw_tokens = payload.get("tokens")
    if not isinstance(raw_tokens, list):
        raise PretokenizedError("payload missing tokens")
    tokens: list[Token] = []
    prev_end = 0
    for idx, entry in enumerate(raw_tokens):
        unknown = set(entry) - _TOKEN_FIELDS
        if unknown:
            raise PretokenizedError(
                f"token {idx}: unknown tag field {sorted(unknown)}", token_index=idx
            )
        try:
            start, end = int(entry["start"]), int(entry["end"])
        except (KeyError, TypeError, ValueError):
            raise PretokenizedError(f"token {idx}: bad start/end", token_index=idx)
        if not (0 <= start < end <= len(text)):
            raise PretokenizedError(
                f"token {idx}: range {start}:{end} out of bounds", token_index=idx
            )
        if start < prev_end:
            raise PretokenizedError(
                f"token {idx}: overlaps previous token", token_index=idx
            )
        prev_end = end
        surface = text[start:end]
        tokens.append(
            Token(
                start=start,
                end=end,
                surface=surface,
                lower=surface.lower(),
                shape=token_shape(surface),
                pos=str(entry.get("pos") or ""),
                ner=str(entry.get("ner") or ""),
                page_index=bisect.bisect_right(pages, start) - 1,
            )
        )

    raw_sentences = payload.get("sentences")
    if raw_sentences is not None:
        # supplied sentences are trusted verbatim; no boilerplate detection
        hf_spans: list[tuple[int, int]] = []
        sentences = _sentences_from_payload(raw_sentences, tokens)
    else:
        page_bounds = [
            (pages[i], pages[i + 1] if i + 1 < len(pages) else len(text))
            for i in range(len(pages))
        ]
        hf_spans = detect_headers_footers(
            [text[s:e] for s, e in page_bounds], [s for s, _ in page_bounds]
        )
        _mark_boilerplate(tokens, hf_spans)
        sentences = segment_sentences(text, tokens, skip_spans=hf_spans)

    sections = detect_sections(text, skip_spans=hf_spans)
    tag_tokens(tokens)

    doc = Document(
        doc_id=doc_id,
        text=text,
        pages=list(pages),
        tokens=tokens,
        sentences=sentences,
        sections=sections,
        header_footer_spans=hf_spans,
    )
    doc.validate()
    return doc


def _sentences_from_payload(raw: list, tokens: list[Token]) -> list[Sentence]:
    sentences = []
    prev_last = -1
    for si, entry in enumerate(raw):
        try:
            first, last = int(entry["start_token"]), int(entry["end_token"])
        except (KeyError, TypeError, ValueError):
            raise PretokenizedError(f"sentence {si}: bad token range")
        if not (0 <= first <= last < len(tokens)):
            raise PretokenizedError(f"sentence {si}: token range out of bounds")
        if first <= prev_last:
            raise PretokenizedError(f"sentence {si}: overlaps previous sentence")
        prev_last = last
        for i in range(first, last + 1):
            tokens[i].sentence_index = si
        sentences.append(
            Sentence(
                start=tokens[first].start,
                end=tokens[last].end,
                first_token=first,
                last_token=last,
            )
        )
    return sentences


def load_corpus(directory: str | Path) -> list[Document]:
    """All documents under ``directory`` (<doc_id>.txt or <doc_id>.json),
    sorted by doc_id. Duplicate ids are rejected."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {directory}")
    docs: dict[str, Document] = {}
    for path in sorted(directory.iterdir()):
        if path.suffix not in (".txt", ".json"):
            continue
        doc_id = path.stem
        if doc_id in docs:
            raise DocmodelError(f"duplicate doc_id in corpus: {doc_id}")
        if path.suffix == ".txt":
            docs[doc_id] = ingest_text(doc_id, path.read_text(encoding="utf-8"))
        else:
            with open(path, encoding="utf-8") as f:
                docs[doc_id] = load_pretokenized(doc_id, json.load(f))
    return [docs[k] for k in sorted(docs)]
