"""Core document types: tokens, sentences, sections, concept schema."""
from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from pathlib import Path

POS_NUM = "NUM"
POS_WORD = "WORD"
POS_PUNCT = "PUNCT"
POS_OTHER = "OTHER"

NER_NONE = "NONE"
NER_DATE = "DATE"
NER_TIME_UNIT = "TIME_UNIT"
NER_ORG_SUFFIX = "ORG_SUFFIX"

ENTITY = "ENTITY"
CLAUSE = "CLAUSE"


class DocmodelError(ValueError):
    """Invalid document input (bad payload, duplicate id, broken invariant)."""


@dataclass(slots=True)
class Token:
    start: int
    end: int
    surface: str
    lower: str
    shape: str
    pos: str = ""
    ner: str = ""
    sentence_index: int = -1  # -1 while unassigned or for boilerplate tokens
    page_index: int = 0
    boilerplate: bool = False

    @property
    def range(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(slots=True)
class Sentence:
    start: int
    end: int
    first_token: int
    last_token: int  # inclusive index into Document.tokens

    @property
    def range(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(slots=True)
class Section:
    start: int
    end: int
    heading_start: int
    heading_end: int
    depth: int

    @property
    def range(self) -> tuple[int, int]:
        return (self.start, self.end)

    def contains(self, other: "Section") -> bool:
        if self is other:
            return False
        return (
            self.start <= other.start
            and other.end <= self.end
            and (self.start, self.end) != (other.start, other.end)
        )


@dataclass
class Document:
    doc_id: str
    text: str
    pages: list[int]  # char offset where each page starts; pages[0] == 0
    tokens: list[Token]
    sentences: list[Sentence]
    sections: list[Section]
    header_footer_spans: list[tuple[int, int]]
    _sentence_cache: dict[int, list[int]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def sentence_token_indices(self, sentence_index: int) -> list[int]:
        """Indices of the sentence's effective (non-boilerplate) tokens."""
        cached = self._sentence_cache.get(sentence_index)
        if cached is not None:
            return cached
        sent = self.sentences[sentence_index]
        out = [
            i
            for i in range(sent.first_token, sent.last_token + 1)
            if not self.tokens[i].boilerplate
        ]
        self._sentence_cache[sentence_index] = out
        return out

    def effective_tokens(self) -> list[Token]:
        return [t for t in self.tokens if not t.boilerplate]

    def tokens_in_span(self, start: int, end: int) -> list[int]:
        """Indices of effective tokens fully inside [start, end)."""
        starts = [t.start for t in self.tokens]
        lo = bisect.bisect_left(starts, start)
        out = []
        for i in range(lo, len(self.tokens)):
            t = self.tokens[i]
            if t.start >= end:
                break
            if t.end <= end and not t.boilerplate:
                out.append(i)
        return out

    def leaf_sections(self) -> list[Section]:
        """Sections that contain no other section."""
        leaves = []
        for sec in self.sections:
            if not any(sec.contains(other) for other in self.sections):
                leaves.append(sec)
        return leaves

    def page_of(self, offset: int) -> int:
        return bisect.bisect_right(self.pages, offset) - 1

    def sentence_at(self, offset: int) -> int | None:
        for i, s in enumerate(self.sentences):
            if s.start <= offset < s.end:
                return i
        return None

    def validate(self) -> None:
        """Raise DocmodelError on the first broken structural invariant."""
        prev_end = -1
        for i, t in enumerate(self.tokens):
            if not (0 <= t.start < t.end <= len(self.text)):
                raise DocmodelError(
                    f"{self.doc_id}: token {i} range {t.start}:{t.end} out of bounds"
                )
            if t.start < prev_end:
                raise DocmodelError(f"{self.doc_id}: token {i} overlaps its predecessor")
            if self.text[t.start : t.end] != t.surface:
                raise DocmodelError(f"{self.doc_id}: token {i} surface mismatch")
            prev_end = t.end
        seen: set[int] = set()
        for si, sent in enumerate(self.sentences):
            for i in range(sent.first_token, sent.last_token + 1):
                t = self.tokens[i]
                if t.boilerplate:
                    continue
                if i in seen:
                    raise DocmodelError(f"{self.doc_id}: token {i} in two sentences")
                seen.add(i)
                if t.sentence_index != si:
                    raise DocmodelError(f"{self.doc_id}: token {i} sentence index stale")
        for i, t in enumerate(self.tokens):
            if not t.boilerplate and i not in seen:
                raise DocmodelError(f"{self.doc_id}: token {i} not covered by a sentence")
        for a in self.sections:
            for b in self.sections:
                if a is b:
                    continue
                if a.start < b.start < a.end < b.end:
                    raise DocmodelError(f"{self.doc_id}: sections cross-nest")


@dataclass(frozen=True)
class Concept:
    concept_id: str
    kind: str  # ENTITY | CLAUSE
    display_name: str = ""


class ConceptSchema:
    """The set of extraction targets; concept ids are unique."""

    def __init__(self, concepts: list[Concept]):
        ids = [c.concept_id for c in concepts]
        dupes = {i for i in ids if ids.count(i) > 1}
        if dupes:
            raise DocmodelError(f"duplicate concept ids: {sorted(dupes)}")
        for c in concepts:
            if c.kind not in (ENTITY, CLAUSE):
                raise DocmodelError(f"concept {c.concept_id}: unknown kind {c.kind!r}")
        self.concepts = list(concepts)
        self.by_id = {c.concept_id: c for c in concepts}

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self.by_id

    def __iter__(self):
        return iter(self.concepts)

    def __len__(self) -> int:
        return len(self.concepts)

    def kind_of(self, concept_id: str) -> str:
        return self.by_id[concept_id].kind

    @classmethod
    def from_dict(cls, payload: dict) -> "ConceptSchema":
        concepts = []
        for entry in payload.get("concepts", []):
            concepts.append(
                Concept(
                    concept_id=entry["id"],
                    kind=entry.get("kind", ENTITY),
                    display_name=entry.get("name", entry["id"]),
                )
            )
        return cls(concepts)

    @classmethod
    def load(cls, path: str | Path) -> "ConceptSchema":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

    def to_dict(self) -> dict:
        return {
            "concepts": [
                {"id": c.concept_id, "kind": c.kind, "name": c.display_name}
                for c in self.concepts
            ]
        }
