"""Document model: ingestion and metadata enrichment."""

from .boilerplate import detect_headers_footers, normalize_line
from .ingest import (
    DEFAULT_PAGE_MARKER,
    PretokenizedError,
    ingest_text,
    load_corpus,
    load_pretokenized,
)
from .sections import detect_sections
from .sentences import segment_sentences
from .tagger import tag_tokens
from .tokenizer import token_shape, tokenize
from .types import (
    CLAUSE,
    ENTITY,
    NER_DATE,
    NER_NONE,
    NER_ORG_SUFFIX,
    NER_TIME_UNIT,
    POS_NUM,
    POS_OTHER,
    POS_PUNCT,
    POS_WORD,
    Concept,
    ConceptSchema,
    DocmodelError,
    Document,
    Section,
    Sentence,
    Token,
)

__all__ = [
    "CLAUSE",
    "Concept",
    "ConceptSchema",
    "DEFAULT_PAGE_MARKER",
    "DocmodelError",
    "Document",
    "ENTITY",
    "NER_DATE",
    "NER_NONE",
    "NER_ORG_SUFFIX",
    "NER_TIME_UNIT",
    "POS_NUM",
    "POS_OTHER",
    "POS_PUNCT",
    "POS_WORD",
    "PretokenizedError",
    "Section",
    "Sentence",
    "Token",
    "detect_headers_footers",
    "detect_sections",
    "ingest_text",
    "load_corpus",
    "load_pretokenized",
    "normalize_line",
    "segment_sentences",
    "tag_tokens",
    "token_shape",
    "tokenize",
]
