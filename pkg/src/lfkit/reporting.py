"""Canonical machine-readable payloads.

The CLI's --json output and the service's metrics endpoints must be
byte-identical for the same state, so both render through these functions
and nothing else.
"""
from __future__ import annotations

import json
from typing import Any

from .docmodel import ConceptSchema, Document
from .evalkit import EvalReport, corpus_hash
from .weaksup import LabeledSpan, ResolvedLabels, SplitManifest, conflict_stats, coverage


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def stats_payload(
    resolved: ResolvedLabels,
    votes: list[LabeledSpan],
    split: SplitManifest,
    schema: ConceptSchema,
    corpus: list[Document],
) -> dict:
    """Coverage and conflict per concept over the TRAIN split."""
    concept_ids = [c.concept_id for c in schema]
    cov = coverage(resolved, split, concept_ids)
    conf = conflict_stats(votes)
    train_docs = split.docs("train")
    concepts = {}
    for cid in concept_ids:
        value = cov[cid]
        concepts[cid] = {
            "coverage": None if value is None else round(value, 6),
            "coverage_undefined": value is None,
            "conflict": round(conf.get(cid, 0.0), 6),
        }
    return {
        "bucket": "train",
        "train_docs": len(train_docs),
        "corpus_hash": corpus_hash(corpus),
        "concepts": concepts,
    }


def conflict_payload(votes: list[LabeledSpan], schema: ConceptSchema) -> dict:
    conf = conflict_stats(votes)
    return {
        "concepts": {c.concept_id: round(conf.get(c.concept_id, 0.0), 6) for c in schema}
    }


def eval_payload(dev: EvalReport | None, test: EvalReport | None) -> dict:
    return {
        "dev": dev.to_payload() if dev else None,
        "test": test.to_payload() if test else None,
    }


def labelset_lines(
    votes: list[LabeledSpan], corpus: list[Document]
) -> list[str]:
    """JSON-lines serialization of raw votes, one capture per line."""
    by_id = {d.doc_id: d for d in corpus}
    lines = []
    ordered = sorted(votes, key=lambda v: (v.doc_id, v.source, v.start, v.end, v.concept_id))
    for v in ordered:
        text = by_id[v.doc_id].text[v.start : v.end] if v.doc_id in by_id else ""
        lines.append(
            json.dumps(
                {
                    "doc": v.doc_id,
                    "lf": v.source,
                    "concept": v.concept_id,
                    "start": v.start,
                    "end": v.end,
                    "text": text,
                },
                ensure_ascii=False,
            )
        )
    return lines


def parse_labelset_line(line: str) -> LabeledSpan:
    rec = json.loads(line)
    return LabeledSpan(
        doc_id=rec["doc"],
        concept_id=rec["concept"],
        start=int(rec["start"]),
        end=int(rec["end"]),
        source=rec["lf"],
    )
