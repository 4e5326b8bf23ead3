"""Scoring resolved labels against gold spans, per concept."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .docmodel import CLAUSE, ConceptSchema, Document
from .weaksup import (
    BUCKET_DEV,
    BUCKET_TEST,
    LabeledSpan,
    ResolvedLabels,
    SOURCE_GOLD,
    SplitManifest,
    WeaksupError,
)


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class Policy:
    kind: str  # exact | overlap
    threshold: float = 1.0

    def __post_init__(self):
        if self.kind == "overlap" and not (0.0 < self.threshold <= 1.0):
            raise EvalError(f"overlap threshold must be in (0, 1], got {self.threshold}")

    @classmethod
    def exact(cls) -> "Policy":
        return cls("exact")

    @classmethod
    def overlap(cls, threshold: float) -> "Policy":
        return cls("overlap", threshold)

    @classmethod
    def parse(cls, text: str) -> "Policy":
        if text == "exact":
            return cls.exact()
        if text.startswith("overlap:"):
            return cls.overlap(float(text.split(":", 1)[1]))
        raise EvalError(f"unknown policy {text!r} (use 'exact' or 'overlap:T')")

    def describe(self) -> str:
        return "exact" if self.kind == "exact" else f"overlap:{self.threshold:g}"


def default_policy(schema: ConceptSchema, concept_id: str) -> Policy:
    """Clause boundaries are fuzzy, dates are not: overlap 0.3 for clauses,
    exact for date-like entities, overlap 0.5 for everything else."""
    if schema.kind_of(concept_id) == CLAUSE:
        return Policy.overlap(0.3)
    if "date" in concept_id.lower():
        return Policy.exact()
    return Policy.overlap(0.5)


def jaccard(a: tuple[int, int], b: tuple[int, int]) -> float:
    inter = max(0, min(a[1], b[1]) - max(a[0], b[0]))
    union = max(a[1], b[1]) - min(a[0], b[0])
    return inter / union if union else 0.0


def match_spans(
    predicted: list[tuple[int, int]],
    gold: list[tuple[int, int]],
    policy: Policy,
) -> tuple[int, int, int]:
    """Greedy one-to-one matching; returns (tp, fp, fn).

    Candidate pairs rank by descending Jaccard, ties by earlier gold start;
    each side is used at most once.
    """
    pairs = []
    for gi, g in enumerate(gold):
        for pi, p in enumerate(predicted):
            j = jaccard(p, g)
            if policy.kind == "exact":
                if p != g:
                    continue
            elif j < policy.threshold - 1e-12:
                continue
            pairs.append((-j, g[0], g[1], p[0], p[1], gi, pi))
    pairs.sort()
    used_gold: set[int] = set()
    used_pred: set[int] = set()
    tp = 0
    for _, _, _, _, _, gi, pi in pairs:
        if gi in used_gold or pi in used_pred:
            continue
        used_gold.add(gi)
        used_pred.add(pi)
        tp += 1
    return tp, len(predicted) - tp, len(gold) - tp


def f1(p: float, r: float) -> float:
    """Harmonic mean of precision/recall percentages; 0 when both are 0."""
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


@dataclass
class ConceptScore:
    concept_id: str
    tp: int
    fp: int
    fn: int
    precision: float  # 0..100
    recall: float
    f1: float
    undefined_precision: bool = False
    undefined_recall: bool = False

    @classmethod
    def from_counts(cls, concept_id: str, tp: int, fp: int, fn: int) -> "ConceptScore":
        undef_p, undef_r = tp + fp == 0, tp + fn == 0
        p = 0.0 if undef_p else 100.0 * tp / (tp + fp)
        r = 0.0 if undef_r else 100.0 * tp / (tp + fn)
        return cls(
            concept_id=concept_id,
            tp=tp,
            fp=fp,
            fn=fn,
            precision=p,
            recall=r,
            f1=f1(p, r),
            undefined_precision=undef_p,
            undefined_recall=undef_r,
        )


@dataclass
class EvalReport:
    bucket: str
    corpus_hash: str
    policies: dict[str, str]
    scores: list[ConceptScore]

    def to_payload(self) -> dict:
        return {
            "bucket": self.bucket,
            "corpus_hash": self.corpus_hash,
            "policies": {k: self.policies[k] for k in sorted(self.policies)},
            "scores": [
                {
                    "concept": s.concept_id,
                    "tp": s.tp,
                    "fp": s.fp,
                    "fn": s.fn,
                    "precision": round(s.precision, 1),
                    "recall": round(s.recall, 1),
                    "f1": round(s.f1, 1),
                    "undefined_precision": s.undefined_precision,
                    "undefined_recall": s.undefined_recall,
                }
                for s in self.scores
            ],
        }


def load_gold(
    path: str | Path,
    corpus: list[Document],
    split: SplitManifest | None = None,
) -> list[LabeledSpan]:
    """Gold spans from a SPANS_JSONL file (sources ignored, GOLD assumed)."""
    by_id = {d.doc_id: d for d in corpus}
    seen: set[tuple] = set()
    spans: list[LabeledSpan] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            doc_id = rec["doc"]
            if doc_id not in by_id:
                raise EvalError(f"gold references unknown document {doc_id!r}")
            start, end = int(rec["start"]), int(rec["end"])
            if not (0 <= start < end <= len(by_id[doc_id].text)):
                raise EvalError(f"{path}:{lineno}: gold span out of bounds")
            key = (doc_id, rec["concept"], start, end)
            if key in seen:
                raise EvalError(f"{path}:{lineno}: duplicate gold span {key}")
            seen.add(key)
            if split is not None and split.assignment.get(doc_id) not in (
                BUCKET_DEV,
                BUCKET_TEST,
            ):
                raise EvalError(
                    f"gold span for {doc_id!r} which is not a dev/test document"
                )
            spans.append(LabeledSpan(doc_id, rec["concept"], start, end, SOURCE_GOLD))
    return spans


def corpus_hash(corpus: list[Document]) -> str:
    h = hashlib.sha256()
    for doc in sorted(corpus, key=lambda d: d.doc_id):
        h.update(doc.doc_id.encode("utf-8"))
        h.update(b"\0")
        h.update(hashlib.sha256(doc.text.encode("utf-8")).digest())
    return h.hexdigest()[:16]


def score_corpus(
    resolved: ResolvedLabels,
    gold: list[LabeledSpan],
    *,
    bucket: str,
    split: SplitManifest,
    schema: ConceptSchema,
    corpus: list[Document],
    policy_overrides: dict[str, Policy] | None = None,
) -> EvalReport:
    """Micro-averaged per-concept scores over one bucket's documents."""
    by_id = {d.doc_id: d for d in corpus}
    for g in gold:
        if g.doc_id not in by_id:
            raise EvalError(f"gold references unknown document {g.doc_id!r}")
    bucket_docs = [d for d in split.docs(bucket) if d in by_id]
    policies = {
        c.concept_id: (policy_overrides or {}).get(
            c.concept_id, default_policy(schema, c.concept_id)
        )
        for c in schema
    }
    scores = []
    for concept in schema:
        cid = concept.concept_id
        tp = fp = fn = 0
        for doc_id in bucket_docs:
            predicted = [
                (s.start, s.end) for s in resolved.for_doc_concept(doc_id, cid)
            ]
            gold_spans = [
                (g.start, g.end)
                for g in gold
                if g.doc_id == doc_id and g.concept_id == cid
            ]
            a, b, c = match_spans(predicted, gold_spans, policies[cid])
            tp, fp, fn = tp + a, fp + b, fn + c
        scores.append(ConceptScore.from_counts(cid, tp, fp, fn))
    return EvalReport(
        bucket=bucket,
        corpus_hash=corpus_hash(corpus),
        policies={k: v.describe() for k, v in policies.items()},
        scores=scores,
    )


def render_table(
    schema: ConceptSchema, dev: EvalReport | None, test: EvalReport | None
) -> str:
    """Aligned text table: Concept | Dev P R F1 | Test P R F1."""
    def cells(report: EvalReport | None, cid: str) -> list[str]:
        if report is None:
            return ["-", "-", "-"]
        score = next((s for s in report.scores if s.concept_id == cid), None)
        if score is None:
            return ["-", "-", "-"]
        return [f"{score.precision:.1f}", f"{score.recall:.1f}", f"{score.f1:.1f}"]

    header = ["Concept", "Dev P", "Dev R", "Dev F1", "Test P", "Test R", "Test F1"]
    rows = [header]
    for concept in schema:
        name = concept.display_name or concept.concept_id
        rows.append(
            [name]
            + cells(dev, concept.concept_id)
            + cells(test, concept.concept_id)
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for idx, row in enumerate(rows):
        cols = [row[0].ljust(widths[0])] + [
            row[i].rjust(widths[i]) for i in range(1, len(header))
        ]
        lines.append("  ".join(cols).rstrip())
        if idx == 0:
            lines.append("-" * (sum(widths) + 2 * (len(header) - 1)))
    return "\n".join(lines)
