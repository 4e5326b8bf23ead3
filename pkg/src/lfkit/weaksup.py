"""From raw labeling-function votes to training labels.

Aggregation is deterministic and auditable: identical ranges merge, then
priority wins, then the longer range, then the leftmost. No probabilistic
label model; annotators should be able to trace every resolved span back
to the functions that produced it.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .docmodel import Document
from .engine import Match
from .lfdsl import LabelingFunction

SOURCE_GOLD = "GOLD"
SOURCE_USER = "USER"
USER_PRIORITY = 0  # corrections outrank every labeling function

BUCKET_TRAIN = "train"
BUCKET_DEV = "dev"
BUCKET_TEST = "test"
BUCKETS = (BUCKET_TRAIN, BUCKET_DEV, BUCKET_TEST)


class WeaksupError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledSpan:
    doc_id: str
    concept_id: str
    start: int
    end: int
    source: str  # LF name, GOLD, or USER

    @property
    def range(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass
class LabelSet:
    votes: list[LabeledSpan]
    lf_stats: dict = field(default_factory=dict)
    budget_events: list = field(default_factory=list)


def votes_from_matches(matches: list[Match]) -> list[LabeledSpan]:
    """Flatten match captures into one vote per (concept, range)."""
    votes = []
    for m in matches:
        for c in m.captures:
            votes.append(
                LabeledSpan(
                    doc_id=m.doc_id,
                    concept_id=c.concept_id,
                    start=c.start,
                    end=c.end,
                    source=m.lf_name,
                )
            )
    return votes


@dataclass(frozen=True)
class ResolvedSpan:
    doc_id: str
    concept_id: str
    start: int
    end: int
    sources: tuple[str, ...]  # sorted provenance


class ResolvedLabels:
    """Disjoint winning spans per (doc, concept)."""

    def __init__(self, spans: list[ResolvedSpan]):
        self.spans = sorted(
            spans, key=lambda s: (s.doc_id, s.concept_id, s.start, s.end)
        )
        self._index: dict[tuple[str, str], list[ResolvedSpan]] = {}
        for s in self.spans:
            self._index.setdefault((s.doc_id, s.concept_id), []).append(s)

    def for_doc_concept(self, doc_id: str, concept_id: str) -> list[ResolvedSpan]:
        return self._index.get((doc_id, concept_id), [])

    def doc_ids(self) -> set[str]:
        return {s.doc_id for s in self.spans}

    def concepts_in(self, doc_id: str) -> set[str]:
        return {s.concept_id for s in self.spans if s.doc_id == doc_id}

    def __eq__(self, other) -> bool:
        return isinstance(other, ResolvedLabels) and self.spans == other.spans

    def __len__(self) -> int:
        return len(self.spans)

    def as_votes(self) -> list[LabeledSpan]:
        return [
            LabeledSpan(s.doc_id, s.concept_id, s.start, s.end, src)
            for s in self.spans
            for src in s.sources
        ]


def aggregate(
    votes: list[LabeledSpan] | LabelSet, lfs: list[LabelingFunction]
) -> ResolvedLabels:
    """Resolve overlapping votes into disjoint labels per (doc, concept).

    Identical ranges merge and pool their provenance; among overlapping
    distinct ranges the best priority wins, ties go to the longer range,
    then the leftmost. Input order never matters.
    """
    if isinstance(votes, LabelSet):
        votes = votes.votes
    priority = {lf.name: lf.priority for lf in lfs}
    priority[SOURCE_USER] = USER_PRIORITY

    grouped: dict[tuple[str, str, int, int], set[str]] = {}
    for v in votes:
        if v.source not in priority:
            raise WeaksupError(f"vote references unknown labeling function {v.source!r}")
        grouped.setdefault((v.doc_id, v.concept_id, v.start, v.end), set()).add(v.source)

    by_target: dict[tuple[str, str], list[tuple]] = {}
    for (doc, concept, start, end), sources in grouped.items():
        best = min(priority[s] for s in sources)
        by_target.setdefault((doc, concept), []).append(
            (best, start - end, start, tuple(sorted(sources)), end)
        )

    resolved: list[ResolvedSpan] = []
    for (doc, concept), cands in by_target.items():
        cands.sort()  # priority, then longest (start-end ascending), then leftmost
        accepted: list[tuple[int, int, tuple[str, ...]]] = []
        for _, _, start, sources, end in cands:
            if all(end <= a_s or a_e <= start for a_s, a_e, _ in accepted):
                accepted.append((start, end, sources))
        for start, end, sources in accepted:
            resolved.append(ResolvedSpan(doc, concept, start, end, sources))
    return ResolvedLabels(resolved)


def coverage(
    resolved: ResolvedLabels, split: "SplitManifest", concept_ids: list[str]
) -> dict[str, float | None]:
    """Fraction of TRAIN docs with at least one label per concept.

    None (not 0) when the train split is empty: the ratio is undefined.
    """
    train_docs = [d for d, b in split.assignment.items() if b == BUCKET_TRAIN]
    if not train_docs:
        return {c: None for c in concept_ids}
    out = {}
    for c in concept_ids:
        hit = sum(1 for d in train_docs if resolved.for_doc_concept(d, c))
        out[c] = hit / len(train_docs)
    return out


def conflict_stats(votes: list[LabeledSpan] | LabelSet) -> dict[str, float]:
    """Per concept: fraction of voted docs where two different functions
    emitted overlapping, non-identical spans."""
    if isinstance(votes, LabelSet):
        votes = votes.votes
    by_concept_doc: dict[str, dict[str, list[LabeledSpan]]] = {}
    for v in votes:
        by_concept_doc.setdefault(v.concept_id, {}).setdefault(v.doc_id, []).append(v)
    out = {}
    for concept, docs in by_concept_doc.items():
        conflicted = 0
        for spans in docs.values():
            if _has_conflict(spans):
                conflicted += 1
        out[concept] = conflicted / len(docs)
    return out


def _has_conflict(spans: list[LabeledSpan]) -> bool:
    for i, a in enumerate(spans):
        for b in spans[i + 1 :]:
            if a.source == b.source:
                continue
            if a.range == b.range:
                continue
            if a.start < b.end and b.start < a.end:
                return True
    return False


@dataclass(frozen=True)
class SplitManifest:
    seed: int
    ratios: tuple[float, float, float]
    assignment: dict[str, str]  # doc_id -> train | dev | test

    def docs(self, bucket: str) -> list[str]:
        return sorted(d for d, b in self.assignment.items() if b == bucket)

    def to_json(self) -> str:
        payload = {
            "seed": self.seed,
            "ratios": list(self.ratios),
            "assignment": {k: self.assignment[k] for k in sorted(self.assignment)},
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SplitManifest":
        payload = json.loads(text)
        return cls(
            seed=payload["seed"],
            ratios=tuple(payload["ratios"]),
            assignment=dict(payload["assignment"]),
        )

    @classmethod
    def load(cls, path: str | Path) -> "SplitManifest":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def _split_key(seed: int, doc_id: str) -> int:
    key = hashlib.blake2b(
        doc_id.encode("utf-8"),
        digest_size=8,
        key=(seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little"),
    ).digest()
    return int.from_bytes(key, "big")


def split_corpus(
    doc_ids: list[str],
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> SplitManifest:
    """Deterministic hash split: floor sizes for train/dev, remainder to test."""
    if len(set(doc_ids)) != len(doc_ids):
        raise WeaksupError("doc ids must be unique")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise WeaksupError(f"ratios must sum to 1, got {sum(ratios)}")
    n = len(doc_ids)
    ordered = sorted(doc_ids, key=lambda d: (_split_key(seed, d), d))
    n_train = math.floor(ratios[0] * n + 1e-9)
    n_dev = math.floor(ratios[1] * n + 1e-9)
    assignment = {}
    for i, doc_id in enumerate(ordered):
        if i < n_train:
            assignment[doc_id] = BUCKET_TRAIN
        elif i < n_train + n_dev:
            assignment[doc_id] = BUCKET_DEV
        else:
            assignment[doc_id] = BUCKET_TEST
    return SplitManifest(seed=seed, ratios=tuple(ratios), assignment=assignment)


# --------------------------------------------------------------------------
# corrections

VERDICT_ACCEPT = "accept"
VERDICT_REJECT = "reject"
VERDICT_REPLACE = "replace"
VERDICTS = (VERDICT_ACCEPT, VERDICT_REJECT, VERDICT_REPLACE)


@dataclass(frozen=True)
class Correction:
    doc_id: str
    concept_id: str
    start: int
    end: int
    verdict: str
    replacement: tuple[int, int] | None = None
    timestamp: str = ""

    def key(self) -> tuple:
        return (self.doc_id, self.concept_id, self.start, self.end)


def effective_corrections(journal: list[Correction]) -> list[Correction]:
    """Replay an append-only journal: the last verdict per span wins."""
    latest: dict[tuple, Correction] = {}
    for entry in journal:
        latest[entry.key()] = entry
    return sorted(latest.values(), key=lambda c: c.key())


def apply_corrections(
    votes: list[LabeledSpan], corrections: list[Correction]
) -> list[LabeledSpan]:
    """Fold user verdicts into the vote set.

    Rejects drop every vote on that exact span; replacements move it to a
    USER-sourced span; accepts add a USER vote that outranks any function.
    """
    effective = effective_corrections(corrections)
    dropped = {
        c.key() for c in effective if c.verdict in (VERDICT_REJECT, VERDICT_REPLACE)
    }
    out = [
        v
        for v in votes
        if (v.doc_id, v.concept_id, v.start, v.end) not in dropped
    ]
    for c in effective:
        if c.verdict == VERDICT_ACCEPT:
            out.append(LabeledSpan(c.doc_id, c.concept_id, c.start, c.end, SOURCE_USER))
        elif c.verdict == VERDICT_REPLACE and c.replacement is not None:
            out.append(
                LabeledSpan(
                    c.doc_id, c.concept_id, c.replacement[0], c.replacement[1], SOURCE_USER
                )
            )
    return out


# --------------------------------------------------------------------------
# export / import

FORMAT_SPANS_JSONL = "spans_jsonl"
FORMAT_TOKEN_BIO = "token_bio"


def snap_to_tokens(doc: Document, start: int, end: int) -> tuple[int, int] | None:
    """Snap a char range outward to the boundaries of overlapped tokens."""
    covered = [t for t in doc.tokens if t.start < end and start < t.end]
    if not covered:
        return None
    return covered[0].start, covered[-1].end


def spans_jsonl_lines(spans: list[ResolvedSpan]) -> list[str]:
    lines = []
    for s in sorted(spans, key=lambda s: (s.doc_id, s.concept_id, s.start, s.end)):
        lines.append(
            json.dumps(
                {
                    "doc": s.doc_id,
                    "concept": s.concept_id,
                    "start": s.start,
                    "end": s.end,
                    "sources": list(s.sources),
                },
                sort_keys=False,
                separators=(", ", ": "),
            )
        )
    return lines


def import_spans(path: str | Path) -> list[ResolvedSpan]:
    spans = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                spans.append(
                    ResolvedSpan(
                        doc_id=rec["doc"],
                        concept_id=rec["concept"],
                        start=int(rec["start"]),
                        end=int(rec["end"]),
                        sources=tuple(sorted(rec.get("sources", []))),
                    )
                )
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise WeaksupError(f"{path}:{lineno}: bad span record: {exc}") from exc
    return spans


def bio_lines(doc: Document, spans: list[ResolvedSpan], warnings: list[str] | None = None) -> list[str]:
    """One surface<TAB>tag line per effective token, blank between sentences.

    Overlaps across concepts keep the shortest span: the more specific
    label wins (an entity inside a clause stays an entity).
    """
    snapped: list[tuple[int, int, str]] = []
    for s in spans:
        rng = snap_to_tokens(doc, s.start, s.end)
        if rng is None:
            if warnings is not None:
                warnings.append(
                    f"{doc.doc_id}: label {s.concept_id}@{s.start}:{s.end} covers no tokens; dropped"
                )
            continue
        if rng != (s.start, s.end) and warnings is not None:
            warnings.append(
                f"{doc.doc_id}: label {s.concept_id}@{s.start}:{s.end} snapped to {rng[0]}:{rng[1]}"
            )
        snapped.append((rng[0], rng[1], s.concept_id))
    snapped.sort(key=lambda s: (s[1] - s[0], s[2], s[0]))  # shortest span wins

    lines: list[str] = []
    for si in range(len(doc.sentences)):
        if si > 0:
            lines.append("")
        prev_span = None
        for ti in doc.sentence_token_indices(si):
            t = doc.tokens[ti]
            tag = "O"
            for start, end, concept in snapped:
                if start <= t.start and t.end <= end:
                    prefix = "I" if prev_span == (start, end, concept) else "B"
                    tag = f"{prefix}-{concept}"
                    prev_span = (start, end, concept)
                    break
            else:
                prev_span = None
            lines.append(f"{t.surface}\t{tag}")
    return lines


def export_training(
    resolved: ResolvedLabels,
    corpus: list[Document],
    split: SplitManifest,
    fmt: str,
    out_dir: str | Path,
    warnings: list[str] | None = None,
) -> list[Path]:
    """Write TRAIN-split training data; returns the files written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_id = {d.doc_id: d for d in corpus}
    train_ids = [d for d in split.docs(BUCKET_TRAIN) if d in by_id]
    written = []
    if fmt == FORMAT_SPANS_JSONL:
        path = out_dir / "train_spans.jsonl"
        spans = [s for s in resolved.spans if split.assignment.get(s.doc_id) == BUCKET_TRAIN]
        path.write_text(
            "".join(line + "\n" for line in spans_jsonl_lines(spans)), encoding="utf-8"
        )
        written.append(path)
    elif fmt == FORMAT_TOKEN_BIO:
        for doc_id in train_ids:
            doc = by_id[doc_id]
            spans = [s for s in resolved.spans if s.doc_id == doc_id]
            path = out_dir / f"{doc_id}.bio"
            path.write_text(
                "".join(line + "\n" for line in bio_lines(doc, spans, warnings)),
                encoding="utf-8",
            )
            written.append(path)
    else:
        raise WeaksupError(f"unknown export format {fmt!r}")
    return written
