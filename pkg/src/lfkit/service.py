"""HTTP JSON API for the authoring workbench.

The corpus and the saved ruleset are immutable for the server's lifetime;
the only mutable state is the append-only corrections journal. Metrics
responses are rendered through the same functions as the CLI's --json
output, so the two are byte-identical for identical project state.
"""
from __future__ import annotations

import datetime
import json
import threading
import time
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .engine import compile_ruleset, match_document
from .evalkit import load_gold, score_corpus
from .lfdsl import errors_only, parse_ruleset, validate
from .reporting import canonical_json, conflict_payload, eval_payload, stats_payload
from .weaksup import (
    Correction,
    VERDICTS,
    aggregate,
    apply_corrections,
    effective_corrections,
    snap_to_tokens,
    votes_from_matches,
)

MAX_BODY_BYTES = 1_000_000


def _diag_payload(diags) -> list[dict]:
    return [
        {
            "severity": d.severity,
            "message": d.message,
            "line": d.line,
            "col": d.col,
            "source": d.source,
        }
        for d in diags
    ]


def _error(status: int, message: str, detail=None) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": message, "detail": detail}
    )


class CorrectionJournal:
    """Append-only JSON-lines journal; single writer, replayable."""

    def __init__(self, path: Path):
        self.path = path
        self._lock = threading.Lock()

    def append(self, correction: Correction) -> None:
        record = {
            "ts": correction.timestamp,
            "doc": correction.doc_id,
            "concept": correction.concept_id,
            "start": correction.start,
            "end": correction.end,
            "verdict": correction.verdict,
            "replacement": list(correction.replacement)
            if correction.replacement
            else None,
        }
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(json.dumps(record) + "\n")

    def read(self) -> list[Correction]:
        if not self.path.is_file():
            return []
        out = []
        for line in self.path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            out.append(
                Correction(
                    doc_id=rec["doc"],
                    concept_id=rec["concept"],
                    start=int(rec["start"]),
                    end=int(rec["end"]),
                    verdict=rec["verdict"],
                    replacement=tuple(rec["replacement"]) if rec.get("replacement") else None,
                    timestamp=rec.get("ts", ""),
                )
            )
        return out


def create_app(state) -> FastAPI:
    """Service over a loaded ProjectState (see lfkit.cli.load_state)."""
    config = state.config
    corpus = {doc.doc_id: doc for doc in state.corpus}
    journal = CorrectionJournal(
        config.corrections_path
        if config.corrections_path is not None
        else config.root / "corrections.jsonl"
    )
    app = FastAPI(title="lfkit service", version="0.1.0", docs_url=None, redoc_url=None)
    # the workbench is served from its own origin (or file://)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def saved_votes():
        matches = []
        for clf in state.compiled:
            for doc in state.corpus:
                matches.extend(match_document(clf, doc, budget=config.budget))
        votes = votes_from_matches(matches)
        return apply_corrections(votes, journal.read())

    def bucket_coverage(matches_by_doc: dict[str, list], doc_ids: list[str]) -> dict:
        """Fraction of the requested docs with at least one capture per concept."""
        out: dict[str, float] = {}
        if not doc_ids:
            return out
        concepts = [c.concept_id for c in state.schema]
        hit = {c: 0 for c in concepts}
        for doc_id in doc_ids:
            seen = {
                c.concept_id
                for m in matches_by_doc.get(doc_id, [])
                for c in m.captures
            }
            for c in seen:
                if c in hit:
                    hit[c] += 1
        for c in concepts:
            out[c] = round(hit[c] / len(doc_ids), 6)
        return out

    def match_payload(m, doc) -> dict:
        si = doc.sentence_at(m.start)
        context = None
        if si is not None:
            lo = doc.sentences[max(0, si - 1)].start
            hi = doc.sentences[min(len(doc.sentences) - 1, si + 1)].end
            context = {"start": lo, "end": hi, "text": doc.text[lo:hi]}
        return {
            "lf": m.lf_name,
            "window": m.window_index,
            "start": m.start,
            "end": m.end,
            "text": doc.text[m.start : m.end],
            "captures": [
                {
                    "name": c.name,
                    "concept": c.concept_id,
                    "start": c.start,
                    "end": c.end,
                    "text": doc.text[c.start : c.end],
                }
                for c in m.captures
            ],
            "context": context,
        }

    @app.post("/api/rulesets/validate")
    async def validate_ruleset(request: Request):
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return _error(413, "request body too large")
        try:
            payload = json.loads(body)
            source = payload["source"]
        except (json.JSONDecodeError, KeyError, TypeError):
            return _error(422, "expected JSON body with a 'source' field")
        result = parse_ruleset(source)
        diags = list(result.errors) + validate(result.functions, state.schema)
        return JSONResponse(
            {"diagnostics": _diag_payload(diags), "functions": [f.name for f in result.functions]}
        )

    @app.post("/api/run")
    async def run_ruleset_endpoint(request: Request):
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return _error(413, "request body too large")
        try:
            payload = json.loads(body)
            source = payload["source"]
        except (json.JSONDecodeError, KeyError, TypeError):
            return _error(422, "expected JSON body with a 'source' field")
        result = parse_ruleset(source)
        diags = list(result.errors) + validate(result.functions, state.schema)
        errors = errors_only(diags)
        if errors:
            return _error(422, "invalid ruleset", _diag_payload(errors))
        clfs = compile_ruleset(result.functions, state.schema)

        doc_id = payload.get("doc_id")
        bucket = payload.get("bucket")
        t0 = time.perf_counter()
        if doc_id is not None:
            doc = corpus.get(doc_id)
            if doc is None:
                return _error(404, f"unknown document {doc_id!r}")
            matches = []
            for clf in clfs:
                matches.extend(match_document(clf, doc, budget=config.budget))
            matches.sort(key=lambda m: (m.start, m.end, m.lf_name))
            return JSONResponse(
                {
                    "doc_id": doc_id,
                    "matches": [match_payload(m, doc) for m in matches],
                    "timing_ms": round((time.perf_counter() - t0) * 1000, 3),
                }
            )

        if bucket not in ("train", "dev", "test"):
            return _error(422, "provide doc_id or bucket in {train, dev, test}")
        doc_ids = [d for d in state.split.docs(bucket) if d in corpus]
        cand_by_doc: dict[str, list] = {}
        saved_by_doc: dict[str, list] = {}
        for did in doc_ids:
            doc = corpus[did]
            cand_by_doc[did] = [
                m for clf in clfs for m in match_document(clf, doc, budget=config.budget)
            ]
            saved_by_doc[did] = [
                m
                for clf in state.compiled
                for m in match_document(clf, doc, budget=config.budget)
            ]
        cov_new = bucket_coverage(cand_by_doc, doc_ids)
        cov_saved = bucket_coverage(saved_by_doc, doc_ids)
        return JSONResponse(
            {
                "bucket": bucket,
                "docs": {
                    did: {
                        "matches": [match_payload(m, corpus[did]) for m in ms],
                        "match_count": len(ms),
                    }
                    for did, ms in sorted(cand_by_doc.items())
                },
                "coverage": cov_new,
                "coverage_saved": cov_saved,
                "coverage_delta": {
                    c: round(cov_new[c] - cov_saved.get(c, 0.0), 6) for c in cov_new
                },
                "timing_ms": round((time.perf_counter() - t0) * 1000, 3),
            }
        )

    @app.get("/api/docs")
    def list_docs():
        return JSONResponse(
            [
                {
                    "doc_id": doc.doc_id,
                    "pages": len(doc.pages),
                    "tokens": len(doc.tokens),
                    "sentences": len(doc.sentences),
                    "sections": len(doc.sections),
                    "bucket": state.split.assignment.get(doc.doc_id),
                }
                for doc in state.corpus
            ]
        )

    @app.get("/api/docs/{doc_id}")
    def get_doc(doc_id: str):
        doc = corpus.get(doc_id)
        if doc is None:
            return _error(404, f"unknown document {doc_id!r}")
        return JSONResponse(
            {
                "doc_id": doc.doc_id,
                "text": doc.text,
                "pages": doc.pages,
                "tokens": [
                    {
                        "start": t.start,
                        "end": t.end,
                        "pos": t.pos,
                        "ner": t.ner,
                        "sentence": t.sentence_index,
                        "page": t.page_index,
                        "boilerplate": t.boilerplate,
                    }
                    for t in doc.tokens
                ],
                "sentences": [
                    {"start": s.start, "end": s.end, "first_token": s.first_token, "last_token": s.last_token}
                    for s in doc.sentences
                ],
                "sections": [
                    {
                        "start": s.start,
                        "end": s.end,
                        "heading_start": s.heading_start,
                        "heading_end": s.heading_end,
                        "depth": s.depth,
                    }
                    for s in doc.sections
                ],
                "header_footer_spans": [list(s) for s in doc.header_footer_spans],
            }
        )

    @app.get("/api/metrics/coverage")
    def metrics_coverage():
        votes = saved_votes()
        resolved = aggregate(votes, state.lfs)
        payload = stats_payload(resolved, votes, state.split, state.schema, state.corpus)
        return Response(content=canonical_json(payload), media_type="application/json")

    @app.get("/api/metrics/conflict")
    def metrics_conflict():
        votes = saved_votes()
        payload = conflict_payload(votes, state.schema)
        return Response(content=canonical_json(payload), media_type="application/json")

    @app.get("/api/metrics/eval")
    def metrics_eval():
        if config.gold_path is None or not config.gold_path.is_file():
            return _error(404, "no gold file configured")
        votes = saved_votes()
        resolved = aggregate(votes, state.lfs)
        gold = load_gold(config.gold_path, state.corpus, state.split)
        reports = {
            bucket: score_corpus(
                resolved,
                gold,
                bucket=bucket,
                split=state.split,
                schema=state.schema,
                corpus=state.corpus,
                policy_overrides=config.policy_overrides,
            )
            for bucket in ("dev", "test")
        }
        payload = eval_payload(reports["dev"], reports["test"])
        return Response(content=canonical_json(payload), media_type="application/json")

    @app.post("/api/corrections")
    async def post_correction(request: Request):
        try:
            payload = json.loads(await request.body())
        except json.JSONDecodeError:
            return _error(422, "invalid JSON")
        doc = corpus.get(payload.get("doc"))
        if doc is None:
            return _error(404, f"unknown document {payload.get('doc')!r}")
        concept = payload.get("concept")
        if concept not in state.schema:
            return _error(422, f"unknown concept {concept!r}")
        verdict = payload.get("verdict")
        if verdict not in VERDICTS:
            return _error(422, f"verdict must be one of {list(VERDICTS)}")
        try:
            start, end = int(payload["start"]), int(payload["end"])
        except (KeyError, TypeError, ValueError):
            return _error(422, "start/end must be integers")
        if not (0 <= start < end <= len(doc.text)):
            return _error(422, "span outside document bounds")
        replacement = None
        if verdict == "replace":
            rep = payload.get("replacement")
            if not rep:
                return _error(422, "replace verdict requires a replacement range")
            try:
                r0, r1 = int(rep["start"]), int(rep["end"])
            except (KeyError, TypeError, ValueError):
                return _error(422, "replacement start/end must be integers")
            if not (0 <= r0 < r1 <= len(doc.text)):
                return _error(422, "replacement outside document bounds")
            snapped = snap_to_tokens(doc, r0, r1)
            if snapped is None:
                return _error(422, "replacement covers no tokens")
            replacement = snapped
        correction = Correction(
            doc_id=doc.doc_id,
            concept_id=concept,
            start=start,
            end=end,
            verdict=verdict,
            replacement=replacement,
            timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        )
        journal.append(correction)
        return JSONResponse(
            {
                "stored": {
                    "doc": correction.doc_id,
                    "concept": correction.concept_id,
                    "start": correction.start,
                    "end": correction.end,
                    "verdict": correction.verdict,
                    "replacement": list(correction.replacement)
                    if correction.replacement
                    else None,
                    "ts": correction.timestamp,
                }
            }
        )

    @app.get("/api/corrections")
    def get_corrections():
        effective = effective_corrections(journal.read())
        return JSONResponse(
            [
                {
                    "doc": c.doc_id,
                    "concept": c.concept_id,
                    "start": c.start,
                    "end": c.end,
                    "verdict": c.verdict,
                    "replacement": list(c.replacement) if c.replacement else None,
                    "ts": c.timestamp,
                }
                for c in effective
            ]
        )

    return app
