"""Throughput benchmark on a generated synthetic corpus.

Documents are produced deterministically from the seed and regenerated
inside each worker, so multi-worker runs ship no corpus data between
processes. The three benchmark labeling functions are the documented
examples from the demo ruleset: one starts-guarded multi-capture pattern,
one contains-guarded pattern, and one phrase capture.
"""
from __future__ import annotations

import multiprocessing as mp
import random
import time

from .docmodel import Concept, ConceptSchema, ingest_text
from .engine import compile_ruleset, match_document
from .lfdsl import parse_ruleset

BENCH_RULESET = """
lf sick_leave_hours for sick_leave_amount priority 10 {
  require starts("full time" | "part time" | "all employees")
  require contains("accumulate.*" | "accru.*")
  match: status:("full|part" "time")? []{0,5}
         amount:([pos="NUM"]{1,2}) unit:([ner="TIME_UNIT"]{1,1})
}

lf sick_leave_credited for sick_leave_amount priority 20 {
  require contains("credited|granted")
  match: "credited|granted" "with"? amount:([pos="NUM"]{1,2}) unit:([ner="TIME_UNIT"]{1,1})
}

lf status_all_employees for employment_status priority 10 {
  require starts("all employees")
  require contains("accumulate.*|accru.*")
  match: employment_status:("all" "employees") []{0,8} "accumulate.*|accru.*"
}
"""

BENCH_SCHEMA = ConceptSchema(
    [
        Concept("sick_leave_amount", "ENTITY", "Sick Leave Amount"),
        Concept("sick_leave_unit", "ENTITY", "Sick Leave Unit"),
        Concept("employment_status", "ENTITY", "Employment Status"),
    ]
)

_FILLER = (
    "the employer and the employee agree that all provisions of this "
    "section remain subject to review by the joint committee during the "
    "term of service under applicable law and past practice at the facility"
).split()

_SENTENCES_PER_PAGE = 25
TOKENS_PER_DOC = 20_000


def _doc_text(seed: int, index: int, approx_tokens: int) -> str:
    rng = random.Random(seed * 100_003 + index)
    lines: list[str] = []
    tokens = 0
    sentence_i = 0
    while tokens < approx_tokens:
        roll = rng.random()
        if roll < 0.02:
            amount = rng.choice(["8", "4", "twelve", "2"])
            unit = rng.choice(["hours", "days", "shifts"])
            status = rng.choice(["Full time", "Part time"])
            line = (
                f"{status} employees shall accrue {amount} {unit} of sick "
                f"leave per month worked."
            )
        elif roll < 0.03:
            line = (
                f"Employees shall be credited with {rng.choice(['6', 'ten'])} "
                f"{rng.choice(['hours', 'days'])} of sick leave each year."
            )
        elif roll < 0.04:
            line = (
                f"All employees shall accumulate {rng.choice(['one', '3'])} "
                f"{rng.choice(['shift', 'shifts'])} of sick leave per week."
            )
        else:
            words = rng.choices(_FILLER, k=rng.randint(8, 16))
            words[0] = words[0].capitalize()
            line = " ".join(words) + "."
        lines.append(line)
        lines.append("")
        tokens += line.count(" ") + 2
        sentence_i += 1
        if sentence_i % _SENTENCES_PER_PAGE == 0:
            lines.append(f"Bench Corpus - Page {sentence_i // _SENTENCES_PER_PAGE}")
            lines.append("\f")
    return "\n".join(lines)


_BENCH_STATE: dict = {}


def _bench_unit(index: int):
    seed = _BENCH_STATE["seed"]
    clfs = _BENCH_STATE["clfs"]
    t0 = time.perf_counter()
    doc = ingest_text(f"bench_{index:05d}", _doc_text(seed, index, TOKENS_PER_DOC))
    t1 = time.perf_counter()
    rows = []
    per_lf = []
    for clf in clfs:
        m0 = time.perf_counter()
        matches = match_document(clf, doc)
        per_lf.append((clf.lf_name, time.perf_counter() - m0))
        for m in matches:
            for c in m.captures:
                rows.append((doc.doc_id, m.lf_name, c.concept_id, c.start, c.end))
    return index, len(doc.tokens), t1 - t0, per_lf, rows


def _run_pass(n_docs: int, seed: int, clfs, workers: int):
    _BENCH_STATE.update({"seed": seed, "clfs": clfs})
    t0 = time.perf_counter()
    try:
        if workers == 1:
            results = [_bench_unit(i) for i in range(n_docs)]
        else:
            ctx = mp.get_context("fork")
            with ctx.Pool(processes=workers) as pool:
                results = pool.map(_bench_unit, range(n_docs), chunksize=2)
    finally:
        _BENCH_STATE.clear()
    wall = time.perf_counter() - t0
    total_tokens = sum(r[1] for r in results)
    ingest_s = sum(r[2] for r in results)
    match_s: dict[str, float] = {}
    rows = []
    for _, _, _, per_lf, unit_rows in results:
        for name, elapsed in per_lf:
            match_s[name] = match_s.get(name, 0.0) + elapsed
        rows.extend(unit_rows)
    rows.sort()
    return {
        "wall_s": wall,
        "tokens": total_tokens,
        "ingest_s": ingest_s,
        "match_s": match_s,
        "rows": rows,
    }


def run_bench(total_tokens: int = 1_000_000, workers: int = 4, seed: int = 0) -> dict:
    parse = parse_ruleset(BENCH_RULESET)
    assert parse.ok, parse.errors
    clfs = compile_ruleset(parse.functions, BENCH_SCHEMA)
    n_docs = max(1, round(total_tokens / TOKENS_PER_DOC))

    t0 = time.perf_counter()
    probe = ingest_text("probe", _doc_text(seed, 0, TOKENS_PER_DOC))
    generate_s = time.perf_counter() - t0

    single = _run_pass(n_docs, seed, clfs, workers=1)
    multi = _run_pass(n_docs, seed, clfs, workers=workers)
    match_total = sum(single["match_s"].values())
    report = {
        "documents": n_docs,
        "tokens": single["tokens"],
        "generate_s": round(generate_s * n_docs, 3),
        "single_worker": {
            "elapsed_s": round(single["wall_s"], 3),
            "ingest_s": round(single["ingest_s"], 3),
            "match_s": round(match_total, 3),
            "tokens_per_s": int(single["tokens"] / match_total) if match_total else 0,
            "per_lf_tokens_per_s": {
                name: int(single["tokens"] / s) if s else 0
                for name, s in sorted(single["match_s"].items())
            },
            "matches": len(single["rows"]),
        },
        "multi_worker": {
            "workers": workers,
            "elapsed_s": round(multi["wall_s"], 3),
            "speedup": round(single["wall_s"] / multi["wall_s"], 2) if multi["wall_s"] else 0.0,
            "identical": single["rows"] == multi["rows"],
        },
        "probe_tokens": len(probe.tokens),
    }
    return report
