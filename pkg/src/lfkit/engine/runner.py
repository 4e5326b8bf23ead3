"""Corpus-scale evaluation with a worker pool.

Work units are (labeling function, document) pairs. Workers are forked so
compiled rulesets and documents are shared copy-on-write instead of being
pickled; results are canonically sorted, so output is identical for any
worker count.
"""
from __future__ import annotations

import multiprocessing as mp
import time
from dataclasses import dataclass, field

from ..docmodel import Document
from .compiler import CompiledLF
from .matcher import match_document
from .types import DEFAULT_BUDGET, BudgetExceeded, Match


@dataclass
class LFStat:
    lf_name: str
    matches: int = 0
    documents: int = 0
    elapsed_s: float = 0.0


@dataclass
class RunResult:
    matches: list[Match]
    lf_stats: dict[str, LFStat]
    doc_elapsed_s: dict[str, float]
    budget_events: list[BudgetExceeded] = field(default_factory=list)
    elapsed_s: float = 0.0


def canonical_sort(matches: list[Match]) -> list[Match]:
    return sorted(matches, key=lambda m: (m.doc_id, m.lf_name, m.start, m.end))


# fork-shared state; set immediately before the pool starts
_WORK: dict = {}


def _run_unit(unit: tuple[int, int]):
    ci, di = unit
    clf: CompiledLF = _WORK["clfs"][ci]
    doc: Document = _WORK["docs"][di]
    diags: list[BudgetExceeded] = []
    t0 = time.perf_counter()
    matches = match_document(clf, doc, budget=_WORK["budget"], diagnostics=diags)
    return ci, di, matches, diags, time.perf_counter() - t0


def run_ruleset(
    clfs: list[CompiledLF],
    corpus: list[Document],
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> RunResult:
    """Every match of every LF over the corpus, order-canonicalized.

    Output is a pure function of (clfs, corpus, budget); worker count only
    changes wall time.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    t_start = time.perf_counter()
    units = [(ci, di) for ci in range(len(clfs)) for di in range(len(corpus))]
    _WORK.update({"clfs": clfs, "docs": corpus, "budget": budget})
    try:
        if workers == 1 or len(units) <= 1:
            results = [_run_unit(u) for u in units]
        else:
            ctx = mp.get_context("fork")
            chunk = max(1, len(units) // (workers * 4))
            with ctx.Pool(processes=workers) as pool:
                results = pool.map(_run_unit, units, chunksize=chunk)
    finally:
        _WORK.clear()

    matches: list[Match] = []
    budget_events: list[BudgetExceeded] = []
    lf_stats = {clf.lf_name: LFStat(clf.lf_name) for clf in clfs}
    doc_elapsed: dict[str, float] = {d.doc_id: 0.0 for d in corpus}
    for ci, di, unit_matches, diags, elapsed in results:
        stat = lf_stats[clfs[ci].lf_name]
        stat.matches += len(unit_matches)
        stat.documents += 1
        stat.elapsed_s += elapsed
        doc_elapsed[corpus[di].doc_id] += elapsed
        matches.extend(unit_matches)
        budget_events.extend(diags)
    budget_events.sort(key=lambda b: (b.doc_id, b.lf_name, b.window_index))
    return RunResult(
        matches=canonical_sort(matches),
        lf_stats=lf_stats,
        doc_elapsed_s=doc_elapsed,
        budget_events=budget_events,
        elapsed_s=time.perf_counter() - t_start,
    )
