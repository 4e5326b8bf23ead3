"""Span matching, F1 arithmetic, corpus scoring."""
from __future__ import annotations

import pytest

from lfkit.docmodel import Concept, ConceptSchema, ingest_text
from lfkit.evalkit import (
    ConceptScore,
    EvalError,
    Policy,
    default_policy,
    f1,
    jaccard,
    load_gold,
    match_spans,
    render_table,
    score_corpus,
)
from lfkit.weaksup import LabeledSpan, ResolvedLabels, ResolvedSpan, SplitManifest


class TestMatchSpans:
    def test_exact_match(self):
        assert match_spans([(5, 9)], [(5, 9)], Policy.exact()) == (1, 0, 0)

    def test_overlap_governed_by_jaccard(self):
        assert jaccard((5, 9), (5, 12)) == pytest.approx(4 / 7)
        assert match_spans([(5, 9)], [(5, 12)], Policy.overlap(0.5)) == (1, 0, 0)
        assert match_spans([(5, 9)], [(5, 12)], Policy.overlap(0.6)) == (0, 1, 1)

    def test_missing_prediction(self):
        assert match_spans([], [(0, 3)], Policy.exact()) == (0, 0, 1)

    def test_one_to_one(self):
        # two predictions overlap one gold; only one may claim the match
        got = match_spans([(0, 10), (2, 10)], [(0, 10)], Policy.overlap(0.5))
        assert got == (1, 1, 0)

    def test_counts_symmetric(self):
        pred, gold = [(0, 5), (8, 12)], [(0, 5), (20, 24)]
        tp, fp, fn = match_spans(pred, gold, Policy.exact())
        tp2, fp2, fn2 = match_spans(gold, pred, Policy.exact())
        assert (tp, fp, fn) == (tp2, fn2, fp2)

    def test_bad_threshold(self):
        with pytest.raises(EvalError):
            Policy.overlap(0.0)
        with pytest.raises(EvalError):
            Policy.overlap(1.5)


class TestF1:
    def test_published_rows(self):
        assert round(f1(88.9, 79.0), 1) == 83.7
        assert round(f1(98.9, 94.8), 1) == 96.8
        assert round(f1(96.8, 80.1), 1) == 87.7

    def test_zero_edge(self):
        assert f1(0, 0) == 0

    def test_symmetry_and_bounds(self):
        assert f1(70, 90) == f1(90, 70)
        assert f1(70, 90) <= 90
        assert f1(80, 80) == pytest.approx(80)


def tiny_schema():
    return ConceptSchema(
        [
            Concept("amount", "ENTITY", "Amount"),
            Concept("start_date", "ENTITY", "Start Date"),
            Concept("clause", "CLAUSE", "Clause"),
        ]
    )


class TestPolicies:
    def test_defaults(self):
        schema = tiny_schema()
        assert default_policy(schema, "amount") == Policy.overlap(0.5)
        assert default_policy(schema, "start_date") == Policy.exact()
        assert default_policy(schema, "clause") == Policy.overlap(0.3)

    def test_parse(self):
        assert Policy.parse("exact") == Policy.exact()
        assert Policy.parse("overlap:0.3") == Policy.overlap(0.3)
        with pytest.raises(EvalError):
            Policy.parse("fuzzy")


class TestScoreCorpus:
    def setup_case(self):
        docs = [
            ingest_text("d1", "Employees accrue 8 hours monthly."),
            ingest_text("d2", "Workers accrue 12 hours yearly."),
        ]
        split = SplitManifest(0, (0.8, 0.1, 0.1), {"d1": "dev", "d2": "test"})
        return docs, split

    def span_for(self, doc, surface, concept):
        t = next(t for t in doc.tokens if t.surface == surface)
        return ResolvedSpan(doc.doc_id, concept, t.start, t.end, ("a",))

    def test_perfect_extraction(self):
        docs, split = self.setup_case()
        schema = tiny_schema()
        resolved = ResolvedLabels([self.span_for(docs[0], "8", "amount")])
        gold = [
            LabeledSpan("d1", "amount", resolved.spans[0].start, resolved.spans[0].end, "GOLD")
        ]
        report = score_corpus(
            resolved, gold, bucket="dev", split=split, schema=schema, corpus=docs
        )
        amount = next(s for s in report.scores if s.concept_id == "amount")
        assert (amount.precision, amount.recall, amount.f1) == (100.0, 100.0, 100.0)

    def test_half_precision(self):
        docs, split = self.setup_case()
        schema = tiny_schema()
        good = self.span_for(docs[0], "8", "amount")
        bad = self.span_for(docs[0], "monthly", "amount")
        resolved = ResolvedLabels([good, bad])
        gold = [LabeledSpan("d1", "amount", good.start, good.end, "GOLD")]
        report = score_corpus(
            resolved, gold, bucket="dev", split=split, schema=schema, corpus=docs
        )
        amount = next(s for s in report.scores if s.concept_id == "amount")
        assert amount.tp == 1 and amount.fp == 1 and amount.fn == 0
        assert amount.precision == 50.0 and amount.recall == 100.0
        assert round(amount.f1, 1) == 66.7

    def test_empty_gold_flagged(self):
        docs, split = self.setup_case()
        schema = tiny_schema()
        resolved = ResolvedLabels([])
        report = score_corpus(
            resolved, [], bucket="dev", split=split, schema=schema, corpus=docs
        )
        for s in report.scores:
            assert s.undefined_recall and s.recall == 0.0

    def test_unknown_gold_doc_rejected(self):
        docs, split = self.setup_case()
        gold = [LabeledSpan("ghost", "amount", 0, 3, "GOLD")]
        with pytest.raises(EvalError, match="ghost"):
            score_corpus(
                ResolvedLabels([]),
                gold,
                bucket="dev",
                split=split,
                schema=tiny_schema(),
                corpus=docs,
            )

    def test_gold_loader_validates(self, tmp_path):
        docs, split = self.setup_case()
        gold_file = tmp_path / "gold.jsonl"
        gold_file.write_text(
            '{"doc": "d1", "concept": "amount", "start": 0, "end": 4}\n'
        )
        spans = load_gold(gold_file, docs, split)
        assert spans[0].source == "GOLD"
        # duplicate rejected
        gold_file.write_text(
            '{"doc": "d1", "concept": "amount", "start": 0, "end": 4}\n' * 2
        )
        with pytest.raises(EvalError, match="duplicate"):
            load_gold(gold_file, docs, split)

    def test_table_render(self):
        docs, split = self.setup_case()
        schema = tiny_schema()
        report = score_corpus(
            ResolvedLabels([]), [], bucket="dev", split=split, schema=schema, corpus=docs
        )
        table = render_table(schema, report, None)
        assert "Concept" in table and "Dev F1" in table
        assert "Start Date" in table


class TestCountProperties:
    def test_adding_prediction_never_increases_fn(self):
        gold = [(0, 5), (10, 15)]
        base_preds = [(0, 5)]
        _, _, fn_base = match_spans(base_preds, gold, Policy.overlap(0.5))
        _, _, fn_more = match_spans(base_preds + [(10, 15)], gold, Policy.overlap(0.5))
        assert fn_more <= fn_base

    def test_adding_gold_never_increases_fp(self):
        preds = [(0, 5), (10, 15)]
        _, fp_base, _ = match_spans(preds, [(0, 5)], Policy.overlap(0.5))
        _, fp_more, _ = match_spans(preds, [(0, 5), (10, 15)], Policy.overlap(0.5))
        assert fp_more <= fp_base
