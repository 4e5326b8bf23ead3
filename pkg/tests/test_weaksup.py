"""Vote aggregation, coverage/conflict accounting, splitting, export."""
from __future__ import annotations

import json
import random

import pytest

from lfkit.docmodel import ingest_text
from lfkit.lfdsl import parse_ruleset
from lfkit.weaksup import (
    Correction,
    LabeledSpan,
    ResolvedLabels,
    ResolvedSpan,
    SplitManifest,
    WeaksupError,
    aggregate,
    apply_corrections,
    bio_lines,
    conflict_stats,
    coverage,
    effective_corrections,
    export_training,
    import_spans,
    snap_to_tokens,
    split_corpus,
    votes_from_matches,
)


def lfs_with_priorities(**priorities):
    src = "\n".join(
        f"lf {name} for c priority {p} {{ match: c:([]) }}"
        for name, p in priorities.items()
    )
    result = parse_ruleset(src)
    assert result.ok
    return result.functions


def vote(doc, concept, start, end, source):
    return LabeledSpan(doc, concept, start, end, source)


class TestAggregate:
    def test_priority_wins(self):
        lfs = lfs_with_priorities(a=10, b=20)
        votes = [vote("d", "c", 5, 9, "a"), vote("d", "c", 7, 12, "b")]
        resolved = aggregate(votes, lfs)
        assert [(s.start, s.end, s.sources) for s in resolved.spans] == [(5, 9, ("a",))]

    def test_identical_ranges_merge(self):
        lfs = lfs_with_priorities(a=10, b=20)
        votes = [vote("d", "c", 5, 9, "a"), vote("d", "c", 5, 9, "b")]
        resolved = aggregate(votes, lfs)
        assert [(s.start, s.end, s.sources) for s in resolved.spans] == [
            (5, 9, ("a", "b"))
        ]

    def test_equal_priority_longest_wins(self):
        lfs = lfs_with_priorities(a=10, b=10)
        votes = [vote("d", "c", 2, 6, "a"), vote("d", "c", 0, 10, "b")]
        resolved = aggregate(votes, lfs)
        assert [(s.start, s.end) for s in resolved.spans] == [(0, 10)]

    def test_leftmost_tiebreak(self):
        lfs = lfs_with_priorities(a=10, b=10)
        votes = [vote("d", "c", 4, 8, "a"), vote("d", "c", 2, 6, "b")]
        resolved = aggregate(votes, lfs)
        assert [(s.start, s.end) for s in resolved.spans] == [(2, 6)]

    def test_non_overlapping_all_kept(self):
        lfs = lfs_with_priorities(a=10)
        votes = [vote("d", "c", 0, 3, "a"), vote("d", "c", 5, 8, "a")]
        resolved = aggregate(votes, lfs)
        assert len(resolved.spans) == 2

    def test_unknown_source_rejected(self):
        with pytest.raises(WeaksupError):
            aggregate([vote("d", "c", 0, 3, "ghost")], lfs_with_priorities(a=1))

    def test_user_votes_outrank(self):
        lfs = lfs_with_priorities(a=1)
        votes = [vote("d", "c", 0, 10, "a"), vote("d", "c", 2, 5, "USER")]
        resolved = aggregate(votes, lfs)
        assert [(s.start, s.end, s.sources) for s in resolved.spans] == [
            (2, 5, ("USER",))
        ]

    def test_order_invariance(self):
        lfs = lfs_with_priorities(a=10, b=20, c=10)
        votes = [
            vote("d", "c", 0, 4, "a"),
            vote("d", "c", 3, 9, "b"),
            vote("d", "c", 8, 12, "c"),
            vote("d2", "c", 1, 2, "a"),
        ]
        rng = random.Random(5)
        base = aggregate(votes, lfs)
        for _ in range(10):
            shuffled = votes[:]
            rng.shuffle(shuffled)
            assert aggregate(shuffled, lfs) == base

    def test_idempotence(self):
        lfs = lfs_with_priorities(a=10, b=20)
        votes = [
            vote("d", "c", 0, 4, "a"),
            vote("d", "c", 2, 9, "b"),
            vote("d", "c", 11, 14, "b"),
        ]
        once = aggregate(votes, lfs)
        twice = aggregate(once.as_votes(), lfs)
        assert once == twice


class TestCoverage:
    def split_for(self, assignment):
        return SplitManifest(seed=0, ratios=(0.8, 0.1, 0.1), assignment=assignment)

    def test_nine_of_ten(self):
        assignment = {f"d{i}": "train" for i in range(10)}
        resolved = ResolvedLabels(
            [ResolvedSpan(f"d{i}", "c", 0, 3, ("a",)) for i in range(9)]
        )
        assert coverage(resolved, self.split_for(assignment), ["c"]) == {"c": 0.9}

    def test_empty_train_undefined(self):
        split = self.split_for({"d0": "dev"})
        resolved = ResolvedLabels([])
        assert coverage(resolved, split, ["c"]) == {"c": None}

    def test_monotone_in_lf_set(self):
        lfs = lfs_with_priorities(a=10, b=10)
        votes_a = [vote("d0", "c", 0, 3, "a")]
        votes_ab = votes_a + [vote("d1", "c", 4, 6, "b")]
        split = self.split_for({"d0": "train", "d1": "train"})
        cov_a = coverage(aggregate(votes_a, lfs), split, ["c"])
        cov_ab = coverage(aggregate(votes_ab, lfs), split, ["c"])
        assert cov_ab["c"] >= cov_a["c"]


class TestConflict:
    def test_overlap_conflict(self):
        votes = [vote("d", "c", 5, 9, "a"), vote("d", "c", 7, 12, "b")]
        assert conflict_stats(votes) == {"c": 1.0}

    def test_identical_votes_no_conflict(self):
        votes = [vote("d", "c", 5, 9, "a"), vote("d", "c", 5, 9, "b")]
        assert conflict_stats(votes) == {"c": 0.0}

    def test_disjoint_no_conflict(self):
        votes = [vote("d", "c", 0, 4, "a"), vote("d", "c", 6, 9, "b")]
        assert conflict_stats(votes) == {"c": 0.0}

    def test_same_source_no_conflict(self):
        votes = [vote("d", "c", 0, 6, "a"), vote("d", "c", 4, 9, "a")]
        assert conflict_stats(votes) == {"c": 0.0}


class TestSplit:
    def test_sizes_257(self):
        ids = [f"doc_{i:03d}" for i in range(257)]
        split = split_corpus(ids, (0.8, 0.1, 0.1), seed=42)
        sizes = {b: len(split.docs(b)) for b in ("train", "dev", "test")}
        assert sizes == {"train": 205, "dev": 25, "test": 27}

    def test_sizes_10(self):
        split = split_corpus([f"d{i}" for i in range(10)], seed=1)
        assert [len(split.docs(b)) for b in ("train", "dev", "test")] == [8, 1, 1]

    def test_order_independent_and_deterministic(self):
        ids = [f"d{i}" for i in range(30)]
        a = split_corpus(ids, seed=7)
        shuffled = ids[:]
        random.Random(3).shuffle(shuffled)
        b = split_corpus(shuffled, seed=7)
        assert a == b and a.to_json() == b.to_json()

    def test_bad_ratios(self):
        with pytest.raises(WeaksupError):
            split_corpus(["a", "b"], (0.8, 0.1, 0.2), seed=0)

    def test_duplicate_ids(self):
        with pytest.raises(WeaksupError):
            split_corpus(["a", "a"], seed=0)

    def test_partition(self):
        ids = [f"d{i}" for i in range(23)]
        split = split_corpus(ids, seed=9)
        assert sorted(split.assignment) == sorted(ids)
        all_docs = split.docs("train") + split.docs("dev") + split.docs("test")
        assert sorted(all_docs) == sorted(ids)

    def test_manifest_round_trip(self):
        split = split_corpus([f"d{i}" for i in range(12)], seed=4)
        assert SplitManifest.from_json(split.to_json()) == split


class TestCorrections:
    def test_reject_removes_span(self):
        votes = [vote("d", "c", 0, 4, "a"), vote("d", "c", 6, 9, "a")]
        fixed = apply_corrections(
            votes, [Correction("d", "c", 0, 4, "reject")]
        )
        assert [(v.start, v.end) for v in fixed] == [(6, 9)]

    def test_replace_moves_span(self):
        votes = [vote("d", "c", 0, 4, "a")]
        fixed = apply_corrections(
            votes, [Correction("d", "c", 0, 4, "replace", replacement=(0, 7))]
        )
        assert [(v.start, v.end, v.source) for v in fixed] == [(0, 7, "USER")]

    def test_accept_adds_user_vote(self):
        votes = [vote("d", "c", 0, 4, "a")]
        fixed = apply_corrections(votes, [Correction("d", "c", 0, 4, "accept")])
        assert (0, 4, "USER") in [(v.start, v.end, v.source) for v in fixed]

    def test_journal_replay_last_wins(self):
        journal = [
            Correction("d", "c", 0, 4, "reject", timestamp="t1"),
            Correction("d", "c", 0, 4, "accept", timestamp="t2"),
        ]
        effective = effective_corrections(journal)
        assert len(effective) == 1 and effective[0].verdict == "accept"


class TestExport:
    def demo_doc(self):
        return ingest_text("d1", "Employees accrue 8 hours monthly. Second sentence.")

    def test_bio_line_for_amount(self):
        doc = self.demo_doc()
        tok8 = next(t for t in doc.tokens if t.surface == "8")
        spans = [ResolvedSpan("d1", "sick_leave_amount", tok8.start, tok8.end, ("a",))]
        lines = bio_lines(doc, spans)
        assert "8\tB-sick_leave_amount" in lines

    def test_bio_multi_token_and_blank_line(self):
        doc = self.demo_doc()
        t8 = next(t for t in doc.tokens if t.surface == "8")
        th = next(t for t in doc.tokens if t.surface == "hours")
        spans = [ResolvedSpan("d1", "sick_leave_amount", t8.start, th.end, ("a",))]
        lines = bio_lines(doc, spans)
        assert "8\tB-sick_leave_amount" in lines
        assert "hours\tI-sick_leave_amount" in lines
        assert "" in lines  # sentence separator

    def test_bio_no_labels_all_o(self):
        doc = self.demo_doc()
        lines = bio_lines(doc, [])
        tags = {line.split("\t")[1] for line in lines if line}
        assert tags == {"O"}

    def test_snap_outward_with_warning(self):
        doc = self.demo_doc()
        t8 = next(t for t in doc.tokens if t.surface == "hours")
        warnings: list[str] = []
        spans = [ResolvedSpan("d1", "c", t8.start + 1, t8.end - 1, ("a",))]
        lines = bio_lines(doc, spans, warnings)
        assert "hours\tB-c" in lines
        assert warnings and "snapped" in warnings[0]
        assert snap_to_tokens(doc, t8.start + 1, t8.end - 1) == (t8.start, t8.end)

    def test_spans_export_import_round_trip(self, tmp_path):
        doc = self.demo_doc()
        lfs = lfs_with_priorities(a=10)
        t8 = next(t for t in doc.tokens if t.surface == "8")
        votes = [vote("d1", "c", t8.start, t8.end, "a")]
        resolved = aggregate(votes, lfs)
        split = SplitManifest(0, (0.8, 0.1, 0.1), {"d1": "train"})
        files = export_training(resolved, [doc], split, "spans_jsonl", tmp_path)
        assert len(files) == 1
        reimported = ResolvedLabels(import_spans(files[0]))
        assert reimported == resolved

    def test_export_train_only(self, tmp_path):
        doc1 = ingest_text("d1", "alpha beta")
        doc2 = ingest_text("d2", "gamma delta")
        resolved = ResolvedLabels(
            [
                ResolvedSpan("d1", "c", 0, 5, ("a",)),
                ResolvedSpan("d2", "c", 0, 5, ("a",)),
            ]
        )
        split = SplitManifest(0, (0.8, 0.1, 0.1), {"d1": "train", "d2": "test"})
        files = export_training(resolved, [doc1, doc2], split, "spans_jsonl", tmp_path)
        recs = [json.loads(l) for l in files[0].read_text().splitlines()]
        assert [r["doc"] for r in recs] == ["d1"]
