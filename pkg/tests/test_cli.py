"""CLI behavior on the bundled demo project."""
from __future__ import annotations

import json
from pathlib import Path

import pytest

from lfkit.cli import main
from lfkit.demo import materialize


@pytest.fixture()
def demo(tmp_path):
    return materialize(tmp_path / "demo")


def run_cli(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRun:
    def test_demo_run_ok(self, demo, capsys):
        code, out, err = run_cli(capsys, "run", "--config", str(demo / "project.toml"))
        assert code == 0
        assert (demo / "out" / "labelset.jsonl").is_file()
        assert (demo / "out" / "resolved.jsonl").is_file()
        assert "12 functions over 12 documents" in out

    def test_run_summary_lists_all_concepts(self, demo, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--config", str(demo / "project.toml"), "--json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["labeling_functions"] == 12
        resolved = (demo / "out" / "resolved.jsonl").read_text().splitlines()
        concepts = {json.loads(line)["concept"] for line in resolved}
        assert len(concepts) == 8

    def test_unknown_concept_exits_2(self, demo, capsys):
        ruleset = demo / "rules" / "demo.lf"
        ruleset.write_text(
            ruleset.read_text() + '\nlf bad for wages { match: wages:([]) }\n'
        )
        code, _, err = run_cli(capsys, "run", "--config", str(demo / "project.toml"))
        assert code == 2
        assert "wages" in err

    def test_missing_corpus_exits_3(self, demo, capsys):
        conf = demo / "project.toml"
        conf.write_text(conf.read_text().replace('corpus_dir = "corpus"', 'corpus_dir = "nope"'))
        code, _, err = run_cli(capsys, "run", "--config", str(demo / "project.toml"))
        assert code == 3

    def test_idempotent_artifacts(self, demo, capsys):
        config = str(demo / "project.toml")
        run_cli(capsys, "run", "--config", config)
        first = (demo / "out" / "labelset.jsonl").read_bytes()
        run_cli(capsys, "run", "--config", config)
        assert (demo / "out" / "labelset.jsonl").read_bytes() == first


class TestCheck:
    def test_valid_ruleset(self, demo, capsys):
        code, out, _ = run_cli(capsys, "check", "--config", str(demo / "project.toml"))
        assert code == 0
        assert "12 labeling functions, 0 diagnostics" in out

    def test_syntax_error_reported(self, demo, capsys):
        (demo / "rules" / "demo.lf").write_text("lf broken for { match: }")
        code, out, err = run_cli(
            capsys, "check", "--config", str(demo / "project.toml")
        )
        assert code == 2


class TestStats:
    def test_matches_hand_count(self, demo, capsys):
        code, out, _ = run_cli(
            capsys, "stats", "--config", str(demo / "project.toml"), "--json"
        )
        assert code == 0
        payload = json.loads(out)
        expected = json.loads((demo / "expected_coverage.json").read_text())
        for cid, value in expected.items():
            assert payload["concepts"][cid]["coverage"] == pytest.approx(value, abs=1e-6)


class TestSplit:
    def test_byte_identical_across_runs(self, demo, capsys):
        config = str(demo / "project.toml")
        run_cli(capsys, "split", "--config", config, "--seed", "7")
        first = (demo / "out" / "split.json").read_bytes()
        run_cli(capsys, "split", "--config", config, "--seed", "7")
        assert (demo / "out" / "split.json").read_bytes() == first

    def test_sizes(self, demo, capsys):
        code, out, _ = run_cli(
            capsys, "split", "--config", str(demo / "project.toml"), "--json"
        )
        assert json.loads(out)["sizes"] == {"train": 9, "dev": 1, "test": 2}


class TestEval:
    def test_perfect_demo_scores(self, demo, capsys):
        code, out, _ = run_cli(
            capsys, "eval", "--config", str(demo / "project.toml"), "--json"
        )
        assert code == 0
        payload = json.loads(out)
        for bucket in ("dev", "test"):
            for score in payload[bucket]["scores"]:
                assert score["precision"] == 100.0
                assert score["recall"] == 100.0
                assert score["f1"] == 100.0

    def test_eval_without_gold_exits_2(self, demo, capsys):
        gold = demo / "gold.jsonl"
        gold.unlink()
        code, _, err = run_cli(
            capsys, "eval", "--config", str(demo / "project.toml"), "--bucket", "test"
        )
        assert code == 2
        assert "gold" in err.lower()


class TestExport:
    def test_spans_round_trip(self, demo, capsys):
        from lfkit.weaksup import ResolvedLabels, import_spans

        config = str(demo / "project.toml")
        code, out, _ = run_cli(capsys, "export", "--config", config, "--json")
        assert code == 0
        files = json.loads(out)["files"]
        spans = import_spans(files[0])
        assert spans  # train docs have labels
        docs = {s.doc_id for s in spans}
        assert "cba_009" not in docs  # dev doc excluded

    def test_bio_export(self, demo, capsys):
        config = str(demo / "project.toml")
        code, out, _ = run_cli(
            capsys, "export", "--config", config, "--format", "token_bio", "--json"
        )
        assert code == 0
        files = json.loads(out)["files"]
        assert len(files) == 9  # one per train doc
        sample = Path(files[0]).read_text()
        assert "\tB-" in sample and "\tO\n" in sample


class TestIngest:
    def test_reports_layers(self, demo, capsys):
        code, out, _ = run_cli(
            capsys, "ingest", "--config", str(demo / "project.toml"), "--json"
        )
        assert code == 0
        docs = json.loads(out)["documents"]
        assert len(docs) == 12
        three_pagers = [d for d in docs if d["pages"] == 3]
        assert {d["doc_id"] for d in three_pagers} == {"cba_001", "cba_011"}
