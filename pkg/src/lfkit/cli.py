"""Batch entry point: ingest, check, run, stats, split, eval, export, serve, bench.

Exit codes: 0 ok, 2 user error (bad input, failed validation), 3 environment
error (missing files, I/O). Artifacts are written atomically; identical
inputs produce byte-identical artifacts apart from the `meta` field.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .docmodel import ConceptSchema, DocmodelError, Document, load_corpus
from .engine import CompiledLF, compile_ruleset, run_ruleset
from .evalkit import EvalError, load_gold, render_table, score_corpus
from .lfdsl import Diagnostic, LabelingFunction, errors_only, parse_ruleset, validate
from .project import ConfigError, ProjectConfig, load_config
from .reporting import (
    canonical_json,
    conflict_payload,
    eval_payload,
    labelset_lines,
    stats_payload,
)
from .weaksup import (
    Correction,
    LabeledSpan,
    SplitManifest,
    WeaksupError,
    aggregate,
    apply_corrections,
    effective_corrections,
    export_training,
    spans_jsonl_lines,
    split_corpus,
    votes_from_matches,
)

EXIT_OK = 0
EXIT_USER = 2
EXIT_ENV = 3


class UserError(Exception):
    pass


class EnvError(Exception):
    pass


def atomic_write(path: Path, content: str) -> None:
    """Write via temp file + rename; partial artifacts are never visible."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class ProjectState:
    config: ProjectConfig
    schema: ConceptSchema
    corpus: list[Document]
    lfs: list[LabelingFunction]
    compiled: list[CompiledLF]
    split: SplitManifest
    warnings: list[Diagnostic]


def load_rulesets(config: ProjectConfig) -> tuple[list[LabelingFunction], list[Diagnostic]]:
    lfs: list[LabelingFunction] = []
    diagnostics: list[Diagnostic] = []
    for path in config.ruleset_paths:
        if not path.is_file():
            raise EnvError(f"ruleset not found: {path}")
        result = parse_ruleset(path.read_text(encoding="utf-8"))
        for err in result.errors:
            diagnostics.append(
                Diagnostic(err.severity, f"{path.name}: {err.message}", err.line, err.col)
            )
        lfs.extend(result.functions)
    return lfs, diagnostics


def load_split(config: ProjectConfig, corpus: list[Document]) -> SplitManifest:
    """Saved manifest when present, otherwise the deterministic hash split."""
    if config.split_path.is_file():
        return SplitManifest.load(config.split_path)
    return split_corpus(
        [d.doc_id for d in corpus], ratios=config.ratios, seed=config.seed
    )


def load_state(config: ProjectConfig) -> ProjectState:
    if not config.schema_path.is_file():
        raise EnvError(f"schema not found: {config.schema_path}")
    try:
        schema = ConceptSchema.load(config.schema_path)
    except (DocmodelError, json.JSONDecodeError) as exc:
        raise UserError(f"bad schema: {exc}") from exc
    try:
        corpus = load_corpus(config.corpus_dir)
    except FileNotFoundError as exc:
        raise EnvError(str(exc)) from exc
    except DocmodelError as exc:
        raise UserError(str(exc)) from exc

    lfs, diagnostics = load_rulesets(config)
    diagnostics += validate(lfs, schema)
    errors = errors_only(diagnostics)
    if errors:
        raise RulesetInvalid(errors)
    compiled = compile_ruleset(lfs, schema)
    split = load_split(config, corpus)
    warnings = [d for d in diagnostics if d.severity == "warning"]
    return ProjectState(config, schema, corpus, lfs, compiled, split, warnings)


class RulesetInvalid(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("ruleset failed validation")
        self.diagnostics = diagnostics


def read_corrections(config: ProjectConfig) -> list[Correction]:
    path = config.corrections_path
    if path is None or not path.is_file():
        return []
    journal = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        journal.append(
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
    return journal


def corrected_votes(state: ProjectState) -> list[LabeledSpan]:
    run = run_ruleset(
        state.compiled, state.corpus, workers=state.config.workers, budget=state.config.budget
    )
    votes = votes_from_matches(run.matches)
    return apply_corrections(votes, read_corrections(state.config))


# --------------------------------------------------------------------------
# commands


def cmd_ingest(args, config: ProjectConfig) -> int:
    corpus = load_corpus(config.corpus_dir)
    rows = []
    for doc in corpus:
        rows.append(
            {
                "doc_id": doc.doc_id,
                "pages": len(doc.pages),
                "tokens": len(doc.tokens),
                "sentences": len(doc.sentences),
                "sections": len(doc.sections),
                "boilerplate_lines": len(doc.header_footer_spans),
            }
        )
    if args.json:
        print(canonical_json({"documents": rows}), end="")
    else:
        for r in rows:
            print(
                f"{r['doc_id']}: {r['pages']} pages, {r['tokens']} tokens, "
                f"{r['sentences']} sentences, {r['sections']} sections, "
                f"{r['boilerplate_lines']} boilerplate lines"
            )
        print(f"{len(rows)} documents ingested from {config.corpus_dir}")
    return EXIT_OK


def cmd_check(args, config: ProjectConfig) -> int:
    if not config.schema_path.is_file():
        raise EnvError(f"schema not found: {config.schema_path}")
    schema = ConceptSchema.load(config.schema_path)
    lfs, diagnostics = load_rulesets(config)
    diagnostics += validate(lfs, schema)
    payload = {
        "functions": [lf.name for lf in lfs],
        "diagnostics": [
            {
                "severity": d.severity,
                "message": d.message,
                "line": d.line,
                "col": d.col,
                "source": d.source,
            }
            for d in diagnostics
        ],
    }
    if args.json:
        print(canonical_json(payload), end="")
    else:
        for d in diagnostics:
            print(d.format(), file=sys.stderr)
        print(f"{len(lfs)} labeling functions, {len(diagnostics)} diagnostics")
    return EXIT_USER if errors_only(diagnostics) else EXIT_OK


def cmd_run(args, config: ProjectConfig) -> int:
    state = load_state(config)
    for w in state.warnings:
        print(w.format(), file=sys.stderr)
    t0 = time.perf_counter()
    run = run_ruleset(
        state.compiled, state.corpus, workers=config.workers, budget=config.budget
    )
    votes = apply_corrections(votes_from_matches(run.matches), read_corrections(config))
    resolved = aggregate(votes, state.lfs)

    config.out_dir.mkdir(parents=True, exist_ok=True)
    labelset_path = config.out_dir / "labelset.jsonl"
    resolved_path = config.out_dir / "resolved.jsonl"
    atomic_write(
        labelset_path, "".join(l + "\n" for l in labelset_lines(votes, state.corpus))
    )
    atomic_write(
        resolved_path, "".join(l + "\n" for l in spans_jsonl_lines(resolved.spans))
    )
    elapsed = time.perf_counter() - t0

    summary = {
        "documents": len(state.corpus),
        "labeling_functions": len(state.lfs),
        "votes": len(votes),
        "resolved_spans": len(resolved.spans),
        "budget_exceeded_windows": len(run.budget_events),
        "per_lf": {
            name: {
                "matches": stat.matches,
                "elapsed_s": round(stat.elapsed_s, 6),
            }
            for name, stat in sorted(run.lf_stats.items())
        },
        "artifacts": {"labelset": str(labelset_path), "resolved": str(resolved_path)},
        "meta": {"elapsed_s": round(elapsed, 3)},
    }
    if args.json:
        print(canonical_json(summary), end="")
    else:
        print(f"ran {len(state.lfs)} functions over {len(state.corpus)} documents")
        for name, stat in sorted(run.lf_stats.items()):
            print(f"  {name}: {stat.matches} matches in {stat.elapsed_s:.3f}s")
        print(f"votes {len(votes)}, resolved {len(resolved.spans)}")
        if run.budget_events:
            print(f"budget exceeded in {len(run.budget_events)} windows", file=sys.stderr)
        print(f"wrote {labelset_path} and {resolved_path}")
    return EXIT_OK


def cmd_stats(args, config: ProjectConfig) -> int:
    state = load_state(config)
    votes = corrected_votes(state)
    resolved = aggregate(votes, state.lfs)
    payload = stats_payload(resolved, votes, state.split, state.schema, state.corpus)
    if args.json:
        print(canonical_json(payload), end="")
    else:
        print(f"coverage over {payload['train_docs']} train documents:")
        for cid, entry in payload["concepts"].items():
            cov = "undefined" if entry["coverage_undefined"] else f"{entry['coverage']:.3f}"
            print(f"  {cid}: coverage {cov}, conflict {entry['conflict']:.3f}")
    return EXIT_OK


def cmd_split(args, config: ProjectConfig) -> int:
    corpus = load_corpus(config.corpus_dir)
    seed = config.seed if args.seed is None else args.seed
    manifest = split_corpus(
        [d.doc_id for d in corpus], ratios=config.ratios, seed=seed
    )
    atomic_write(config.split_path, manifest.to_json())
    sizes = {b: len(manifest.docs(b)) for b in ("train", "dev", "test")}
    if args.json:
        print(canonical_json({"path": str(config.split_path), "sizes": sizes}), end="")
    else:
        print(
            f"split {len(corpus)} documents into "
            f"{sizes['train']}/{sizes['dev']}/{sizes['test']} (seed {seed}) "
            f"-> {config.split_path}"
        )
    return EXIT_OK


def cmd_eval(args, config: ProjectConfig) -> int:
    state = load_state(config)
    if config.gold_path is None or not config.gold_path.is_file():
        raise UserError(
            "no gold file configured or present; cannot evaluate "
            f"(expected {config.gold_path})"
        )
    votes = corrected_votes(state)
    resolved = aggregate(votes, state.lfs)
    gold = load_gold(config.gold_path, state.corpus, state.split)

    buckets = ["dev", "test"] if args.bucket == "both" else [args.bucket]
    reports = {}
    for bucket in buckets:
        reports[bucket] = score_corpus(
            resolved,
            gold,
            bucket=bucket,
            split=state.split,
            schema=state.schema,
            corpus=state.corpus,
            policy_overrides=config.policy_overrides,
        )
    payload = eval_payload(reports.get("dev"), reports.get("test"))
    report_path = config.out_dir / "metrics.json"
    atomic_write(report_path, canonical_json(payload))
    if args.json:
        print(canonical_json(payload), end="")
    else:
        print(render_table(state.schema, reports.get("dev"), reports.get("test")))
        print(f"wrote {report_path}")
    return EXIT_OK


def cmd_export(args, config: ProjectConfig) -> int:
    state = load_state(config)
    votes = corrected_votes(state)
    resolved = aggregate(votes, state.lfs)
    warnings: list[str] = []
    files = export_training(
        resolved, state.corpus, state.split, args.format, config.out_dir / "export", warnings
    )
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.json:
        print(canonical_json({"files": [str(f) for f in files]}), end="")
    else:
        for f in files:
            print(f"wrote {f}")
    return EXIT_OK


def cmd_serve(args, config: ProjectConfig) -> int:
    import uvicorn

    from .service import create_app

    corpus_env = os.environ.get("LF_CORPUS_DIR")
    if corpus_env:
        config.corpus_dir = Path(corpus_env)
    journal_env = os.environ.get("LF_JOURNAL_PATH")
    if journal_env:
        config.corrections_path = Path(journal_env)
    state = load_state(config)
    app = create_app(state)
    port = int(os.environ.get("LF_PORT", args.port or 7070))
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return EXIT_OK


def cmd_bench(args, config: ProjectConfig | None) -> int:
    from .bench import run_bench

    report = run_bench(
        total_tokens=args.tokens,
        workers=args.workers or 4,
        seed=args.seed if args.seed is not None else 0,
    )
    if args.json:
        print(canonical_json(report), end="")
    else:
        print(
            f"corpus: {report['documents']} docs, {report['tokens']} tokens "
            f"(generated in {report['generate_s']}s)"
        )
        single = report["single_worker"]
        print(
            f"single worker: {single['elapsed_s']}s total, "
            f"{single['tokens_per_s']} tokens/s"
        )
        for name, tput in single["per_lf_tokens_per_s"].items():
            print(f"  {name}: {tput} tokens/s")
        multi = report["multi_worker"]
        print(
            f"{multi['workers']} workers: {multi['elapsed_s']}s, "
            f"speedup {multi['speedup']}x, identical labelset: {multi['identical']}"
        )
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfkit", description="weak-supervision labeling engine"
    )
    parser.add_argument("--version", action="version", version=f"lfkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, needs_config=True):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func, needs_config=needs_config)
        p.add_argument("--config", default="project.toml", help="project config path")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--workers", type=int, default=None, help="worker count override")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        return p

    add("ingest", cmd_ingest, "load the corpus and report per-document layers")
    add("check", cmd_check, "parse and validate rulesets")
    add("run", cmd_run, "evaluate rulesets and write labelset/resolved artifacts")
    add("stats", cmd_stats, "coverage and conflict over the train split")
    add("split", cmd_split, "write the deterministic corpus split manifest")
    p_eval = add("eval", cmd_eval, "score against gold for a split bucket")
    p_eval.add_argument("--bucket", choices=["dev", "test", "both"], default="both")
    p_export = add("export", cmd_export, "write training data for the train split")
    p_export.add_argument(
        "--format", choices=["spans_jsonl", "token_bio"], default="spans_jsonl"
    )
    p_serve = add("serve", cmd_serve, "start the authoring service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=None)
    p_bench = add("bench", cmd_bench, "synthetic-corpus throughput benchmark", needs_config=False)
    p_bench.add_argument("--tokens", type=int, default=1_000_000)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = None
        if args.needs_config:
            config = load_config(args.config)
            if args.workers is not None:
                if args.workers < 1:
                    raise UserError("workers must be >= 1")
                config.workers = args.workers
            if args.seed is not None:
                config.seed = args.seed
        return args.func(args, config)
    except RulesetInvalid as exc:
        for d in exc.diagnostics:
            print(d.format(), file=sys.stderr)
        return EXIT_USER
    except (UserError, ConfigError, WeaksupError, EvalError, DocmodelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except (EnvError, FileNotFoundError, PermissionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENV


if __name__ == "__main__":
    raise SystemExit(main())
