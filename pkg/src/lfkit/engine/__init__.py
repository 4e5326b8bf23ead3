"""Compiled labeling-function evaluation."""

from .compiler import CompiledGuard, CompiledLF, compile_lf, compile_ruleset
from .matcher import guard_satisfied, match_document, windows_for
from .oracle import MAX_ORACLE_TOKENS, brute_force_match
from .runner import LFStat, RunResult, canonical_sort, run_ruleset
from .types import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    CaptureSpan,
    CompileError,
    EngineError,
    Match,
    OracleSizeError,
)

__all__ = [
    "BudgetExceeded",
    "CaptureSpan",
    "CompileError",
    "CompiledGuard",
    "CompiledLF",
    "DEFAULT_BUDGET",
    "EngineError",
    "LFStat",
    "MAX_ORACLE_TOKENS",
    "Match",
    "OracleSizeError",
    "RunResult",
    "brute_force_match",
    "canonical_sort",
    "compile_lf",
    "compile_ruleset",
    "guard_satisfied",
    "match_document",
    "run_ruleset",
    "windows_for",
]
