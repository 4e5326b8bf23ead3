"""Match results and evaluation diagnostics."""
from __future__ import annotations

from dataclasses import dataclass

DEFAULT_BUDGET = 100_000


class EngineError(RuntimeError):
    pass


class CompileError(EngineError):
    """A labeling function that should have been validated failed to compile.

    Distinct from user-input errors: seeing this for a ruleset that passed
    validation is a defect in the engine or validator.
    """


class OracleSizeError(ValueError):
    """Brute-force oracle asked to enumerate an input above its size bound."""


@dataclass(frozen=True)
class CaptureSpan:
    name: str
    concept_id: str
    start: int
    end: int


@dataclass(frozen=True)
class Match:
    doc_id: str
    lf_name: str
    window_index: int
    start: int
    end: int
    captures: tuple[CaptureSpan, ...]


@dataclass(frozen=True)
class BudgetExceeded:
    doc_id: str
    lf_name: str
    scope: str
    window_index: int
    budget: int
