"""Project configuration shared by the CLI and the service."""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .engine import DEFAULT_BUDGET
from .evalkit import Policy


class ConfigError(ValueError):
    """Bad configuration content (a user error, not an environment one)."""


@dataclass
class ProjectConfig:
    root: Path
    corpus_dir: Path
    schema_path: Path
    ruleset_paths: list[Path]
    out_dir: Path
    split_path: Path
    gold_path: Path | None = None
    corrections_path: Path | None = None
    policy_overrides: dict[str, Policy] = field(default_factory=dict)
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)


def load_config(path: str | Path) -> ProjectConfig:
    """Read project.toml; paths resolve relative to the file's directory."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config not found: {path}")
    with open(path, "rb") as f:
        try:
            raw = tomllib.load(f)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    section = raw.get("project", {})
    root = path.parent

    def resolve(value: str) -> Path:
        return (root / value).resolve()

    try:
        corpus_dir = resolve(section["corpus_dir"])
        schema_path = resolve(section["schema"])
        ruleset_paths = [resolve(p) for p in section["rulesets"]]
    except KeyError as exc:
        raise ConfigError(f"{path}: missing required key {exc.args[0]!r}") from exc

    workers = int(section.get("workers", 1))
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    ratios = tuple(section.get("ratios", (0.8, 0.1, 0.1)))
    if len(ratios) != 3:
        raise ConfigError("ratios must have three entries")

    policies = {}
    for concept_id, text in raw.get("policies", {}).items():
        policies[concept_id] = Policy.parse(text)

    gold = section.get("gold")
    corrections = section.get("corrections")
    return ProjectConfig(
        root=root,
        corpus_dir=corpus_dir,
        schema_path=schema_path,
        ruleset_paths=ruleset_paths,
        out_dir=resolve(section.get("out_dir", "out")),
        split_path=resolve(section.get("split", "out/split.json")),
        gold_path=resolve(gold) if gold else None,
        corrections_path=resolve(corrections) if corrections else None,
        policy_overrides=policies,
        workers=workers,
        budget=int(section.get("budget", DEFAULT_BUDGET)),
        seed=int(section.get("seed", 0)),
        ratios=ratios,
    )
