"""Bundled demo project: a 12-document synthetic CBA corpus with schema,
ruleset, gold spans, and expected coverage.

Materialize it into a working directory with::

    python -m lfkit.demo /tmp/demo
    lfkit run --config /tmp/demo/project.toml
"""
from __future__ import annotations

import shutil
import sys
from importlib import resources
from pathlib import Path

DEMO_PACKAGE = "lfkit.data"
DEMO_DIR = "demo"


def demo_source() -> Path:
    return Path(resources.files(DEMO_PACKAGE) / DEMO_DIR)


def materialize(target: str | Path) -> Path:
    """Copy the demo project into ``target``; returns the project root."""
    target = Path(target)
    target.mkdir(parents=True, exist_ok=True)
    src = demo_source()
    for entry in src.rglob("*"):
        rel = entry.relative_to(src)
        dest = target / rel
        if entry.is_dir():
            dest.mkdir(parents=True, exist_ok=True)
        else:
            dest.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(entry, dest)
    return target


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m lfkit.demo TARGET_DIR", file=sys.stderr)
        return 2
    root = materialize(argv[0])
    print(f"demo project written to {root}")
    print(f"next: lfkit run --config {root / 'project.toml'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
