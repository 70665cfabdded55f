"""Shared helpers for the test suite."""
from __future__ import annotations

import shutil
from pathlib import Path

from misrust import engine
from misrust.registry import Profile, load_default_registry
from misrust.source import parse

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
REGISTRY = load_default_registry()
RUSTC = shutil.which("rustc")


def analyze(src: str, *, path: str = "sample.rs", profile: str = "all", options=None, crate_root=False, **kw):
    unit = parse(path, src)
    prof = Profile(profile, options=dict(options or {}))
    return engine.run(REGISTRY, prof, [unit], crate_roots=[path] if crate_root else [], **kw)


def findings(src: str, check_id: str, **kw) -> list[tuple[str, int]]:
    """(rule_id, line) of unsuppressed findings of one check."""
    res = analyze(src, **kw)
    return [(d.rule_id, d.line) for d in res.unsuppressed if d.check_id == check_id]


def lines(src: str, check_id: str, **kw) -> list[int]:
    return [line for _, line in findings(src, check_id, **kw)]
