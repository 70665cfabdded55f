"""Conformance corpus: per-check sample files with expected-finding sidecars.

Layout::

    <root>/<check_id>/violate_NN.rs            planted violation(s)
    <root>/<check_id>/violate_NN.expected.json {"check_id", "compile", "expected": [{"rule_id", "line"}]}
    <root>/<check_id>/conform_NN.rs            must produce nothing for the check
    <root>/<check_id>/conform_NN.expected.json optional

Sidecars may also carry ``"config"`` (``{"crate_root": bool, "options": {...},
"toolchain": str | null}``)
and, on the unsafe half of a gating pair, ``"gating_pair": "conform_NN.rs"``.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .engine import run
from .registry import Profile, Registry
from .source import RustSyntaxError, parse_file

_CASE = re.compile(r"^(violate|conform)_(\d+)\.rs$")
_SIDECAR_KEYS = {"check_id", "compile", "expected", "config", "gating_pair", "reason"}
_CONFIG_KEYS = {"crate_root", "options", "toolchain"}


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusCase:
    check_id: str
    kind: str  # "violating" | "conforming"
    source_path: Path
    expected: tuple[tuple[str, int], ...]
    compile: bool = True
    config: dict[str, Any] = field(default_factory=dict, compare=False)
    gating_pair: str | None = None

    @property
    def name(self) -> str:
        return f"{self.check_id}/{self.source_path.name}"


@dataclass
class CaseResult:
    case: CorpusCase | None
    path: Path
    passed: bool
    actual: list[tuple[str, int]] = field(default_factory=list)
    missing: list[tuple[str, int]] = field(default_factory=list)
    unexpected: list[tuple[str, int]] = field(default_factory=list)
    error: str | None = None

    def describe(self) -> str:
        if self.error:
            return f"ERROR {self.path}: {self.error}"
        if self.passed:
            return f"PASS  {self.path} ({len(self.actual)} finding(s))"
        parts = [f"FAIL  {self.path}"]
        for rule, line in self.missing:
            parts.append(f"    expected [{rule}] at line {line}, not reported")
        for rule, line in self.unexpected:
            parts.append(f"    reported [{rule}] at line {line}, not expected")
        return "\n".join(parts)


@dataclass
class CorpusReport:
    results: list[CaseResult]

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> str:
        lines = [r.describe() for r in self.results]
        lines.append(f"{self.passed}/{len(self.results)} cases passed")
        return "\n".join(lines) + "\n"


def _read_sidecar(path: Path, check_id: str) -> dict[str, Any]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"unreadable sidecar {path.name}: {exc}") from exc
    if not isinstance(data, dict):
        raise CorpusError(f"{path.name}: sidecar must be a JSON object")
    extra = set(data) - _SIDECAR_KEYS
    if extra:
        raise CorpusError(f"{path.name}: unknown keys {sorted(extra)}")
    if data.get("check_id") != check_id:
        raise CorpusError(f"{path.name}: check_id {data.get('check_id')!r} does not match directory {check_id!r}")
    expected = data.get("expected")
    if not isinstance(expected, list) or not all(
        isinstance(e, dict) and isinstance(e.get("rule_id"), str) and isinstance(e.get("line"), int) for e in expected
    ):
        raise CorpusError(f"{path.name}: expected must be a list of {{rule_id, line}}")
    config = data.get("config", {})
    if not isinstance(config, dict) or set(config) - _CONFIG_KEYS:
        raise CorpusError(f"{path.name}: config accepts only {sorted(_CONFIG_KEYS)}")
    return data


def load_case(path: Path) -> CorpusCase:
    m = _CASE.match(path.name)
    if m is None:
        raise CorpusError(f"{path.name}: not a corpus case name")
    check_id = path.parent.name
    kind = "violating" if m.group(1) == "violate" else "conforming"
    sidecar = path.with_name(path.name[:-3] + ".expected.json")
    if sidecar.exists():
        data = _read_sidecar(sidecar, check_id)
    elif kind == "violating":
        raise CorpusError(f"missing sidecar {sidecar.name}")
    else:
        data = {"check_id": check_id, "compile": True, "expected": []}
    expected = tuple((e["rule_id"], e["line"]) for e in data["expected"])
    if kind == "violating" and not expected:
        raise CorpusError(f"{sidecar.name}: a violating case needs at least one expected finding")
    if kind == "conforming" and expected:
        raise CorpusError(f"{sidecar.name}: a conforming case expects no findings")
    n_lines = path.read_text(encoding="utf-8").count("\n") + 1
    bad = [line for _, line in expected if not 1 <= line <= n_lines]
    if bad:
        raise CorpusError(f"{sidecar.name}: expected line(s) {bad} outside the file")
    return CorpusCase(
        check_id=check_id,
        kind=kind,
        source_path=path,
        expected=expected,
        compile=bool(data.get("compile", True)),
        config=dict(data.get("config", {})),
        gating_pair=data.get("gating_pair"),
    )


def discover(root: Path | str) -> list[Path]:
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"corpus root {root} is not a directory")
    return sorted(p for p in root.glob("*/*.rs") if _CASE.match(p.name))


def run_case(case: CorpusCase, registry: Registry, profile: Profile) -> CaseResult:
    try:
        unit = parse_file(str(case.source_path))
    except (OSError, RustSyntaxError) as exc:
        return CaseResult(case, case.source_path, False, error=str(exc))
    opts = {**dict(profile.options), **case.config.get("options", {})}
    case_profile = Profile(profile.name, profile.enabled_overrides, profile.disabled_overrides, opts)
    roots = [str(case.source_path)] if case.config.get("crate_root") else []
    kwargs = {"toolchain": case.config["toolchain"]} if "toolchain" in case.config else {}
    result = run(registry, case_profile, [unit], crate_roots=roots, **kwargs)
    actual = sorted(
        (d.rule_id, d.line) for d in result.unsuppressed if d.check_id == case.check_id
    )
    want, got = Counter(case.expected), Counter(actual)
    missing = sorted((want - got).elements())
    unexpected = sorted((got - want).elements())
    return CaseResult(case, case.source_path, not missing and not unexpected, actual, missing, unexpected)


def run_corpus(root: Path | str, registry: Registry, profile: Profile | None = None) -> CorpusReport:
    profile = profile or Profile("all")
    results = []
    for path in discover(root):
        try:
            case = load_case(path)
        except (CorpusError, OSError) as exc:
            results.append(CaseResult(None, path, False, error=str(exc)))
            continue
        results.append(run_case(case, registry, profile))
    return CorpusReport(results)
