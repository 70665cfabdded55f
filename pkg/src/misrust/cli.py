"""``misrust`` command line: check, explain, stats, list, corpus."""
from __future__ import annotations

import argparse
import difflib
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence, TextIO

from . import __version__
from .checks import CHECKS, option_defaults
from .checks.toolchain import PINNED_TOOLCHAIN
from .corpus import CorpusError, run_corpus
from .engine import ENGINE_OPTIONS, run
from .registry import (
    EXPECTED_TOPIC_COUNTS,
    Profile,
    Registry,
    RegistryCountWarning,
    RegistryError,
    class_counts,
    load_default_registry,
    load_registry,
    query,
    topic_counts,
    validate_aggregates,
)
from .report import FORMATS, render
from .source import RustSyntaxError, parse_file

EXIT_OK, EXIT_VIOLATIONS, EXIT_TOOL_ERROR = 0, 1, 2
PROFILES = ("safe", "unsafe", "all", "custom")
_CONFIG_KEYS = {"toolchain", "profile", "crate_roots", "rules", "options"}
_RULES_KEYS = {"enable", "disable"}


class UsageError(Exception):
    """Bad input the user can fix; reported on stderr with exit code 2."""


@dataclass
class Config:
    toolchain: str | None = PINNED_TOOLCHAIN
    profile: str | None = None
    crate_roots: list[str] | None = None
    enable: list[str] = field(default_factory=list)
    disable: list[str] = field(default_factory=list)
    options: dict[str, Any] = field(default_factory=dict)


def _known_options() -> dict[str, Any]:
    return {**ENGINE_OPTIONS, **option_defaults()}


def _check_option(name: str, value: Any, default: Any) -> None:
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise UsageError(f"config: option {name!r} must be true or false")
    elif isinstance(default, list):
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise UsageError(f"config: option {name!r} must be a list of strings")


def load_config(path: str) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("config must be a JSON object")
    unknown = sorted(set(raw) - _CONFIG_KEYS)
    if unknown:
        raise UsageError(f"config: unknown key(s) {', '.join(unknown)}")

    cfg = Config(toolchain=raw.get("toolchain"))
    if cfg.toolchain is not None and not isinstance(cfg.toolchain, str):
        raise UsageError("config: toolchain must be a string")
    if "profile" in raw:
        if raw["profile"] not in PROFILES:
            raise UsageError(f"config: profile must be one of {', '.join(PROFILES)}")
        cfg.profile = raw["profile"]
    if "crate_roots" in raw:
        roots = raw["crate_roots"]
        if not isinstance(roots, list) or not all(isinstance(r, str) for r in roots):
            raise UsageError("config: crate_roots must be a list of paths")
        base = Path(path).resolve().parent
        cfg.crate_roots = [str((base / r).resolve()) for r in roots]
    rules = raw.get("rules", {})
    if not isinstance(rules, dict) or set(rules) - _RULES_KEYS:
        raise UsageError("config: rules accepts only 'enable' and 'disable' lists")
    cfg.enable = list(rules.get("enable", []))
    cfg.disable = list(rules.get("disable", []))
    both = sorted(set(cfg.enable) & set(cfg.disable))
    if both:
        raise UsageError(f"config: rules both enabled and disabled: {', '.join(both)}")
    options = raw.get("options", {})
    if not isinstance(options, dict):
        raise UsageError("config: options must be an object")
    known = _known_options()
    for name, value in options.items():
        if name not in known:
            raise UsageError(f"config: unknown option {name!r} (known: {', '.join(sorted(known))})")
        _check_option(name, value, known[name])
    cfg.options = dict(options)
    return cfg


def load_registry_for(path: str | None, err: TextIO) -> Registry:
    path = path or os.environ.get("MISRUST_REGISTRY") or None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RegistryCountWarning)
        try:
            if path is None:
                reg = load_default_registry()
            else:
                with open(path, encoding="utf-8") as fh:
                    reg = load_registry(fh)
        except OSError as exc:
            raise UsageError(f"cannot read registry {path}: {exc.strerror}") from exc
        except RegistryError as exc:
            raise UsageError(f"invalid registry {path}: {exc}") from exc
    for w in caught:
        print(f"warning: {w.message}", file=err)
    return reg


def collect_sources(paths: Sequence[str]) -> list[str]:
    files: list[str] = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            files.extend(str(f) for f in sorted(path.rglob("*.rs")))
        elif path.is_file():
            files.append(str(path))
        else:
            raise UsageError(f"no such file or directory: {p}")
    return sorted(dict.fromkeys(files))


def cmd_check(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    registry = load_registry_for(args.registry, err)
    cfg = load_config(args.config) if args.config else Config()
    for gid in cfg.enable + cfg.disable:
        if gid not in registry and gid not in {d.rule_id for d in CHECKS.values()}:
            raise UsageError(f"config: rules name unknown guideline {gid!r}")
    profile = Profile(
        args.profile or cfg.profile or "all",
        frozenset(cfg.enable),
        frozenset(cfg.disable),
        cfg.options,
    )
    units, failures = [], []
    for f in collect_sources(args.paths):
        try:
            units.append(parse_file(f))
        except RustSyntaxError as exc:
            failures.append(exc)
            print(f"error: {exc}", file=err)
        except (OSError, UnicodeDecodeError) as exc:
            raise UsageError(f"cannot read {f}: {exc}") from exc
    result = run(registry, profile, units, failures=failures, toolchain=cfg.toolchain, crate_roots=cfg.crate_roots)
    out.write(render(registry, result, args.format))
    for d in result.tool_errors:
        if d.rule_id != "PARSE-ERROR":
            print(f"error: {d.file}: {d.message}", file=err)
    if result.tool_errors:
        return EXIT_TOOL_ERROR
    return EXIT_VIOLATIONS if result.unsuppressed else EXIT_OK


def explain_page(registry: Registry, gid: str) -> str:
    g = registry[gid]
    check = CHECKS.get(g.check_id) if g.check_id else None
    if check is not None:
        gate = "runs only on files containing unsafe code" if check.gated_on_unsafe else "runs on every file"
        availability = f"{check.check_id} ({gate})"
    else:
        availability = "none (manual review)" if g.decidability != "automatic" else "none"
    lines = [
        f"{g.display_id}: {g.title_summary}",
        f"  kind:          {g.kind}",
        f"  topic:         {g.topic}",
        f"  class:         {g.label} ({_CLASS_TEXT[g.label]})",
        f"  safe_required: {str(g.safe_required).lower()}",
        f"  severity:      {g.severity}",
        f"  decidability:  {g.decidability}",
        f"  check:         {availability}",
    ]
    if g.adaptation_note:
        lines.append(f"  adaptation:    {g.adaptation_note}")
    return "\n".join(lines) + "\n"


_CLASS_TEXT = {
    "C1": "C++ standard library only; not applicable",
    "C2": "feature does not exist in Rust; not applicable",
    "C3": "satisfied by language",
    "C4": "required in unsafe Rust",
    "C6": "required in unsafe and safe Rust",
    "C5": "needs adaptation",
}


def cmd_explain(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    registry = load_registry_for(args.registry, err)
    gid = args.rule_id.removeprefix("Dir ").removeprefix("Rule ").strip()
    if gid not in registry:
        near = difflib.get_close_matches(gid, registry.ids, n=3, cutoff=0.6)
        hint = f"; did you mean {', '.join(near)}?" if near else ""
        print(f"error: unknown guideline {args.rule_id!r}{hint}", file=err)
        return EXIT_TOOL_ERROR
    out.write(explain_page(registry, gid))
    return EXIT_OK


def stats_text(registry: Registry) -> tuple[str, bool]:
    counts = class_counts(registry)
    total = len(registry)

    def pct(n: int) -> str:
        return f"{100.0 * n / total:.2f}" if total else "0.00"

    rows = [
        ("Not applicable (C1+C2)", counts["C1"] + counts["C2"]),
        ("  C1 standard library only", counts["C1"]),
        ("  C2 feature absent in Rust", counts["C2"]),
        ("Applicable (C3+C4+C5)", counts["C3"] + counts["C4"] + counts["C5"]),
        ("  C3 satisfied by language", counts["C3"]),
        ("  Still relevant (C4+C5)", counts["C4"] + counts["C5"]),
        ("    C4 required in unsafe Rust", counts["C4"]),
        ("      C6 also required in safe Rust", counts["C6"]),
        ("    C5 needs adaptation", counts["C5"]),
    ]
    lines = [f"Guideline classes ({total} guidelines)", f"{'class':<38}{'count':>7}{'%':>9}"]
    lines += [f"{label:<38}{n:>7}{pct(n):>9}" for label, n in rows]
    lines += ["", "Still-relevant rules per topic", f"{'topic':<32}{'relevant':>10}{'%':>9}"]
    topics = topic_counts(registry)
    for topic in list(EXPECTED_TOPIC_COUNTS) + [t for t in topics if t not in EXPECTED_TOPIC_COUNTS]:
        num, den = topics.get(topic, (0, 0))
        share = f"{100.0 * num / den:.2f}" if den else "-"
        lines.append(f"{topic:<32}{f'{num}/{den}':>10}{share:>9}")
    lines += ["", "Validation"]
    ok = True
    for c in validate_aggregates(registry):
        ok &= c.passed
        mark = "PASS" if c.passed else "FAIL"
        lines.append(f"{mark}  {c.constraint} (expected {_fmt(c.expected)}, got {_fmt(c.actual)})")
    return "\n".join(lines) + "\n", ok


def _fmt(v: Any) -> str:
    return f"{float(v):.4f}" if isinstance(v, Fraction) else str(v)


def cmd_stats(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    registry = load_registry_for(args.registry, err)
    text, ok = stats_text(registry)
    out.write(text)
    return EXIT_OK if ok else EXIT_VIOLATIONS


def cmd_list(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    registry = load_registry_for(args.registry, err)
    filters: dict[str, Any] = {}
    for key in ("class", "topic", "decidability", "kind"):
        value = getattr(args, key)
        if value is not None:
            filters[key] = value
    if args.safe_required is not None:
        filters["safe_required"] = args.safe_required == "true"
    try:
        rows = query(registry, **filters)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for g in rows:
        out.write(f"{g.display_id:<12}{g.label:<4}{g.decidability:<11}{g.check_id or '-':<20}{g.topic}\n")
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    registry = load_registry_for(args.registry, err)
    try:
        report = run_corpus(args.root, registry, Profile(args.profile))
    except CorpusError as exc:
        raise UsageError(str(exc)) from exc
    out.write(report.summary())
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="misrust", description="MISRA C++:2023 guideline checks for Rust sources")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_registry(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--registry", metavar="FILE", help="guideline dataset (default: bundled; env MISRUST_REGISTRY)")
        return p

    p = with_registry(sub.add_parser("check", help="analyse Rust files or directories"))
    p.add_argument("paths", nargs="+")
    p.add_argument("--profile", choices=PROFILES, default=None, help="default: config value, else 'all'")
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--config", metavar="FILE")
    p.set_defaults(func=cmd_check)

    p = with_registry(sub.add_parser("explain", help="describe one guideline"))
    p.add_argument("rule_id")
    p.set_defaults(func=cmd_explain)

    p = with_registry(sub.add_parser("stats", help="class/topic distribution and dataset validation"))
    p.set_defaults(func=cmd_stats)

    p = with_registry(sub.add_parser("list", help="query the guideline registry"))
    p.add_argument("--class", dest="class", metavar="C1..C6")
    p.add_argument("--topic")
    p.add_argument("--decidability", choices=("automatic", "manual", "hybrid"))
    p.add_argument("--kind", choices=("rule", "directive"))
    p.add_argument("--safe-required", choices=("true", "false"))
    p.set_defaults(func=cmd_list)

    p = with_registry(sub.add_parser("corpus", help="run the conformance corpus"))
    p.add_argument("root", nargs="?", default="corpus")
    p.add_argument("--profile", choices=PROFILES, default="all")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_TOOL_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args, out, err)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_TOOL_ERROR


if __name__ == "__main__":
    sys.exit(main())
