"""Analysis driver: per-unit rule sets, check dispatch, deviations, aggregation."""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .checks import CHECKS, CheckDescriptor, CheckRun, option_defaults
from .checks.toolchain import PINNED_TOOLCHAIN
from .diagnostic import (
    RUN_LEVEL_SPAN,
    TOOL_ERROR_IDS,
    Deviation,
    Diagnostic,
)
from .index import SetIndex
from .registry import Profile, Registry, RuleSet, effective_rule_set
from .source import ITEM_KINDS, RustSyntaxError, SourceUnit, parse
from .unsafety import UnsafeOperation, classify_contexts, inventory, unit_has_unsafe

__all__ = [
    "AnalysisResult",
    "Deviation",
    "Diagnostic",
    "ENGINE_OPTIONS",
    "run",
    "scan_deviations",
]

_DEVIATION = re.compile(r"^ misrust-deviation\((?P<id>[^)]*)\)(?P<rest>.*)$", re.S)
_RULE_ID = re.compile(r"^(?:\d+\.\d+\.\d+|[A-Z]+(?:-[A-Z0-9]+)+)$")
TOOL_SEVERITY = "required"

# options consumed by the engine itself rather than by a check
ENGINE_OPTIONS = {"assume_unknown_calls_unsafe": False}


def _tool_diag(rule_id: str, unit_path: str, span, message: str) -> Diagnostic:
    return Diagnostic(rule_id, rule_id, TOOL_SEVERITY, span, message, "safe", unit_path)


def scan_deviations(unit: SourceUnit) -> tuple[list[Deviation], list[Diagnostic]]:
    """Deviation comments in ``unit`` plus DEV-EMPTY / DEV-BADID findings for malformed ones."""
    comment_lines = set()
    for c in unit.comments:
        if c.props["is_line"]:
            ls = unit.line_table[c.span.line_start - 1]
            if not unit.data[ls : c.span.byte_start].strip():
                comment_lines.add(c.span.line_start)
    item_starts: dict[int, int] = {}
    for n in unit.nodes:
        if n.kind in ITEM_KINDS:
            item_starts.setdefault(unit.item_start_line(n), n.span.line_start)

    devs: list[Deviation] = []
    diags: list[Diagnostic] = []
    for c in unit.comments:
        if not c.props["is_line"]:
            continue
        m = _DEVIATION.match(c.props["text"])
        if m is None:
            continue
        rule_id = m.group("id").strip()
        rest = m.group("rest")
        if not _RULE_ID.match(rule_id):
            diags.append(_tool_diag("DEV-BADID", unit.path, c.span, f"malformed rule id `{rule_id}` in deviation"))
            continue
        if not rest.startswith(":"):
            diags.append(_tool_diag("DEV-BADID", unit.path, c.span, "deviation must read `misrust-deviation(<id>): <why>`"))
            continue
        justification = rest[1:].strip()
        if not justification:
            diags.append(_tool_diag("DEV-EMPTY", unit.path, c.span, f"deviation for {rule_id} has no justification"))
            continue
        target = c.span.line_start + 1
        while target in comment_lines:
            target += 1
        if target in item_starts:
            lines = tuple(sorted({target, item_starts[target]}))
            devs.append(Deviation(rule_id, justification, c.span, "enclosing-item", lines))
        else:
            devs.append(Deviation(rule_id, justification, c.span, "next-line", (target,)))
    return devs, diags


@dataclass
class AnalysisResult:
    diagnostics: list[Diagnostic]
    files_analyzed: int
    files_failed_parse: int
    unsafe_inventory: dict[str, list[UnsafeOperation]]
    effective_sets: dict[str, RuleSet]
    has_unsafe: dict[str, bool] = field(default_factory=dict)
    deviations: dict[str, list[Deviation]] = field(default_factory=dict)
    # check ids that were dispatched on at least one unit (or the run)
    checks_run: frozenset[str] = frozenset()
    toolchain: str | None = PINNED_TOOLCHAIN
    profile: Profile = field(default_factory=Profile)

    @property
    def unsuppressed(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if not d.suppressed]

    @property
    def suppressed(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.suppressed]

    @property
    def tool_errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.rule_id in TOOL_ERROR_IDS]

    @property
    def any_unsafe(self) -> bool:
        return any(self.has_unsafe.values())


def _is_root(path: str, crate_roots: Sequence[str] | None) -> bool:
    if crate_roots is None:
        return os.path.basename(path) in ("main.rs", "lib.rs")
    target = os.path.normcase(os.path.abspath(path))
    return any(os.path.normcase(os.path.abspath(r)) == target for r in crate_roots)


def _tool_check_active(d: CheckDescriptor, profile: Profile) -> bool:
    if d.rule_id in profile.disabled_overrides:
        return False
    return profile.includes_unsafe_gated or d.rule_id in profile.enabled_overrides


def _dispatch(d: CheckDescriptor, run: CheckRun) -> list[Diagnostic]:
    try:
        return list(d.func(run))
    except Exception as exc:  # a broken check must not abort the run
        return [_tool_diag("CHK-INTERNAL", run.unit.path, RUN_LEVEL_SPAN, f"check {d.check_id} failed: {exc!r}")]


def run(
    registry: Registry,
    profile: Profile,
    units: Iterable[SourceUnit],
    *,
    failures: Iterable[RustSyntaxError] = (),
    toolchain: str | None = PINNED_TOOLCHAIN,
    crate_roots: Sequence[str] | None = None,
) -> AnalysisResult:
    units = sorted(units, key=lambda u: u.path)
    failures = list(failures)
    options: dict[str, Any] = {**ENGINE_OPTIONS, **option_defaults(), **dict(profile.options)}
    index = SetIndex.build(units)

    diagnostics: list[Diagnostic] = []
    inventories: dict[str, list[UnsafeOperation]] = {}
    sets: dict[str, RuleSet] = {}
    has_unsafe: dict[str, bool] = {}
    deviations: dict[str, list[Deviation]] = {}
    checks_run: set[str] = set()
    per_file = [d for d in CHECKS.values() if not d.run_level]

    for unit in units:
        ctx = classify_contexts(unit)
        ctx.operations = inventory(
            unit, ctx, index, assume_unknown_calls_unsafe=bool(options["assume_unknown_calls_unsafe"])
        )
        inventories[unit.path] = ctx.operations
        unsafe_here = unit_has_unsafe(unit)
        has_unsafe[unit.path] = unsafe_here
        rs = effective_rule_set(registry, profile, unsafe_here)
        sets[unit.path] = rs
        active = set(rs.active_checks)

        found: list[Diagnostic] = []
        for d in sorted(per_file, key=lambda d: d.check_id):
            if d.is_tool_rule:
                if not _tool_check_active(d, profile):
                    continue
            elif d.rule_id not in active:
                continue
            if d.gated_on_unsafe and not unsafe_here:
                continue
            g = registry.get(d.rule_id)
            crun = CheckRun(
                descriptor=d,
                unit=unit,
                ctx=ctx,
                index=index,
                options=options,
                severity=g.severity if g is not None else TOOL_SEVERITY,
                is_crate_root=_is_root(unit.path, crate_roots),
                toolchain=toolchain,
            )
            checks_run.add(d.check_id)
            found.extend(_dispatch(d, crun))

        devs, dev_diags = scan_deviations(unit)
        deviations[unit.path] = devs
        for diag in found:
            dev = next((v for v in devs if v.covers(diag)), None)
            diagnostics.append(diag.suppress(dev.justification) if dev else diag)
        diagnostics.extend(dev_diags)

    for err in failures:
        diagnostics.append(_tool_diag("PARSE-ERROR", err.path, err.span, err.message))

    run_sets = effective_rule_set(registry, profile, False)
    for d in sorted((d for d in CHECKS.values() if d.run_level), key=lambda d: d.check_id):
        if d.rule_id not in run_sets.active_checks:
            continue
        g = registry.get(d.rule_id)
        crun = CheckRun(
            descriptor=d,
            unit=_EMPTY_UNIT,
            ctx=classify_contexts(_EMPTY_UNIT),
            index=index,
            options=options,
            severity=g.severity if g is not None else TOOL_SEVERITY,
            toolchain=toolchain,
        )
        checks_run.add(d.check_id)
        diagnostics.extend(_dispatch(d, crun))

    diagnostics.sort(key=Diagnostic.sort_key)
    return AnalysisResult(
        diagnostics=diagnostics,
        files_analyzed=len(units),
        files_failed_parse=len(failures),
        unsafe_inventory=inventories,
        effective_sets=sets,
        has_unsafe=has_unsafe,
        deviations=deviations,
        checks_run=frozenset(checks_run),
        toolchain=toolchain,
        profile=profile,
    )


# stand-in unit handed to run-level checks
_EMPTY_UNIT = parse("<run>", "")


def active_check_ids(registry: Registry, profile: Profile, *, unsafe_present: bool) -> list[str]:
    """Check ids that would run on a unit with/without unsafe code under ``profile``."""
    rs = effective_rule_set(registry, profile, unsafe_present)
    out = []
    for d in CHECKS.values():
        if d.is_tool_rule:
            ok = _tool_check_active(d, profile)
        else:
            ok = d.rule_id in rs.active_checks
        if ok and (unsafe_present or not d.gated_on_unsafe):
            out.append(d.check_id)
    return sorted(out)


def profile_from(name: str, options: Mapping[str, Any] | None = None, enable=(), disable=()) -> Profile:
    return Profile(name, frozenset(enable), frozenset(disable), dict(options or {}))
