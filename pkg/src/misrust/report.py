"""Compliance matrix and output rendering (text / json / summary)."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .diagnostic import TOOL_RULE_IDS, Diagnostic
from .engine import AnalysisResult
from .registry import GuidelineClass, Registry

STATUSES = ("NotApplicable", "GuaranteedByLanguage", "Compliant", "Violated", "ManualReview", "Unchecked")
TOTAL_KEYS = {
    "NotApplicable": "not_applicable",
    "GuaranteedByLanguage": "guaranteed",
    "Compliant": "compliant",
    "Violated": "violated",
    "ManualReview": "manual",
    "Unchecked": "unchecked",
}
FORMATS = ("text", "json", "summary")


class ComplianceError(ValueError):
    """The analysis result cites rule ids the registry does not know."""


@dataclass(frozen=True)
class GuidelineStatus:
    status: str
    count: int | None = None

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if (self.status == "Violated") != (self.count is not None and self.count >= 1):
            raise ValueError("Violated requires count >= 1 and only Violated carries a count")

    def __str__(self) -> str:
        return f"Violated({self.count})" if self.status == "Violated" else self.status

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status}
        if self.count is not None:
            out["count"] = self.count
        return out


@dataclass
class ComplianceReport:
    per_guideline: dict[str, GuidelineStatus]
    toolchain: str
    profile: str
    totals: dict[str, int]
    files_analyzed: int
    files_failed_parse: int
    deviations: list[Diagnostic] = field(default_factory=list)
    tool_findings: list[Diagnostic] = field(default_factory=list)


def build_compliance(registry: Registry, result: AnalysisResult) -> ComplianceReport:
    unknown = sorted(
        {d.rule_id for d in result.diagnostics if d.rule_id not in registry and d.rule_id not in TOOL_RULE_IDS}
    )
    if unknown:
        raise ComplianceError(f"diagnostics cite rule ids missing from the registry: {', '.join(unknown)}")

    violations = Counter(d.rule_id for d in result.unsuppressed)
    ran = result.checks_run
    any_unsafe = result.any_unsafe
    per: dict[str, GuidelineStatus] = {}
    for g in registry:
        klass = g.guideline_class
        n = violations.get(g.id, 0)
        # an empty run proves nothing, so nothing is reported compliant
        checked = g.check_id is not None and g.check_id in ran and result.files_analyzed > 0
        if klass in (GuidelineClass.C1_StdLibOnly, GuidelineClass.C2_NoSuchFeature):
            st = GuidelineStatus("NotApplicable")
        elif klass is GuidelineClass.C3_SatisfiedByLanguage:
            st = GuidelineStatus("GuaranteedByLanguage")
        elif g.unsafe_gated and not any_unsafe:
            st = GuidelineStatus("GuaranteedByLanguage")
        elif n:
            st = GuidelineStatus("Violated", n)
        elif checked:
            st = GuidelineStatus("Compliant")
        elif g.check_id is None and not g.unsafe_gated and g.decidability in ("manual", "hybrid"):
            st = GuidelineStatus("ManualReview")
        else:
            st = GuidelineStatus("Unchecked")
        per[g.id] = st

    totals = {k: 0 for k in TOTAL_KEYS.values()}
    for st in per.values():
        totals[TOTAL_KEYS[st.status]] += 1
    return ComplianceReport(
        per_guideline=per,
        toolchain=result.toolchain or "",
        profile=result.profile.name,
        totals=totals,
        files_analyzed=result.files_analyzed,
        files_failed_parse=result.files_failed_parse,
        deviations=result.suppressed,
        tool_findings=[d for d in result.unsuppressed if d.rule_id in TOOL_RULE_IDS],
    )


def to_json_document(registry: Registry, result: AnalysisResult, report: ComplianceReport | None = None) -> dict:
    report = report or build_compliance(registry, result)
    return {
        "tool_version": __version__,
        "toolchain": report.toolchain,
        "profile": report.profile,
        "files_analyzed": result.files_analyzed,
        "files_failed_parse": result.files_failed_parse,
        "diagnostics": [d.to_json() for d in result.unsuppressed],
        "deviations": [
            {"file": d.file, "line": d.line, "rule_id": d.rule_id, "justification": d.suppression_justification}
            for d in result.suppressed
        ],
        "compliance": {gid: st.to_json() for gid, st in report.per_guideline.items()},
        "totals": dict(report.totals),
    }


def render_text(result: AnalysisResult) -> str:
    return "".join(f"{d.file}:{d.line}:{d.col}: [{d.rule_id}] {d.severity}: {d.message}\n" for d in result.unsuppressed)


def render_summary(registry: Registry, report: ComplianceReport) -> str:
    total = len(report.per_guideline)
    lines = [
        f"toolchain: {report.toolchain or '(not pinned)'}",
        f"profile: {report.profile}",
        f"files: {report.files_analyzed} analyzed, {report.files_failed_parse} failed to parse",
        "",
        f"{'guideline':<12}{'kind':<11}{'class':<7}{'topic':<30}status",
    ]
    for gid, st in report.per_guideline.items():
        g = registry[gid]
        lines.append(f"{g.display_id:<12}{g.kind:<11}{g.label:<7}{g.topic[:29]:<30}{st}")
    lines.append("")
    lines.append(f"totals ({total} guidelines):")
    for key, value in report.totals.items():
        pct = 100.0 * value / total if total else 0.0
        lines.append(f"  {key}: {value} ({pct:.2f}%)")
    if report.deviations:
        lines.append("")
        lines.append("deviations (suppressed findings):")
        for d in report.deviations:
            lines.append(f"  {d.file}:{d.line}: [{d.rule_id}] {d.suppression_justification}")
    if report.tool_findings:
        lines.append("")
        lines.append("tool findings:")
        for d in report.tool_findings:
            lines.append(f"  {d.file}:{d.line}:{d.col}: [{d.rule_id}] {d.message}")
    return "\n".join(lines) + "\n"


def render(registry: Registry, result: AnalysisResult, fmt: str = "text") -> str:
    if fmt == "text":
        return render_text(result)
    if fmt == "json":
        return json.dumps(to_json_document(registry, result), indent=2, ensure_ascii=False) + "\n"
    if fmt == "summary":
        return render_summary(registry, build_compliance(registry, result))
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
