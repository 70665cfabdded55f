import json

import pytest

from helpers import CORPUS, REGISTRY, analyze
from misrust import engine
from misrust.diagnostic import Diagnostic
from misrust.registry import Profile
from misrust.report import ComplianceError, GuidelineStatus, build_compliance, render, to_json_document
from misrust.source import parse_file
from misrust.unsafety import unit_has_unsafe

MIXED = "union U { a: u32 }\nuse std::io::*;\n// misrust-deviation(18.5.1): startup only\nfn f(o: Option<u8>) -> u8 { o.unwrap() }\n"


def safe_conforming_units():
    units = [parse_file(str(p)) for p in sorted(CORPUS.glob("*/conform_*.rs"))]
    return [u for u in units if not unit_has_unsafe(u)]


def test_violated_count_for_union():
    rep = build_compliance(REGISTRY, analyze("union U { a: u32 }\nunion V { b: u8 }\n"))
    assert str(rep.per_guideline["12.3.1"]) == "Violated(2)"
    assert rep.per_guideline["12.3.1"].count == 2


def test_statuses_cover_registry_and_totals_sum():
    rep = build_compliance(REGISTRY, analyze(MIXED))
    assert list(rep.per_guideline) == REGISTRY.ids
    assert sum(rep.totals.values()) == 179


def test_safe_only_corpus_statuses():
    units = safe_conforming_units()
    assert len(units) >= 20
    rep = build_compliance(REGISTRY, engine.run(REGISTRY, Profile("all"), units))
    assert rep.totals["not_applicable"] == 57
    assert rep.totals["guaranteed"] >= 89


def test_unsafe_anywhere_demotes_gated_guarantees():
    rep = build_compliance(REGISTRY, analyze("fn f(p: *const u8) -> u8 {\n    // SAFETY: caller\n    unsafe { *p }\n}"))
    assert rep.per_guideline["8.2.7"].status == "Compliant"
    gated = [g.id for g in REGISTRY if g.unsafe_gated]
    assert all(rep.per_guideline[g].status != "GuaranteedByLanguage" for g in gated)


def test_empty_run_reports_unchecked():
    rep = build_compliance(REGISTRY, engine.run(REGISTRY, Profile("all"), []))
    assert sum(rep.totals.values()) == 179
    assert rep.totals["compliant"] == 0 and rep.per_guideline["12.3.1"].status == "Unchecked"


def test_manual_review_for_process_rules():
    rep = build_compliance(REGISTRY, analyze("fn main() {}"))
    assert rep.per_guideline["6.5.1"].status == "ManualReview"
    assert rep.per_guideline["15.0.1"].status == "ManualReview"


def test_suppressed_not_counted_but_listed():
    rep = build_compliance(REGISTRY, analyze(MIXED))
    assert rep.per_guideline["18.5.1"].status == "Compliant"
    assert [d.rule_id for d in rep.deviations] == ["18.5.1"]


def test_unknown_rule_id_is_an_error():
    res = analyze("fn main() {}")
    res.diagnostics.append(Diagnostic("99.9.9", "X", "required", res.diagnostics[0].span if res.diagnostics else engine.RUN_LEVEL_SPAN, "m", "safe", "f.rs"))
    with pytest.raises(ComplianceError):
        build_compliance(REGISTRY, res)


def test_violated_status_invariants():
    with pytest.raises(ValueError):
        GuidelineStatus("Violated", 0)
    with pytest.raises(ValueError):
        GuidelineStatus("Compliant", 3)


def test_text_format_one_line_per_finding():
    res = analyze("union U { a: u32 }\n", path="src/x.rs")
    assert render(REGISTRY, res, "text") == "src/x.rs:1:1: [12.3.1] required: union `U`: use an enum so the active variant is tracked and matched\n"


def test_json_schema_order_and_round_trip():
    res = analyze(MIXED)
    doc = json.loads(render(REGISTRY, res, "json"))
    assert list(doc) == ["tool_version", "toolchain", "profile", "files_analyzed", "files_failed_parse",
                         "diagnostics", "deviations", "compliance", "totals"]  # fmt: skip
    assert doc["diagnostics"] == [d.to_json() for d in res.unsuppressed]
    assert list(doc["diagnostics"][0]) == ["file", "line", "col", "end_line", "end_col", "rule_id", "check_id",
                                           "severity", "context", "message"]  # fmt: skip
    assert doc["deviations"] == [{"file": "sample.rs", "line": 4, "rule_id": "18.5.1", "justification": "startup only"}]
    assert list(doc["totals"]) == ["not_applicable", "guaranteed", "compliant", "violated", "manual", "unchecked"]
    assert doc["compliance"]["12.3.1"] == {"status": "Violated", "count": 1}


def test_json_of_empty_result():
    doc = json.loads(render(REGISTRY, engine.run(REGISTRY, Profile("all"), []), "json"))
    assert doc["diagnostics"] == [] and doc["files_analyzed"] == 0


def test_summary_matrix_and_totals():
    text = render(REGISTRY, analyze(MIXED), "summary")
    assert "not_applicable: 57 (31.84%)" in text
    rows = [line for line in text.splitlines() if line.startswith(("Rule ", "Dir "))]
    assert len(set(rows)) == 179
    assert len(rows) == 179
    assert "deviations (suppressed findings):" in text


def test_rendering_is_pure():
    res = analyze(MIXED)
    for fmt in ("text", "json", "summary"):
        assert render(REGISTRY, res, fmt) == render(REGISTRY, res, fmt)
    assert to_json_document(REGISTRY, res) == to_json_document(REGISTRY, res)
