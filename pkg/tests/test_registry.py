import io
import json
import warnings

import pytest

from helpers import REGISTRY
from misrust.registry import (
    GuidelineClass,
    Profile,
    RegistryCountWarning,
    RegistryError,
    class_counts,
    effective_rule_set,
    load_registry,
    query,
    topic_counts,
    validate_aggregates,
)

# transcribed from the published classification tables
EXPECTED_CLASS_COUNTS = {"C1": 15, "C2": 42, "C3": 53, "C4": 58, "C6": 22, "C5": 11}
C5_IDS = {"4.1.1", "6.0.3", "6.4.2", "6.5.1", "12.3.1", "15.0.1", "18.5.1", "19.0.1", "19.2.2", "21.6.2", "22.3.1"}


def _raw():
    return REGISTRY.to_json()


def test_shipped_dataset_has_179_unique_entries():
    assert len(REGISTRY) == 179
    assert len(set(REGISTRY.ids)) == 179


def test_class_counts_match_table1():
    assert class_counts(REGISTRY) == EXPECTED_CLASS_COUNTS


def test_entry_invariants():
    for g in REGISTRY:
        if g.safe_required:
            assert g.guideline_class is GuidelineClass.C4_RequiredInUnsafe
        if g.guideline_class is GuidelineClass.C5_NeedsAdaptation:
            assert g.adaptation_note
        if g.check_id:
            assert g.decidability in ("automatic", "hybrid")


def test_named_rules_have_fixed_classes():
    cls = lambda gid: REGISTRY[gid].guideline_class.value  # noqa: E731
    assert cls("25.5.3") == "C1"
    assert {cls(g) for g in ("12.2.1", "9.6.1", "13.3.4")} == {"C2"}
    assert cls("19.2.1") == "C3"
    assert cls("8.2.7") == "C4" and not REGISTRY["8.2.7"].safe_required
    assert cls("0.3.1") == "C4" and REGISTRY["0.3.1"].safe_required


def test_validate_aggregates_all_pass_except_none():
    report = validate_aggregates(REGISTRY)
    assert report and all(c.passed for c in report), [c.constraint for c in report if not c.passed]


def test_perturbation_breaks_c3_and_c4():
    raw = _raw()
    victim = next(e for e in raw["guidelines"] if e["class"] == "C3")
    victim["class"] = "C4"
    failed = {c.constraint for c in validate_aggregates(load_registry(raw)) if not c.passed}
    assert "C3=53" in failed and "C4=58" in failed


def test_topic_numerators():
    topics = topic_counts(REGISTRY)
    assert topics["Expressions"][0] == 17
    assert topics["Basic concepts"][0] == 13
    assert topics["General principles"][0] == 4
    assert topics["Member access control"][0] == 1
    assert sum(n for n, _ in topics.values()) == 69


def test_duplicate_id_rejected():
    raw = _raw()
    raw["guidelines"].append(dict(raw["guidelines"][0]))
    with pytest.raises(RegistryError, match="duplicate"):
        load_registry(raw)


def test_single_entry_loads_with_count_warning():
    raw = _raw()
    raw["guidelines"] = raw["guidelines"][:1]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        reg = load_registry(json.dumps(raw))
    assert len(reg) == 1
    assert any(issubclass(w.category, RegistryCountWarning) for w in caught)


def test_malformed_entry_reports_index_and_field():
    raw = _raw()
    raw["guidelines"][3]["class"] = "C9"
    with pytest.raises(RegistryError) as exc:
        load_registry(raw)
    assert "3" in str(exc.value) and "class" in str(exc.value)


def test_unknown_field_rejected():
    raw = _raw()
    raw["guidelines"][0]["colour"] = "red"
    with pytest.raises(RegistryError):
        load_registry(raw)


def test_load_from_stream_preserves_order():
    text = json.dumps(_raw())
    reg = load_registry(io.StringIO(text))
    assert reg.ids == REGISTRY.ids


def test_query_examples():
    assert {g.id for g in query(REGISTRY, **{"class": "C5"})} == C5_IDS
    assert len(query(REGISTRY)) == 179
    assert len(query(REGISTRY, **{"class": "C4"}, safe_required=False)) == 36
    with pytest.raises(ValueError, match="valid topics"):
        query(REGISTRY, topic="Astrology")


def test_query_is_pure():
    a = [g.id for g in query(REGISTRY, decidability="manual")]
    b = [g.id for g in query(REGISTRY, decidability="manual")]
    assert a == b


@pytest.mark.parametrize("has_unsafe", [False, True])
def test_effective_rule_set_partitions(has_unsafe):
    rs = effective_rule_set(REGISTRY, Profile("all"), has_unsafe)
    groups = [set(rs.active_checks), set(rs.guaranteed_by_language), set(rs.manual_review), set(rs.not_applicable)]
    assert sum(len(g) for g in groups) == 179
    assert set().union(*groups) == set(REGISTRY.ids)
    assert len(rs.not_applicable) == 57


def test_effective_rule_set_gating():
    safe = effective_rule_set(REGISTRY, Profile("all"), False)
    unsafe = effective_rule_set(REGISTRY, Profile("all"), True)
    assert len(safe.guaranteed_by_language) == 89
    gated = {g.id for g in REGISTRY if g.unsafe_gated}
    assert len(gated) == 36
    assert gated <= set(safe.guaranteed_by_language)
    assert not gated & set(unsafe.guaranteed_by_language)


def test_disabled_override():
    rs = effective_rule_set(REGISTRY, Profile("all", disabled_overrides=frozenset({"12.3.1"})), False)
    assert "12.3.1" not in rs.active_checks


def test_profile_rejects_overlapping_overrides():
    with pytest.raises(ValueError):
        Profile("custom", frozenset({"12.3.1"}), frozenset({"12.3.1"}))
