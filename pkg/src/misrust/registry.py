"""Guideline registry: the 179 MISRA C++:2023 guidelines classified for Rust.

The registry is loaded from a JSON dataset (the shipped one lives in
``misrust/data/guidelines.json``), validated against the published
aggregate tables, and queried to decide which guidelines are active for a
compilation unit.

Classes
-------
C1  applies only to the C++ standard library
C2  the C++ feature does not exist in Rust
C3  satisfied by the language, even in unsafe code
C4  still required when unsafe features are used
C5  required, but needs a Rust-specific adaptation

The "also required in safe Rust" subset of C4 is not a class of its own;
it is the ``safe_required`` flag on C4 entries.
"""
from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import IO, Any, Iterable, Mapping

__all__ = [
    "GuidelineClass",
    "Guideline",
    "Registry",
    "Profile",
    "RuleSet",
    "Constraint",
    "RegistryError",
    "RegistryCountWarning",
    "load_registry",
    "load_default_registry",
    "validate_aggregates",
    "query",
    "effective_rule_set",
    "EXPECTED_CLASS_COUNTS",
    "EXPECTED_TOPIC_COUNTS",
]

TOTAL_GUIDELINES = 179


class RegistryError(ValueError):
    """Raised for a malformed or inconsistent guideline dataset."""


class RegistryCountWarning(UserWarning):
    """The dataset does not hold exactly 179 guidelines."""


class GuidelineClass(str, enum.Enum):
    C1_StdLibOnly = "C1"
    C2_NoSuchFeature = "C2"
    C3_SatisfiedByLanguage = "C3"
    C4_RequiredInUnsafe = "C4"
    C5_NeedsAdaptation = "C5"


KINDS = ("rule", "directive")
DECIDABILITY = ("automatic", "manual", "hybrid")
SEVERITIES = ("mandatory", "required", "advisory")

# Required keys, in file order.
_FIELDS = (
    "id",
    "kind",
    "title_summary",
    "topic",
    "class",
    "safe_required",
    "decidability",
    "severity",
    "adaptation_note",
    "check_id",
)
_OPTIONAL = {"adaptation_note": None, "check_id": None, "severity": "required"}


@dataclass(frozen=True)
class Guideline:
    id: str
    kind: str
    title_summary: str
    topic: str
    guideline_class: GuidelineClass
    safe_required: bool = False
    decidability: str = "automatic"
    severity: str = "required"
    adaptation_note: str | None = None
    check_id: str | None = None

    @property
    def label(self) -> str:
        """Class label with the safe subset split out (``C6`` for safe-required C4)."""
        if self.safe_required:
            return "C6"
        return self.guideline_class.value

    @property
    def unsafe_gated(self) -> bool:
        """True for C4 guidelines that safe Rust satisfies automatically."""
        return self.guideline_class is GuidelineClass.C4_RequiredInUnsafe and not self.safe_required

    @property
    def display_id(self) -> str:
        return f"{'Dir' if self.kind == 'directive' else 'Rule'} {self.id}"

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "title_summary": self.title_summary,
            "topic": self.topic,
            "class": self.guideline_class.value,
            "safe_required": self.safe_required,
            "decidability": self.decidability,
            "severity": self.severity,
            "adaptation_note": self.adaptation_note,
            "check_id": self.check_id,
        }


@dataclass(frozen=True)
class Registry:
    guidelines: tuple[Guideline, ...]
    dataset_version: str = ""
    source_attribution: str = (
        "MISRA C++:2023 guideline classification for Rust 1.92.0 (edition 2024); "
        "titles are paraphrases, not MISRA text"
    )
    _by_id: Mapping[str, Guideline] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {g.id: g for g in self.guidelines})

    def __len__(self) -> int:
        return len(self.guidelines)

    def __iter__(self):
        return iter(self.guidelines)

    def __contains__(self, gid: object) -> bool:
        return gid in self._by_id

    def get(self, gid: str) -> Guideline | None:
        return self._by_id.get(gid)

    def __getitem__(self, gid: str) -> Guideline:
        return self._by_id[gid]

    @property
    def ids(self) -> list[str]:
        return [g.id for g in self.guidelines]

    @property
    def topics(self) -> list[str]:
        seen: dict[str, None] = {}
        for g in self.guidelines:
            seen.setdefault(g.topic, None)
        return list(seen)

    def to_json(self) -> dict[str, Any]:
        return {
            "dataset_version": self.dataset_version,
            "guidelines": [g.to_json() for g in self.guidelines],
        }


@dataclass(frozen=True)
class Profile:
    """Analysis profile: which guideline groups run, plus per-guideline overrides."""

    name: str = "all"
    enabled_overrides: frozenset[str] = frozenset()
    disabled_overrides: frozenset[str] = frozenset()
    options: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.name not in ("safe", "unsafe", "all", "custom"):
            raise ValueError(f"unknown profile {self.name!r}")
        object.__setattr__(self, "enabled_overrides", frozenset(self.enabled_overrides))
        object.__setattr__(self, "disabled_overrides", frozenset(self.disabled_overrides))
        both = self.enabled_overrides & self.disabled_overrides
        if both:
            raise ValueError(f"guidelines both enabled and disabled: {sorted(both)}")

    @property
    def includes_unsafe_gated(self) -> bool:
        return self.name != "safe"


# ---------------------------------------------------------------- loading


def _parse_entry(index: int, raw: Any) -> Guideline:
    def bad(fieldname: str, why: str) -> RegistryError:
        return RegistryError(f"guideline entry {index}: field {fieldname!r}: {why}")

    if not isinstance(raw, dict):
        raise RegistryError(f"guideline entry {index}: expected an object")
    unknown = set(raw) - set(_FIELDS)
    if unknown:
        raise bad(sorted(unknown)[0], "unknown field")
    values = {}
    for key in _FIELDS:
        if key in raw:
            values[key] = raw[key]
        elif key in _OPTIONAL:
            values[key] = _OPTIONAL[key]
        else:
            raise bad(key, "missing")

    for key in ("id", "title_summary", "topic"):
        if not isinstance(values[key], str) or not values[key].strip():
            raise bad(key, "expected a non-empty string")
    gid = values["id"]
    for prefix in ("Dir ", "Rule "):
        if gid.startswith(prefix):
            gid = gid[len(prefix):]
    if values["kind"] not in KINDS:
        raise bad("kind", f"expected one of {KINDS}")
    try:
        klass = GuidelineClass(values["class"])
    except ValueError:
        raise bad("class", "expected one of C1..C5") from None
    if not isinstance(values["safe_required"], bool):
        raise bad("safe_required", "expected a boolean")
    if values["decidability"] not in DECIDABILITY:
        raise bad("decidability", f"expected one of {DECIDABILITY}")
    if values["severity"] not in SEVERITIES:
        raise bad("severity", f"expected one of {SEVERITIES}")
    for key in ("adaptation_note", "check_id"):
        if values[key] is not None and not isinstance(values[key], str):
            raise bad(key, "expected a string or null")

    if values["safe_required"] and klass is not GuidelineClass.C4_RequiredInUnsafe:
        raise bad("safe_required", "only C4 guidelines can be safe-required")
    if klass is GuidelineClass.C5_NeedsAdaptation and not (values["adaptation_note"] or "").strip():
        raise bad("adaptation_note", "required for C5 guidelines")
    if values["check_id"] and values["decidability"] == "manual":
        raise bad("decidability", "a guideline with a check cannot be manual")

    return Guideline(
        id=gid,
        kind=values["kind"],
        title_summary=values["title_summary"],
        topic=values["topic"],
        guideline_class=klass,
        safe_required=values["safe_required"],
        decidability=values["decidability"],
        severity=values["severity"],
        adaptation_note=values["adaptation_note"],
        check_id=values["check_id"],
    )


def load_registry(data: IO[str] | IO[bytes] | str | bytes | Mapping[str, Any]) -> Registry:
    """Parse a guideline dataset.

    ``data`` may be an open file, raw JSON text, or an already-decoded
    mapping.  Entry order is preserved.  A guideline count other than 179
    emits :class:`RegistryCountWarning`; structural problems raise
    :class:`RegistryError` naming the entry index and field.
    """
    if isinstance(data, Mapping):
        doc = data
    else:
        text = data if isinstance(data, (str, bytes)) else data.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise RegistryError(f"registry is not valid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise RegistryError("registry must be a JSON object")
    unknown = set(doc) - {"dataset_version", "guidelines"}
    if unknown:
        raise RegistryError(f"unknown top-level field {sorted(unknown)[0]!r}")
    entries = doc.get("guidelines")
    if not isinstance(entries, list):
        raise RegistryError("field 'guidelines' must be a list")
    version = doc.get("dataset_version", "")
    if not isinstance(version, str):
        raise RegistryError("field 'dataset_version' must be a string")

    guidelines = []
    seen: dict[str, int] = {}
    for index, raw in enumerate(entries):
        g = _parse_entry(index, raw)
        if g.id in seen:
            raise RegistryError(
                f"guideline entry {index}: field 'id': duplicate id {g.id!r} (first at entry {seen[g.id]})"
            )
        seen[g.id] = index
        guidelines.append(g)

    if len(guidelines) != TOTAL_GUIDELINES:
        warnings.warn(
            f"registry holds {len(guidelines)} guidelines, expected {TOTAL_GUIDELINES}",
            RegistryCountWarning,
            stacklevel=2,
        )
    return Registry(guidelines=tuple(guidelines), dataset_version=version)


def load_default_registry() -> Registry:
    """Load the dataset shipped with the package."""
    text = resources.files("misrust").joinpath("data/guidelines.json").read_text(encoding="utf-8")
    return load_registry(text)


# ---------------------------------------------------------------- validation

# Published aggregates.  Class counts: C6 is the safe-required part of C4.
EXPECTED_CLASS_COUNTS = {"C1": 15, "C2": 42, "C3": 53, "C4": 58, "C6": 22, "C5": 11}
EXPECTED_CLASS_GROUPS = {
    "not_applicable": ("C1", "C2"),
    "applicable": ("C3", "C4", "C5"),
    "still_relevant": ("C4", "C5"),
}
# topic -> (still relevant, topic size)
EXPECTED_TOPIC_COUNTS = {
    "Language independent issues": (5, 10),
    "General principles": (4, 4),
    "Lexical conventions": (1, 12),
    "Basic concepts": (13, 21),
    "Standard conversions": (5, 9),
    "Expressions": (17, 24),
    "Statements": (1, 11),
    "Declarations": (2, 8),
    "Declarators": (3, 5),
    "Classes": (1, 4),
    "Derived classes": (1, 6),
    "Member access control": (1, 1),
    "Special member functions": (1, 8),
    "Exception handling": (2, 8),
    "Preprocessing directives": (6, 16),
    "Language support library": (4, 12),
    "Diagnostics library": (1, 2),
    "Algorithms library": (1, 5),
}


@dataclass(frozen=True)
class Constraint:
    constraint: str
    expected: Any
    actual: Any
    passed: bool

    def to_json(self) -> dict[str, Any]:
        def plain(v: Any) -> Any:
            return float(v) if isinstance(v, Fraction) else v

        return {
            "constraint": self.constraint,
            "expected": plain(self.expected),
            "actual": plain(self.actual),
            "pass": self.passed,
        }


def class_counts(registry: Registry) -> dict[str, int]:
    counts = {k: 0 for k in ("C1", "C2", "C3", "C4", "C6", "C5")}
    for g in registry:
        counts[g.guideline_class.value] += 1
        if g.safe_required:
            counts["C6"] += 1
    return counts


def topic_counts(registry: Registry) -> dict[str, tuple[int, int]]:
    """Per topic: (guidelines in C4 or C5, all guidelines), in registry order."""
    out: dict[str, list[int]] = {}
    for g in registry:
        row = out.setdefault(g.topic, [0, 0])
        row[1] += 1
        if g.guideline_class in (GuidelineClass.C4_RequiredInUnsafe, GuidelineClass.C5_NeedsAdaptation):
            row[0] += 1
    return {t: (r[0], r[1]) for t, r in out.items()}


def validate_aggregates(registry: Registry) -> list[Constraint]:
    """Evaluate every aggregate constraint; never raises."""
    report: list[Constraint] = []

    def check(name: str, expected: Any, actual: Any, tol: float | None = None) -> None:
        if tol is None:
            ok = expected == actual
        else:
            ok = abs(float(expected) - float(actual)) <= tol
        report.append(Constraint(name, expected, actual, ok))

    counts = class_counts(registry)
    total = len(registry)
    check("total=179", TOTAL_GUIDELINES, total)
    check("class partition sums to total", total, sum(counts[k] for k in ("C1", "C2", "C3", "C4", "C5")))
    for label, expected in EXPECTED_CLASS_COUNTS.items():
        check(f"{label}={expected}", expected, counts[label])
    check("C1+C2=57", 57, counts["C1"] + counts["C2"])
    check("C4+C5=69", 69, counts["C4"] + counts["C5"])
    applicable = counts["C3"] + counts["C4"] + counts["C5"]
    check("C3+C4+C5=122", 122, applicable)

    # Derived identities.
    as_is = applicable - counts["C5"]
    check("as-is applicable: 122-11=111", 111, as_is)
    auto_safe = counts["C3"] + (counts["C4"] - counts["C6"])
    check("auto-satisfied in safe Rust: 53+36=89", 89, auto_safe)
    check("unsafe-gated: C4-C6=36", 36, counts["C4"] - counts["C6"])
    ratio = Fraction(counts["C3"], as_is) if as_is else Fraction(0)
    check("C3/as-is applicable=0.4775", Fraction(4775, 10000), ratio, tol=0.0005)

    topics = topic_counts(registry)
    for topic, (num, den) in EXPECTED_TOPIC_COUNTS.items():
        have = topics.get(topic, (0, 0))
        check(f"{topic}: relevant={num}", num, have[0])
        check(f"{topic}: size={den}", den, have[1])
    for topic, (num, _) in topics.items():
        if topic not in EXPECTED_TOPIC_COUNTS:
            check(f"{topic}: relevant=0", 0, num)
    check("topic relevant sum=69", 69, sum(n for n, _ in topics.values()))
    return report


# ---------------------------------------------------------------- queries

_FILTER_KEYS = ("class", "safe_required", "topic", "decidability", "kind")


def query(registry: Registry, **filters: Any) -> list[Guideline]:
    """Guidelines matching every given filter, in registry order.

    Filters: ``class`` (``"C1"``..``"C6"`` or :class:`GuidelineClass`),
    ``safe_required``, ``topic``, ``decidability``, ``kind``.  ``class="C6"``
    is shorthand for ``class="C4", safe_required=True``.
    """
    unknown = set(filters) - set(_FILTER_KEYS)
    if unknown:
        raise TypeError(f"unknown filter field(s): {sorted(unknown)}")
    filters = {k: v for k, v in filters.items() if v is not None}
    klass = filters.get("class")
    if isinstance(klass, GuidelineClass):
        klass = klass.value
    if klass == "C6":
        klass = "C4"
        filters["safe_required"] = True
    if klass is not None and klass not in {c.value for c in GuidelineClass}:
        raise ValueError(f"unknown class {klass!r}")
    topic = filters.get("topic")
    if topic is not None and topic not in registry.topics:
        raise ValueError(f"unknown topic {topic!r}; valid topics: {', '.join(registry.topics)}")

    def keep(g: Guideline) -> bool:
        if klass is not None and g.guideline_class.value != klass:
            return False
        if "safe_required" in filters and g.safe_required != filters["safe_required"]:
            return False
        if topic is not None and g.topic != topic:
            return False
        if "decidability" in filters and g.decidability != filters["decidability"]:
            return False
        if "kind" in filters and g.kind != filters["kind"]:
            return False
        return True

    return [g for g in registry if keep(g)]


@dataclass(frozen=True)
class RuleSet:
    """Partition of the registry for one compilation unit."""

    active_checks: tuple[str, ...]
    guaranteed_by_language: tuple[str, ...]
    manual_review: tuple[str, ...]
    not_applicable: tuple[str, ...]

    def bucket_of(self, gid: str) -> str:
        for name in ("active_checks", "guaranteed_by_language", "manual_review", "not_applicable"):
            if gid in getattr(self, name):
                return name
        raise KeyError(gid)

    def to_json(self) -> dict[str, list[str]]:
        return {
            "active_checks": list(self.active_checks),
            "guaranteed_by_language": list(self.guaranteed_by_language),
            "manual_review": list(self.manual_review),
            "not_applicable": list(self.not_applicable),
        }


# Checks that stay off unless a profile option turns them on.
OPT_IN_CHECKS = {"CHK-21.6.1": "no_alloc"}


def effective_rule_set(registry: Registry, profile: Profile, unit_has_unsafe: bool) -> RuleSet:
    """Split every guideline into active / guaranteed / manual / not applicable.

    Under the ``safe`` profile, unsafe-gated C4 guidelines in a unit that
    does contain unsafe code are not checked and land in ``manual_review``.
    Overrides are applied last; an enabled override can only activate a
    guideline that has a check.
    """
    buckets: dict[str, list[str]] = {
        "active_checks": [],
        "guaranteed_by_language": [],
        "manual_review": [],
        "not_applicable": [],
    }
    for g in registry:
        klass = g.guideline_class
        if klass in (GuidelineClass.C1_StdLibOnly, GuidelineClass.C2_NoSuchFeature):
            bucket = "not_applicable"
        elif klass is GuidelineClass.C3_SatisfiedByLanguage:
            bucket = "guaranteed_by_language"
        elif g.unsafe_gated and not unit_has_unsafe:
            bucket = "guaranteed_by_language"
        elif g.unsafe_gated and not profile.includes_unsafe_gated:
            bucket = "manual_review"
        elif g.check_id is None:
            bucket = "manual_review"
        elif g.check_id in OPT_IN_CHECKS and not profile.options.get(OPT_IN_CHECKS[g.check_id]):
            bucket = "manual_review"
        else:
            bucket = "active_checks"

        if g.id in profile.disabled_overrides and bucket == "active_checks":
            bucket = "manual_review"
        elif g.id in profile.enabled_overrides and g.check_id is not None:
            bucket = "active_checks"
        buckets[bucket].append(g.id)
    return RuleSet(**{k: tuple(v) for k, v in buckets.items()})


def iter_checked(registry: Registry) -> Iterable[Guideline]:
    return (g for g in registry if g.check_id)
