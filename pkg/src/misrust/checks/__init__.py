"""Executable guideline checks.

Each check is a plain function ``check_*(run) -> list[Diagnostic]`` registered
with a :class:`CheckDescriptor`.  Checks read the unit, its unsafe-context
map, the cross-file index and their options; they hold no state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from ..diagnostic import Diagnostic
from ..index import SetIndex
from ..registry import Registry
from ..source import SourceUnit, Span, SyntaxNode
from ..macros import ExprView
from ..unsafety import UnsafeContextMap, view_contexts

TOOL_RULE = "tool"


@dataclass(frozen=True)
class CheckDescriptor:
    check_id: str
    rule_id: str  # guideline id, or a tool rule id such as "SAFETY-COMMENT"
    gated_on_unsafe: bool
    options_schema: Mapping[str, Any]
    func: Callable[[CheckRun], list[Diagnostic]] = field(compare=False, repr=False)
    run_level: bool = False
    is_tool_rule: bool = False

    @property
    def registry_rule(self) -> str:
        return TOOL_RULE if self.is_tool_rule else self.rule_id


@dataclass
class CheckRun:
    """Everything one check invocation may look at."""

    descriptor: CheckDescriptor
    unit: SourceUnit
    ctx: UnsafeContextMap
    index: SetIndex
    options: Mapping[str, Any]
    severity: str = "required"
    is_crate_root: bool = False
    toolchain: str | None = None

    def diag(self, where: SyntaxNode | Span, message: str, *, context: str | None = None) -> Diagnostic:
        if isinstance(where, SyntaxNode):
            span = where.span
            ctx = context or self.ctx.context(where)
        else:
            span = where
            ctx = context or "safe"
        return Diagnostic(
            rule_id=self.descriptor.rule_id,
            check_id=self.descriptor.check_id,
            severity=self.severity,
            span=span,
            message=message,
            context=ctx,
            file=self.unit.path,
        )

    def view_diag(self, view: ExprView, node: SyntaxNode, message: str) -> Diagnostic:
        """Diagnostic for a node of an expression view (see :mod:`misrust.macros`)."""
        if view.is_file:
            return self.diag(node, message)
        return self.diag(view.span(node), message, context=view_contexts(view).context(node))

    def opt(self, name: str) -> Any:
        if name in self.options:
            return self.options[name]
        return self.descriptor.options_schema[name]


CHECKS: dict[str, CheckDescriptor] = {}


def register(
    check_id: str,
    rule_id: str,
    *,
    gated: bool = False,
    options: Mapping[str, Any] | None = None,
    run_level: bool = False,
    tool: bool = False,
) -> Callable[[Callable[[CheckRun], list[Diagnostic]]], Callable[[CheckRun], list[Diagnostic]]]:
    def deco(func: Callable[[CheckRun], list[Diagnostic]]) -> Callable[[CheckRun], list[Diagnostic]]:
        if check_id in CHECKS:
            raise ValueError(f"duplicate check {check_id}")
        CHECKS[check_id] = CheckDescriptor(
            check_id, rule_id, gated, dict(options or {}), func, run_level=run_level, is_tool_rule=tool
        )
        return func

    return deco


def option_defaults() -> dict[str, Any]:
    out: dict[str, Any] = {}
    for d in CHECKS.values():
        out.update(d.options_schema)
    return out


def descriptor_problems(registry: Registry) -> list[str]:
    """Disagreements between the descriptors and the registry entries they cite."""
    problems = []
    for d in CHECKS.values():
        if d.is_tool_rule:
            continue
        g = registry.get(d.rule_id)
        if g is None:
            problems.append(f"{d.check_id}: rule {d.rule_id} not in registry")
            continue
        if g.check_id != d.check_id:
            problems.append(f"{d.check_id}: registry maps {d.rule_id} to {g.check_id}")
        if d.gated_on_unsafe != g.unsafe_gated:
            problems.append(f"{d.check_id}: gated={d.gated_on_unsafe} but {d.rule_id} is {g.label}")
    return problems


# registration side effects
from . import callgraph, expressions, items, toolchain, unsafe_governance  # noqa: E402,F401
