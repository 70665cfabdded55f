"""Item-level checks: declarations, attributes, imports."""
from __future__ import annotations

from ..diagnostic import Diagnostic
from ..resolve import is_raw_pointer_type
from ..source import ITEM_KINDS
from ..unsafety import UnsafeOperationKind
from . import CheckRun, register

# Built-in attributes accepted by rustc 1.92 on stable, transcribed from the
# language reference attribute index.
BUILTIN_ATTRIBUTES = frozenset(
    {
        "cfg", "cfg_attr", "test", "ignore", "should_panic", "derive", "automatically_derived",
        "macro_export", "macro_use", "proc_macro", "proc_macro_derive", "proc_macro_attribute",
        "allow", "expect", "warn", "deny", "forbid", "deprecated", "must_use", "diagnostic",
        "link", "link_name", "link_ordinal", "no_link", "repr", "crate_type", "crate_name",
        "no_main", "export_name", "link_section", "no_mangle", "used", "inline", "cold",
        "no_builtins", "target_feature", "track_caller", "instruction_set", "doc", "no_std",
        "no_implicit_prelude", "path", "recursion_limit", "type_length_limit", "panic_handler",
        "global_allocator", "windows_subsystem", "feature", "non_exhaustive",
        "debugger_visualizer", "collapse_debuginfo", "naked", "default", "unsafe",
    }
)  # fmt: skip
BUILTIN_TOOL_NAMESPACES = frozenset({"rustfmt", "clippy", "diagnostic"})
# attributes that must (and may only) be written as #[unsafe(...)]
UNSAFE_ATTRIBUTES = frozenset({"no_mangle", "export_name", "link_section"})

DEFAULT_ROOT_ALLOWLIST = ("ModuleItem", "UseDecl", "Attribute", "FunctionItem:main", "ConstItem")


@register("CHK-12.3.1", "12.3.1")
def check_union_decl(run: CheckRun) -> list[Diagnostic]:
    return [
        run.diag(n, f"union `{n.props.get('name')}`: use an enum so the active variant is tracked and matched")
        for n in run.unit.walk("UnionItem")
    ]


@register("CHK-19.0.1", "19.0.1", options={"tool_attribute_namespaces": []})
def check_attribute_validity(run: CheckRun) -> list[Diagnostic]:
    known_ns = BUILTIN_TOOL_NAMESPACES | set(run.opt("tool_attribute_namespaces"))
    out = []
    for n in run.unit.walk("Attribute"):
        path = n.props.get("path_text", "")
        segs = [s.strip() for s in path.split("::")]
        head = segs[0] if segs else ""
        if len(segs) > 1:
            ok = head in known_ns
        else:
            ok = head in BUILTIN_ATTRIBUTES or head in known_ns
        if ok and head == "unsafe":
            inner = n.props.get("tokens_text", "").strip("() \t\n")
            inner_name = inner.split("(")[0].split("=")[0].strip()
            ok = inner_name in UNSAFE_ATTRIBUTES
            if not ok:
                out.append(run.diag(n, f"`{inner_name}` is not an attribute that can be marked unsafe"))
                continue
        if not ok:
            out.append(run.diag(n, f"unknown attribute `{path}`"))
    return out


@register("CHK-19.2.2", "19.2.2")
def check_import_syntax(run: CheckRun) -> list[Diagnostic]:
    out = []
    unit = run.unit
    for n in unit.walk("UseDecl"):
        for prefix, start, end in n.props.get("globs", ()):
            last = prefix.rstrip(":").split("::")[-1].strip() if prefix else ""
            if last == "prelude":
                continue
            span = unit.span(start, end)
            what = f"`{prefix}::*`" if prefix else "`*`"
            out.append(run.diag(span, f"glob import {what}: import names explicitly", context=run.ctx.context(n)))
    return out


def _root_kind(unit, node) -> str:
    if node.kind == "FunctionItem" and node.props.get("is_main"):
        return "FunctionItem:main"
    if node.kind == "Attribute":
        return "Attribute" if node.props.get("is_inner") else "Attribute:outer"
    if node.kind == "Opaque" and node.ts == "expression_statement":
        return "MacroInvocation"
    return node.kind


@register("CHK-6.0.3", "6.0.3", options={"root_item_allowlist": list(DEFAULT_ROOT_ALLOWLIST)})
def check_root_items(run: CheckRun) -> list[Diagnostic]:
    if not run.is_crate_root:
        return []
    allow = set(run.opt("root_item_allowlist"))
    unit = run.unit
    out = []
    for node in unit.children(unit.root):
        kind = _root_kind(unit, node)
        if kind in ("Comment", "Attribute:outer") or kind in allow:
            continue
        name = node.props.get("name")
        label = f"{kind} `{name}`" if name else kind
        out.append(run.diag(node, f"{label} declared at the crate root; move it into a module"))
    return out


@register("CHK-6.4.2", "6.4.2")
def check_trait_method_shadowing(run: CheckRun) -> list[Diagnostic]:
    unit = run.unit
    out = []
    for fn in unit.walk("FunctionItem"):
        cid = fn.props.get("container")
        if cid is None:
            continue
        impl = unit.nodes[cid]
        if impl.kind != "ImplBlock" or impl.props.get("trait_path"):
            continue
        ty = impl.props.get("self_type_name")
        name = fn.props.get("name")
        for trait, impl_methods in sorted(run.index.implemented_traits(ty).items()):
            if name in impl_methods or name in run.index.trait_methods.get(trait, ()):
                out.append(run.diag(fn, f"inherent method `{ty}::{name}` shadows `{trait}::{name}`"))
                break
    return out


@register("CHK-21.6.2", "21.6.2")
def check_drop_for_raw_holders(run: CheckRun) -> list[Diagnostic]:
    out = []
    for s in run.unit.walk("StructItem"):
        raw = [f for f, t in s.props.get("fields", ()) if is_raw_pointer_type(t)]
        name = s.props.get("name")
        if raw and name not in run.index.drop_impls:
            out.append(
                run.diag(s, f"struct `{name}` holds raw pointer field `{raw[0]}` but has no `Drop` implementation")
            )
    return out


@register("CHK-STATIC-MUT", "6.7.2")
def check_static_mut(run: CheckRun) -> list[Diagnostic]:
    unit = run.unit
    out = []
    for n in unit.walk("StaticItem"):
        if n.props.get("is_mut"):
            out.append(run.diag(n, f"`static mut {n.props.get('name')}`: use an atomic, a lock or interior mutability"))
    for op in run.ctx.operations:
        if op.kind is UnsafeOperationKind.StaticMutAccess:
            out.append(run.diag(op.span, f"access to `static mut {unit.text(op.span)}`", context="unsafe"))
    return out


def in_item_with(unit, node, predicate) -> bool:
    for a in (node, *unit.ancestors(node)):
        if a.kind in ITEM_KINDS and any(predicate(attr) for attr in unit.attributes(a)):
            return True
    return False
