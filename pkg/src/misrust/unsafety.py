"""Where is code unsafe, and which of the five unsafe-only operations does it perform?"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

from .index import SetIndex, receiver_type_name, self_type_of, split_path
from .macros import EXPRESSION_MACROS, ExprView, expression_views
from .resolve import is_raw_pointer_type, resolver_for
from .source import ITEM_KINDS, Span, SourceUnit, SyntaxNode, type_base_name


class UnsafeOperationKind(str, enum.Enum):
    RawPointerDeref = "RawPointerDeref"
    UnsafeFunctionCall = "UnsafeFunctionCall"
    StaticMutAccess = "StaticMutAccess"
    UnsafeTraitImpl = "UnsafeTraitImpl"
    UnionFieldAccess = "UnionFieldAccess"


@dataclass(frozen=True)
class UnsafeOperation:
    kind: UnsafeOperationKind
    span: Span
    enclosing_unsafe_span: Span | None
    node_id: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "line": self.span.line_start,
            "col": self.span.col_start,
            "enclosing_line": self.enclosing_unsafe_span.line_start if self.enclosing_unsafe_span else None,
        }


@dataclass
class UnsafeContextMap:
    in_unsafe: tuple[bool, ...]
    # node id of the construct that opened the unsafe region, or -1
    region: tuple[int, ...]
    operations: list[UnsafeOperation] = field(default_factory=list)

    def __getitem__(self, node_id: int) -> bool:
        return self.in_unsafe[node_id]

    def is_unsafe(self, node: SyntaxNode) -> bool:
        return self.in_unsafe[node.node_id]

    def context(self, node: SyntaxNode) -> str:
        return "unsafe" if self.in_unsafe[node.node_id] else "safe"


def _opens_unsafe(unit: SourceUnit, node: SyntaxNode) -> bool | None:
    """Context that ``node`` imposes on its children; ``None`` means inherit."""
    if node.kind == "UnsafeBlock":
        return True
    if node.kind == "FunctionItem":
        if node.props.get("is_unsafe"):
            return True
        cid = node.props.get("container")
        if cid is not None and unit.nodes[cid].kind == "ImplBlock" and unit.nodes[cid].props.get("is_unsafe"):
            return True
        return False
    if node.kind == "ImplBlock":
        return bool(node.props.get("is_unsafe"))
    if node.kind in ITEM_KINDS:
        # a nested item does not see the unsafe context around it
        return False
    return None


def classify_contexts(unit: SourceUnit, *, outer: bool = False) -> UnsafeContextMap:
    """Safe/unsafe context of every node.

    ``outer`` is the context around a re-parsed macro argument list; it is
    opened by the synthetic wrapper function of such a unit.
    """
    n = len(unit.nodes)
    flags = [False] * n
    region = [-1] * n
    # ids are pre-order, so every parent is settled before its children
    for node in unit.nodes[1:]:
        p = unit.nodes[node.parent]
        if outer and p.kind == "FunctionItem" and p.parent == 0:
            opened: bool | None = True
        else:
            opened = _opens_unsafe(unit, p)
        if opened is None:
            flags[node.node_id] = flags[p.node_id]
            region[node.node_id] = region[p.node_id]
        elif opened:
            flags[node.node_id] = True
            region[node.node_id] = p.node_id
    return UnsafeContextMap(tuple(flags), tuple(region))


def view_contexts(view: ExprView) -> UnsafeContextMap:
    """Contexts for the nodes of ``view.unit``, inheriting from the macro site."""
    ctx = view.cache.get("ctx")
    if ctx is None:
        if view.is_file:
            ctx = classify_contexts(view.unit)
        else:
            assert view.parent is not None and view.macro is not None
            ctx = classify_contexts(view.unit, outer=view_contexts(view.parent).is_unsafe(view.macro))
        view.cache["ctx"] = ctx
    return ctx


def _enclosing_span(view: ExprView, ctx: UnsafeContextMap, node: SyntaxNode) -> Span | None:
    r = ctx.region[node.node_id]
    if r < 0:
        return None
    opener = view.unit.nodes[r]
    if not view.is_file and opener.kind == "FunctionItem" and opener.parent == 0:
        assert view.parent is not None and view.macro is not None
        return _enclosing_span(view.parent, view_contexts(view.parent), view.macro)
    return view.span(opener)


def unit_has_unsafe(unit: SourceUnit) -> bool:
    for view in expression_views(unit):
        for node in view.unit.walk("UnsafeBlock", "FunctionItem", "ImplBlock"):
            if node.kind == "UnsafeBlock" or node.props.get("is_unsafe"):
                return True
    return False


_RAW_ADDR_MACROS = frozenset({"addr_of", "addr_of_mut"})


def _child(unit: SourceUnit, node: SyntaxNode, field_name: str) -> SyntaxNode | None:
    for c in node.children:
        cn = unit.nodes[c]
        if cn.props.get("field") == field_name:
            return cn
    return None


def _is_raw_borrowed(unit: SourceUnit, node: SyntaxNode) -> bool:
    """``&raw const X`` / ``addr_of!(X)``: taking the address is a safe operation."""
    p = unit.parent(node)
    while p is not None and p.ts in ("parenthesized_expression", "field_expression"):
        p = unit.parent(p)
    if p is None:
        return False
    if p.ts == "reference_expression" and p.props.get("is_raw"):
        return True
    return False


def _macro_of(unit: SourceUnit, node: SyntaxNode) -> SyntaxNode | None:
    for a in unit.ancestors(node):
        if a.kind == "MacroInvocation":
            return a
        if a.kind in ITEM_KINDS:
            return None
    return None


def _is_static_mut_use(view: ExprView, node: SyntaxNode) -> bool:
    unit = view.unit
    parent = unit.parent(node)
    fld = node.props.get("field")
    if parent is None:
        return False
    if parent.kind == "StaticItem" and fld == "name":
        return False
    if fld == "pattern" or parent.ts.endswith("_pattern") or parent.ts in ("closure_parameters", "parameter"):
        return False
    if parent.ts == "scoped_identifier":
        if fld != "name":
            return False
        path = _child(unit, parent, "path")
        if path is None or unit.text(path) not in ("crate", "self", "super"):
            return False
    if parent.ts == "field_expression" and fld == "field":
        return False
    if _is_raw_borrowed(unit, node):
        return False
    if parent.ts == "token_tree" or any(a.ts == "token_tree" for a in unit.ancestors(node)):
        mac = _macro_of(unit, node)
        if mac is None or mac.node_id in view.expanded:
            return False  # expanded macros are scanned through their own view
        name = mac.props.get("macro_name")
        if name in _RAW_ADDR_MACROS or name not in EXPRESSION_MACROS:
            return False
    return True


def inventory(
    unit: SourceUnit,
    ctx: UnsafeContextMap,
    index: SetIndex | None = None,
    *,
    assume_unknown_calls_unsafe: bool = False,
) -> list[UnsafeOperation]:
    if index is None:
        index = SetIndex.build([unit])
    unions = {n.props["name"] for n in unit.walk("UnionItem") if n.props.get("name")}
    ops: list[UnsafeOperation] = []
    for view in expression_views(unit):
        vctx = ctx if view.is_file else view_contexts(view)
        ops.extend(_scan(view, vctx, index, unions, assume_unknown_calls_unsafe))
    ops.sort(key=lambda op: (op.span.byte_start, op.span.byte_end, op.kind.value))
    return ops


def _scan(
    view: ExprView, ctx: UnsafeContextMap, index: SetIndex, unions: set[str], assume_unknown: bool
) -> Iterator[UnsafeOperation]:
    unit = view.unit
    res = resolver_for(unit)

    def op(kind: UnsafeOperationKind, node: SyntaxNode) -> UnsafeOperation:
        return UnsafeOperation(kind, view.span(node), _enclosing_span(view, ctx, node), view.anchor(node).node_id)

    for node in unit.nodes:
        k = node.kind
        if k == "ImplBlock":
            if node.props.get("is_unsafe") and not node.props.get("is_negative"):
                yield UnsafeOperation(
                    UnsafeOperationKind.UnsafeTraitImpl, view.span(node), view.span(node), view.anchor(node).node_id
                )
            continue
        if not ctx.in_unsafe[node.node_id]:
            continue
        if k == "DerefExpr":
            operand = unit.nodes[node.children[-1]] if node.children else None
            if operand is not None and is_raw_pointer_type(res.expr_type(operand)):
                yield op(UnsafeOperationKind.RawPointerDeref, node)
        elif k == "CallExpr":
            path = node.props.get("callee_path_text")
            cands = index.resolve_call(path, self_type=_self_type(view, node))
            if cands:
                if all(d.is_unsafe for d in cands):
                    yield op(UnsafeOperationKind.UnsafeFunctionCall, node)
            elif assume_unknown and _in_unsafe_block(view, node):
                segs = split_path(path)
                # tuple-struct and enum-variant constructors are never unsafe
                if segs and not segs[-1][:1].isupper():
                    yield op(UnsafeOperationKind.UnsafeFunctionCall, node)
        elif k == "MethodCallExpr":
            recv = _receiver(unit, node)
            rtype = None
            if recv is not None:
                if recv.ts == "self":
                    rtype = _self_type(view, node)
                else:
                    rtype = receiver_type_name(res.expr_type(recv))
            cands = index.resolve_method(node.props.get("method_name"), receiver_type=rtype)
            if cands and all(d.is_unsafe for d in cands):
                yield op(UnsafeOperationKind.UnsafeFunctionCall, node)
            elif not cands and assume_unknown and _in_unsafe_block(view, node):
                yield op(UnsafeOperationKind.UnsafeFunctionCall, node)
        elif k == "Identifier":
            b = res.lookup(node)
            if b is not None and b.origin == "static" and b.is_mut and _is_static_mut_use(view, node):
                yield op(UnsafeOperationKind.StaticMutAccess, node)
        elif k == "FieldAccessExpr":
            base = _child(unit, node, "value")
            if base is None or type_base_name(res.expr_type(base)) not in unions:
                continue
            parent = unit.parent(node)
            if parent is not None and parent.ts == "assignment_expression" and node.props.get("field") == "left":
                continue  # writing a union field is safe
            if _is_raw_borrowed(unit, node):
                continue
            yield op(UnsafeOperationKind.UnionFieldAccess, node)


def _self_type(view: ExprView, node: SyntaxNode) -> str | None:
    found = self_type_of(view.unit, node)
    if found is None and not view.is_file:
        return self_type_of(view.file, view.anchor(node))
    return found


def _receiver(unit: SourceUnit, call: SyntaxNode) -> SyntaxNode | None:
    fn = _child(unit, call, "function")
    if fn is None:
        return None
    if fn.ts == "generic_function":
        fn = _child(unit, fn, "function")
    return _child(unit, fn, "value") if fn is not None else None


def _in_unsafe_block(view: ExprView, node: SyntaxNode) -> bool:
    unit = view.unit
    for a in unit.ancestors(node):
        if a.kind == "UnsafeBlock":
            return True
        if a.kind in ITEM_KINDS:
            if not view.is_file and a.kind == "FunctionItem" and a.parent == 0:
                assert view.parent is not None and view.macro is not None
                return _in_unsafe_block(view.parent, view.macro)
            return False
    return False
