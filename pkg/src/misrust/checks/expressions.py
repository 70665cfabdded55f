"""Expression-level checks."""
from __future__ import annotations

from ..diagnostic import Diagnostic
from ..index import split_path
from ..macros import ExprView, expression_views
from ..resolve import FLOAT_TYPES, INTEGER_TYPES, is_raw_pointer_type
from ..source import SourceUnit, SyntaxNode
from . import CheckRun, register
from .constexpr import is_constant_expression, split_top_level
from .items import in_item_with

DEFAULT_PANIC_MACROS = ("panic", "todo", "unimplemented", "unreachable")
DEFAULT_PANIC_METHODS = ("unwrap", "expect")
DEFAULT_ALLOC_CALLS = (
    "Box::new",
    "Vec::new",
    "Vec::with_capacity",
    "vec!",
    "String::from",
    "format!",
    "to_string",
    "to_owned",
    "Rc::new",
    "Arc::new",
)
ASSERT_ARITY = {"assert": 1, "assert_eq": 2, "assert_ne": 2}


def child(unit: SourceUnit, node: SyntaxNode, field_name: str) -> SyntaxNode | None:
    for c in node.children:
        cn = unit.nodes[c]
        if cn.props.get("field") == field_name:
            return cn
    return None


def method_name_node(unit: SourceUnit, call: SyntaxNode) -> SyntaxNode:
    fn = child(unit, call, "function")
    if fn is not None and fn.ts == "generic_function":
        fn = child(unit, fn, "function")
    name = child(unit, fn, "field") if fn is not None else None
    return name or call


def _is_test_attr(unit: SourceUnit, attr: SyntaxNode) -> bool:
    path = attr.props.get("path_text")
    if path == "test":
        return True
    if path == "cfg":
        return "".join(attr.props.get("tokens_text", "").split()) == "(test)"
    return False


@register(
    "CHK-18.5.1",
    "18.5.1",
    options={"panic_macros": list(DEFAULT_PANIC_MACROS), "panic_methods": list(DEFAULT_PANIC_METHODS)},
)
def check_panic_paths(run: CheckRun) -> list[Diagnostic]:
    unit = run.unit
    macros = set(run.opt("panic_macros"))
    methods = set(run.opt("panic_methods"))
    out = []
    for view in expression_views(unit):
        for n in view.unit.walk("MacroInvocation", "MethodCallExpr"):
            if n.kind == "MacroInvocation":
                name = n.props.get("macro_name")
                if name not in macros:
                    continue
                where, what = n, f"`{name}!`"
            else:
                name = n.props.get("method_name")
                if name not in methods:
                    continue
                where, what = method_name_node(view.unit, n), f"`.{name}()`"
            if in_item_with(unit, view.anchor(n), lambda a: _is_test_attr(unit, a)):
                continue
            out.append(run.view_diag(view, where, f"{what} can panic; return a recoverable error instead"))
    return out


def _strip_parens(unit: SourceUnit, node: SyntaxNode) -> SyntaxNode:
    while node.ts == "parenthesized_expression" and node.children:
        node = unit.nodes[node.children[0]]
    return node


@register("CHK-8.2.7", "8.2.7", gated=True)
def check_ptr_int_cast(run: CheckRun) -> list[Diagnostic]:
    out = []
    for view in expression_views(run.unit):
        vu = view.unit
        for cast in vu.walk("CastExpr"):
            target = "".join((cast.props.get("target_type_text") or "").split())
            if target not in INTEGER_TYPES:
                continue
            operand = child(vu, cast, "value")
            if operand is None:
                continue
            operand = _strip_parens(vu, operand)
            evidence = None
            if operand.kind == "Identifier":
                b = view.lookup(operand)
                if b is not None and b.origin in ("let", "param") and b.is_raw_pointer:
                    evidence = f"`{operand.props['name']}: {b.type_text}`"
            elif operand.kind == "CastExpr" and is_raw_pointer_type(operand.props.get("target_type_text")):
                evidence = f"`{operand.props['target_type_text']}`"
            if evidence:
                out.append(run.view_diag(view, cast, f"pointer {evidence} cast to integer type `{target}`"))
    return out


def _is_float_operand(unit: SourceUnit, view: ExprView, node: SyntaxNode) -> bool:
    node = _strip_parens(unit, node)
    if node.kind == "FloatLiteral":
        return True
    if node.ts == "unary_expression" and node.props.get("operator") == "-" and node.children:
        return _is_float_operand(unit, view, unit.nodes[node.children[0]])
    if node.kind == "Identifier":
        b = view.lookup(node)
        return b is not None and b.type_text is not None and (
            "".join(b.type_text.split()) in FLOAT_TYPES or b.type_text == "{float}"
        )
    return False


@register("CHK-0.3.1", "0.3.1")
def check_float_equality(run: CheckRun) -> list[Diagnostic]:
    out = []
    for view in expression_views(run.unit):
        vu = view.unit
        for cmp in vu.walk("ComparisonExpr"):
            op = cmp.props.get("operator")
            if op not in ("==", "!="):
                continue
            sides = [child(vu, cmp, "left"), child(vu, cmp, "right")]
            if any(s is not None and _is_float_operand(vu, view, s) for s in sides):
                msg = f"floating-point values compared with `{op}`; compare against a tolerance"
                out.append(run.view_diag(view, cmp, msg))
    return out


@register("CHK-21.6.1", "21.6.1", options={"no_alloc": False, "alloc_calls": list(DEFAULT_ALLOC_CALLS)})
def check_heap_alloc(run: CheckRun) -> list[Diagnostic]:
    if not run.opt("no_alloc"):
        return []
    entries = list(run.opt("alloc_calls"))
    macros = {e[:-1] for e in entries if e.endswith("!")}
    paths = [e.split("::") for e in entries if not e.endswith("!")]
    out = []
    for view in expression_views(run.unit):
        for n in view.unit.walk("CallExpr", "MethodCallExpr", "MacroInvocation"):
            if n.kind == "MacroInvocation":
                if n.props.get("macro_name") in macros:
                    out.append(_alloc_diag(run, view, n, f"`{n.props['macro_name']}!`"))
                continue
            if n.kind == "MethodCallExpr":
                segs = [n.props.get("method_name") or ""]
            else:
                segs = split_path(n.props.get("callee_path_text"))
            hit = next((p for p in paths if len(p) <= len(segs) and segs[-len(p) :] == p), None)
            if hit is not None:
                out.append(_alloc_diag(run, view, n, f"`{'::'.join(hit)}`"))
    return out


def _alloc_diag(run: CheckRun, view: ExprView, node: SyntaxNode, what: str) -> Diagnostic:
    return run.view_diag(view, node, f"{what} allocates on the heap")


def _in_const_context(unit: SourceUnit, node: SyntaxNode) -> bool:
    for a in unit.ancestors(node):
        if a.kind in ("ConstBlock", "ConstItem", "StaticItem"):
            return True
        if a.kind == "FunctionItem":
            return False
    return False


@register("CHK-22.3.1", "22.3.1")
def check_const_assert(run: CheckRun) -> list[Diagnostic]:
    unit = run.unit
    out = []
    for m in unit.walk("MacroInvocation"):
        name = m.props.get("macro_name")
        arity = ASSERT_ARITY.get(name)
        if arity is None or _in_const_context(unit, m):
            continue
        args = split_top_level(m.props.get("args_text") or "")
        if len(args) < arity:
            continue
        if all(is_constant_expression(a) for a in args[:arity]):
            out.append(run.diag(m, f"`{name}!` on a constant expression; wrap it in `const {{ ... }}`"))
    return out
