"""Syntactic name lookup: what did the source declare about an identifier?

Only explicit evidence is used: a type annotation on the nearest visible
``let``, a parameter type, the type of a same-file ``static``/``const``, or
an initializer whose type is obvious from its syntax (a cast, a raw borrow,
a struct literal, a float literal).  Anything else resolves to ``None``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .source import SourceUnit, SyntaxNode, type_base_name

_BINDING_SCOPES = frozenset(
    {"match_arm", "for_expression", "closure_expression", "if_expression", "while_expression"}
)
_PATTERN_PARENTS = frozenset(
    {
        "tuple_pattern",
        "struct_pattern",
        "tuple_struct_pattern",
        "or_pattern",
        "field_pattern",
        "ref_pattern",
        "mut_pattern",
        "captured_pattern",
        "slice_pattern",
        "reference_pattern",
        "closure_parameters",
        "match_pattern",
    }
)


@dataclass(frozen=True)
class Binding:
    name: str
    origin: str  # "let" | "param" | "static" | "const" | "pattern"
    type_text: str | None
    node_id: int
    is_mut: bool = False

    @property
    def is_raw_pointer(self) -> bool:
        return is_raw_pointer_type(self.type_text)


def is_raw_pointer_type(text: str | None) -> bool:
    if not text:
        return False
    t = "".join(text.split())
    return t.startswith("*const") or t.startswith("*mut")


INTEGER_TYPES = frozenset(
    {"usize", "isize", "u8", "u16", "u32", "u64", "u128", "i8", "i16", "i32", "i64", "i128"}
)
FLOAT_TYPES = frozenset({"f32", "f64"})


class Resolver:
    """Per-unit lookup of identifiers to their declaring binding."""

    def __init__(self, unit: SourceUnit, fallback: Callable[[str], Binding | None] | None = None):
        self.unit = unit
        # scope outside the unit (used for re-parsed macro arguments)
        self.fallback = fallback
        self._file_level = {}
        for n in unit.walk("StaticItem", "ConstItem"):
            if self._enclosing_fn(n) is None and n.props.get("name"):
                origin = "static" if n.kind == "StaticItem" else "const"
                self._file_level.setdefault(
                    n.props["name"], Binding(n.props["name"], origin, n.props.get("type_text"), n.node_id, bool(n.props.get("is_mut")))
                )

    def _enclosing_fn(self, node: SyntaxNode) -> SyntaxNode | None:
        for a in self.unit.ancestors(node):
            if a.kind == "FunctionItem":
                return a
        return None

    def lookup(self, node: SyntaxNode, name: str | None = None) -> Binding | None:
        """Binding visible at ``node`` for ``name`` (default: the node's own name)."""
        name = name or node.props.get("name")
        if not name:
            return None
        unit = self.unit
        pos = node.span.byte_start
        child = node
        for anc in unit.ancestors(node):
            if anc.kind in ("Block", "SourceFile") or anc.ts == "declaration_list":
                hit = None
                for cid in anc.children:
                    c = unit.nodes[cid]
                    if c.span.byte_start >= pos:
                        break
                    if c.kind == "LetBinding" and _binds(unit, c, name):
                        hit = c
                if hit is not None:
                    return Binding(name, "let", self._let_type(hit), hit.node_id)
            elif anc.ts in _BINDING_SCOPES:
                pattern_holder = anc
                for cid in pattern_holder.children:
                    c = unit.nodes[cid]
                    if c.node_id == child.node_id:
                        continue
                    if c.props.get("field") in ("pattern", "parameters", "condition") or c.ts in (
                        "match_pattern",
                        "closure_parameters",
                        "let_condition",
                        "let_chain",
                    ):
                        if c.ts in ("let_condition", "let_chain"):
                            # only the let in the condition binds for the body
                            if child.props.get("field") in ("consequence", "body") and _pattern_binds(unit, c, name):
                                return Binding(name, "pattern", None, c.node_id)
                            continue
                        if _pattern_binds(unit, c, name):
                            return Binding(name, "pattern", None, c.node_id)
            elif anc.kind == "FunctionItem":
                for pname, ptype in anc.props.get("params", ()):
                    if pname == name:
                        return Binding(name, "param", ptype, anc.node_id)
                break
            child = anc
        hit = self._file_level.get(name)
        if hit is None and self.fallback is not None:
            hit = self.fallback(name)
        return hit

    def _let_type(self, let: SyntaxNode) -> str | None:
        ann = let.props.get("type_annotation_text")
        if ann:
            return ann
        unit = self.unit
        value = next((unit.nodes[c] for c in let.children if unit.nodes[c].props.get("field") == "value"), None)
        # the initializer's own syntax only; no chasing through other bindings
        return None if value is None else self.expr_type(value, chase=False)

    def expr_type(self, node: SyntaxNode, *, chase: bool = True) -> str | None:
        """Declared (or syntactically evident) type text of an expression."""
        unit = self.unit
        if node.kind == "Identifier":
            b = self.lookup(node) if chase else None
            return b.type_text if b else None
        if node.ts == "self":
            impl = _enclosing_impl(unit, node)
            return impl.props.get("self_type_text") if impl else None
        if node.kind == "CastExpr":
            return node.props.get("target_type_text")
        if node.ts == "parenthesized_expression" and node.children:
            return self.expr_type(unit.nodes[node.children[0]], chase=chase)
        if node.ts == "reference_expression" and node.props.get("is_raw"):
            inner = unit.nodes[node.children[-1]] if node.children else None
            t = self.expr_type(inner, chase=chase) if inner is not None else None
            return ("*mut " if node.props.get("is_mut") else "*const ") + (t or "_")
        if node.kind == "FloatLiteral":
            return _float_literal_type(node.props.get("text") or "")
        if node.ts == "unary_expression" and node.props.get("operator") == "-" and node.children:
            inner = unit.nodes[node.children[0]]
            if inner.kind == "FloatLiteral":
                return self.expr_type(inner)
        if node.ts == "struct_expression":
            name_node = next((unit.nodes[c] for c in node.children if unit.nodes[c].props.get("field") == "name"), None)
            return unit.text(name_node) if name_node else None
        return None


def _float_literal_type(text: str) -> str:
    for suffix in ("f32", "f64"):
        if text.endswith(suffix):
            return suffix
    return "{float}"


def _binds(unit: SourceUnit, let: SyntaxNode, name: str) -> bool:
    if let.props.get("name") == name:
        return True
    for cid in let.children:
        c = unit.nodes[cid]
        if c.props.get("field") == "pattern":
            return _pattern_binds(unit, c, name)
    return False


def _pattern_binds(unit: SourceUnit, pattern: SyntaxNode, name: str) -> bool:
    if pattern.kind == "Identifier":
        return pattern.props.get("name") == name
    for d in unit.descendants(pattern):
        if d.kind != "Identifier" or d.props.get("name") != name:
            continue
        parent = unit.parent(d)
        # `Some(x)` binds x but not Some; struct/type names sit in the "type" field
        if d.props.get("field") in ("type", "name") and parent is not None and parent.ts != "field_pattern":
            continue
        if parent is not None and parent.ts in ("scoped_identifier", "binary_expression", "call_expression"):
            continue
        return True
    return False


def _enclosing_impl(unit: SourceUnit, node: SyntaxNode) -> SyntaxNode | None:
    for a in unit.ancestors(node):
        if a.kind == "ImplBlock":
            return a
        if a.kind in ("StructItem", "TraitItem", "ModuleItem"):
            return None
    return None


def enclosing_impl(unit: SourceUnit, node: SyntaxNode) -> SyntaxNode | None:
    return _enclosing_impl(unit, node)


def enclosing_function(unit: SourceUnit, node: SyntaxNode) -> SyntaxNode | None:
    for a in unit.ancestors(node):
        if a.kind == "FunctionItem":
            return a
    return None


def resolver_for(unit: SourceUnit) -> Resolver:
    r = getattr(unit, "_resolver", None)
    if r is None:
        r = Resolver(unit)
        unit._resolver = r  # type: ignore[attr-defined]
    return r


def type_name(text: str | None) -> str | None:
    return type_base_name(text)
