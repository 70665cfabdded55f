"""Rust source model: a construct tree with exact spans and preserved comments.

Parsing is delegated to tree-sitter-rust; the concrete tree is folded into
:class:`SyntaxNode` records whose ``kind`` is one of the construct kinds the
checks understand (``FunctionItem``, ``UnsafeBlock``, ``CastExpr``, ...).
Every other named tree-sitter node is kept as ``Opaque`` so spans and
nesting stay complete; its tree-sitter type is always in ``props["ts"]``.

The model is syntactic only.  There is no name resolution, type inference
or macro expansion; checks work from declared type text.
"""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterator

import tree_sitter
import tree_sitter_rust

__all__ = [
    "Span",
    "SyntaxNode",
    "SourceUnit",
    "RustSyntaxError",
    "parse",
    "parse_file",
    "comment_before",
    "ITEM_KINDS",
]


@dataclass(frozen=True, order=True)
class Span:
    byte_start: int
    byte_end: int
    line_start: int
    col_start: int
    line_end: int
    col_end: int

    def contains(self, other: Span) -> bool:
        return self.byte_start <= other.byte_start and other.byte_end <= self.byte_end


@dataclass(frozen=True)
class SyntaxNode:
    node_id: int
    kind: str
    span: Span
    children: tuple[int, ...]
    props: dict[str, Any] = field(compare=False)
    parent: int | None = None

    @property
    def ts(self) -> str:
        return self.props["ts"]


class RustSyntaxError(ValueError):
    def __init__(self, path: str, message: str, span: Span):
        super().__init__(f"{path}:{span.line_start}:{span.col_start}: {message}")
        self.path = path
        self.message = message
        self.span = span


# tree-sitter type -> construct kind (call/field nodes are decided in context)
_KIND = {
    "source_file": "SourceFile",
    "function_item": "FunctionItem",
    "function_signature_item": "FunctionItem",
    "struct_item": "StructItem",
    "enum_item": "EnumItem",
    "union_item": "UnionItem",
    "trait_item": "TraitItem",
    "impl_item": "ImplBlock",
    "static_item": "StaticItem",
    "const_item": "ConstItem",
    "mod_item": "ModuleItem",
    "use_declaration": "UseDecl",
    "attribute_item": "Attribute",
    "inner_attribute_item": "Attribute",
    "macro_invocation": "MacroInvocation",
    "type_cast_expression": "CastExpr",
    "unsafe_block": "UnsafeBlock",
    "const_block": "ConstBlock",
    "let_declaration": "LetBinding",
    "float_literal": "FloatLiteral",
    "line_comment": "Comment",
    "block_comment": "Comment",
    "type_item": "TypeAlias",
    "extern_crate_declaration": "ExternCrate",
    "foreign_mod_item": "ForeignModule",
    "macro_definition": "MacroDefinition",
    "identifier": "Identifier",
    "closure_expression": "Closure",
    "block": "Block",
}

ITEM_KINDS = frozenset(
    {
        "FunctionItem",
        "StructItem",
        "EnumItem",
        "UnionItem",
        "TraitItem",
        "ImplBlock",
        "StaticItem",
        "ConstItem",
        "ModuleItem",
        "UseDecl",
        "TypeAlias",
        "ExternCrate",
        "ForeignModule",
        "MacroDefinition",
    }
)

_COMPARISON_OPS = frozenset({"==", "!=", "<", ">", "<=", ">="})

# Rust 2024 `safe` qualifier on items in `unsafe extern` blocks; the bundled
# grammar predates it.
_SAFE_QUALIFIER = re.compile(rb"\bsafe(?=\s+(?:fn|static)\b)")


@lru_cache(maxsize=1)
def _parser() -> tree_sitter.Parser:
    return tree_sitter.Parser(tree_sitter.Language(tree_sitter_rust.language()))


class SourceUnit:
    """One parsed ``.rs`` file.

    Nodes are stored densely (``node_id`` 0..n-1, root is 0) in pre-order.
    """

    def __init__(self, path: str, source: str, data: bytes, nodes: list[SyntaxNode]):
        self.path = path
        self.source = source
        self.data = data
        self.nodes = nodes
        self.line_table = _line_table(data)
        self.comments = [n for n in nodes if n.kind == "Comment"]

    @property
    def root(self) -> SyntaxNode:
        return self.nodes[0]

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> SyntaxNode:
        return self.nodes[node_id]

    def children(self, node: SyntaxNode) -> list[SyntaxNode]:
        return [self.nodes[c] for c in node.children]

    def parent(self, node: SyntaxNode) -> SyntaxNode | None:
        return None if node.parent is None else self.nodes[node.parent]

    def ancestors(self, node: SyntaxNode) -> Iterator[SyntaxNode]:
        cur = self.parent(node)
        while cur is not None:
            yield cur
            cur = self.parent(cur)

    def walk(self, *kinds: str) -> Iterator[SyntaxNode]:
        """Nodes in pre-order (source order), optionally restricted to ``kinds``."""
        if not kinds:
            return iter(self.nodes)
        wanted = set(kinds)
        return (n for n in self.nodes if n.kind in wanted)

    def descendants(self, node: SyntaxNode) -> Iterator[SyntaxNode]:
        # pre-order ids make every subtree a contiguous id range
        end = self.subtree_end(node)
        return iter(self.nodes[node.node_id + 1 : end])

    def subtree_end(self, node: SyntaxNode) -> int:
        cur = node
        while cur.children:
            cur = self.nodes[cur.children[-1]]
        return cur.node_id + 1

    def text(self, node_or_span: SyntaxNode | Span) -> str:
        span = node_or_span.span if isinstance(node_or_span, SyntaxNode) else node_or_span
        return self.data[span.byte_start : span.byte_end].decode("utf-8")

    def line_of(self, byte: int) -> int:
        return bisect.bisect_right(self.line_table, byte)

    def span(self, byte_start: int, byte_end: int) -> Span:
        return _make_span(self.data, self.line_table, byte_start, byte_end)

    def item_start_line(self, node: SyntaxNode) -> int:
        """First line of an item including its outer attributes."""
        attrs = node.props.get("attrs") or ()
        if attrs:
            return self.nodes[attrs[0]].span.line_start
        return node.span.line_start

    def attributes(self, node: SyntaxNode) -> list[SyntaxNode]:
        return [self.nodes[a] for a in node.props.get("attrs") or ()]


def _line_table(data: bytes) -> list[int]:
    starts = [0]
    pos = data.find(b"\n")
    while pos != -1:
        starts.append(pos + 1)
        pos = data.find(b"\n", pos + 1)
    return starts


def _make_span(data: bytes, table: list[int], start: int, end: int) -> Span:
    def pos(b: int) -> tuple[int, int]:
        line = bisect.bisect_right(table, b)
        ls = table[line - 1]
        col = len(data[ls:b].decode("utf-8", errors="replace")) + 1
        return line, col

    l1, c1 = pos(start)
    l2, c2 = pos(end)
    return Span(start, end, l1, c1, l2, c2)


def _strip_generics(text: str) -> str:
    depth = 0
    out = []
    for ch in text:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth = max(0, depth - 1)
        elif depth == 0:
            out.append(ch)
    return "".join(out).strip()


def type_base_name(type_text: str | None) -> str | None:
    """``&mut foo::Bar<T>`` -> ``Bar``."""
    if not type_text:
        return None
    t = type_text.strip()
    while True:
        if t.startswith("&"):
            t = t[1:].lstrip()
            if t.startswith("'"):
                t = t.split(None, 1)[1] if " " in t else ""
            if t.startswith("mut "):
                t = t[4:].lstrip()
            continue
        break
    t = _strip_generics(t)
    if not t:
        return None
    return t.split("::")[-1].strip() or None


class _Builder:
    def __init__(self, path: str, data: bytes, blanked: list[int]):
        self.path = path
        self.data = data
        self.table = _line_table(data)
        self.blanked = blanked
        self.nodes: list[SyntaxNode | None] = []

    def text(self, ts_node: tree_sitter.Node | None) -> str | None:
        if ts_node is None:
            return None
        return self.data[ts_node.start_byte : ts_node.end_byte].decode("utf-8")

    def build(
        self,
        ts_node: tree_sitter.Node,
        parent: int | None,
        context: dict[str, Any],
        field_name: str | None = None,
    ) -> int:
        node_id = len(self.nodes)
        self.nodes.append(None)
        kind, props = self.classify(ts_node, parent, context)
        props["ts"] = ts_node.type
        if field_name:
            props["field"] = field_name

        child_ctx = context
        if kind == "ForeignModule":
            child_ctx = {**context, "extern_block": True}
        elif kind in ("ImplBlock", "TraitItem"):
            child_ctx = {**context, "extern_block": False, "container": node_id}

        child_ids: list[int] = []
        pending_attrs: list[int] = []
        for i, child in enumerate(ts_node.children):
            if not child.is_named:
                continue
            cid = self.build(child, node_id, child_ctx, ts_node.field_name_for_child(i))
            cnode = self.nodes[cid]
            assert cnode is not None
            child_ids.append(cid)
            if cnode.kind == "Attribute" and not cnode.props["is_inner"]:
                pending_attrs.append(cid)
            elif cnode.kind == "Comment":
                continue
            else:
                if pending_attrs:
                    cnode.props["attrs"] = tuple(pending_attrs)
                    pending_attrs = []

        end = ts_node.end_byte
        if kind == "Comment":
            # doc line comments swallow their newline; keep spans on one line
            while end > ts_node.start_byte and self.data[end - 1 : end] in (b"\n", b"\r"):
                end -= 1
        span = _make_span(self.data, self.table, ts_node.start_byte, end)
        self.nodes[node_id] = SyntaxNode(node_id, kind, span, tuple(child_ids), props, parent)
        return node_id

    def classify(
        self, n: tree_sitter.Node, parent: int | None, ctx: dict[str, Any]
    ) -> tuple[str, dict[str, Any]]:
        t = n.type
        text = self.text
        field_ = n.child_by_field_name
        props: dict[str, Any] = {}

        if t in ("function_item", "function_signature_item"):
            mods = [c for c in n.children if c.type == "function_modifiers"]
            mod_tokens = {c.type for m in mods for c in m.children}
            name = text(field_("name"))
            name_node = field_("name")
            name_at = name_node.start_byte if name_node else n.end_byte
            # the blanked keyword is either inside the node (after `pub`) or just before it
            safe_decl = any(
                n.start_byte <= b < name_at or (b < n.start_byte and not self.data[b + 4 : n.start_byte].strip())
                for b in self.blanked
            )
            params = []
            plist = field_("parameters")
            if plist is not None:
                for p in plist.named_children:
                    if p.type == "parameter":
                        params.append((_pattern_name(self, p.child_by_field_name("pattern")), text(p.child_by_field_name("type"))))
                    elif p.type == "self_parameter":
                        params.append(("self", text(p)))
            props.update(
                name=name,
                is_unsafe="unsafe" in mod_tokens,
                is_const="const" in mod_tokens,
                is_main=name == "main" and parent == 0,
                has_body=t == "function_item",
                params=tuple(params),
                return_type_text=text(field_("return_type")),
                in_extern_block=bool(ctx.get("extern_block")),
                is_safe_decl=safe_decl,
                container=ctx.get("container"),
            )
            return "FunctionItem", props

        if t in ("struct_item", "union_item"):
            props["name"] = text(field_("name"))
            props["fields"] = tuple(_fields(self, field_("body")))
            return _KIND[t], props

        if t in ("enum_item", "mod_item", "type_item", "macro_definition"):
            props["name"] = text(field_("name"))
            if t == "mod_item":
                props["inline"] = field_("body") is not None
            return _KIND[t], props

        if t == "trait_item":
            props["name"] = text(field_("name"))
            props["is_unsafe"] = any(c.type == "unsafe" for c in n.children)
            return "TraitItem", props

        if t == "impl_item":
            trait = field_("trait")
            self_type = text(field_("type"))
            props.update(
                is_unsafe=any(c.type == "unsafe" for c in n.children),
                is_negative=any(c.type == "!" for c in n.children),
                trait_path=text(trait),
                self_type_text=self_type,
                self_type_name=type_base_name(self_type),
                trait_name=type_base_name(text(trait)),
            )
            return "ImplBlock", props

        if t == "static_item":
            props.update(
                name=text(field_("name")),
                is_mut=any(c.type == "mutable_specifier" for c in n.children),
                type_text=text(field_("type")),
            )
            return "StaticItem", props

        if t == "const_item":
            props.update(name=text(field_("name")), type_text=text(field_("type")))
            return "ConstItem", props

        if t == "use_declaration":
            arg = field_("argument")
            globs: list[tuple[str, int, int]] = []
            renames: list[str] = []
            _collect_use(self, arg, "", globs, renames)
            props.update(
                path_text=text(arg),
                is_glob=bool(globs),
                globs=tuple(globs),
                rename=renames[0] if len(renames) == 1 else None,
            )
            return "UseDecl", props

        if t in ("attribute_item", "inner_attribute_item"):
            attr = next((c for c in n.named_children if c.type == "attribute"), None)
            path_node = attr.named_children[0] if attr is not None and attr.named_children else None
            args = attr.child_by_field_name("arguments") if attr is not None else None
            value = attr.child_by_field_name("value") if attr is not None else None
            props.update(
                path_text=text(path_node) or "",
                tokens_text=text(args) or (("= " + text(value)) if value is not None else ""),
                is_inner=t == "inner_attribute_item",
            )
            return "Attribute", props

        if t == "macro_invocation":
            tree = next((c for c in n.named_children if c.type == "token_tree"), None)
            args_text = text(tree) or ""
            if len(args_text) >= 2:
                args_text = args_text[1:-1]
            macro = text(field_("macro")) or ""
            props.update(macro_name=macro.split("::")[-1], macro_path=macro, args_text=args_text)
            if tree is not None and tree.end_byte - tree.start_byte >= 2:
                props["args_start"] = tree.start_byte + 1
            return "MacroInvocation", props

        if t == "type_cast_expression":
            props["target_type_text"] = text(field_("type"))
            return "CastExpr", props

        if t == "unary_expression":
            op = n.children[0].type if n.children else ""
            props["operator"] = op
            return ("DerefExpr" if op == "*" else "Opaque"), props

        if t == "call_expression":
            fn = field_("function")
            generic = False
            if fn is not None and fn.type == "generic_function":
                fn = fn.child_by_field_name("function")
                generic = True
            if fn is not None and fn.type == "field_expression":
                props.update(
                    method_name=text(fn.child_by_field_name("field")),
                    receiver_text=text(fn.child_by_field_name("value")),
                )
                return "MethodCallExpr", props
            props.update(callee_path_text=text(fn), generic=generic)
            return "CallExpr", props

        if t == "field_expression":
            if _is_call_function(n):
                return "Opaque", props
            props.update(base=text(field_("value")), field_name=text(field_("field")))
            return "FieldAccessExpr", props

        if t == "let_declaration":
            pattern = field_("pattern")
            props.update(
                name=_pattern_name(self, pattern),
                pattern_text=text(pattern),
                type_annotation_text=text(field_("type")),
                value_kind=field_("value").type if field_("value") is not None else None,
                value_text=text(field_("value")),
            )
            return "LetBinding", props

        if t == "binary_expression":
            op = text(field_("operator")) if field_("operator") is not None else None
            if op is None:
                mid = [c for c in n.children if not c.is_named]
                op = mid[0].type if mid else ""
            props["operator"] = op
            return ("ComparisonExpr" if op in _COMPARISON_OPS else "Opaque"), props

        if t in ("line_comment", "block_comment"):
            raw = text(n) or ""
            if t == "line_comment":
                body = raw[2:].rstrip("\r\n")
            else:
                body = raw[2:-2] if raw.endswith("*/") else raw[2:]
            props.update(text=body, is_line=t == "line_comment")
            return "Comment", props

        if t == "float_literal":
            props["text"] = text(n)
            return "FloatLiteral", props

        if t == "identifier":
            props["name"] = text(n)
            return "Identifier", props

        if t == "reference_expression":
            props["is_raw"] = any(c.type == "raw" for c in n.children)
            props["is_mut"] = any(c.type == "mutable_specifier" for c in n.children)
            return "Opaque", props

        if t in _KIND:
            return _KIND[t], props
        return "Opaque", props


def _is_call_function(n: tree_sitter.Node) -> bool:
    parent = n.parent
    if parent is None:
        return False
    if parent.type == "generic_function":
        parent = parent.parent
        if parent is None:
            return False
    fn = parent.child_by_field_name("function")
    return parent.type == "call_expression" and fn is not None and (
        fn.id == n.id or (fn.type == "generic_function" and fn.child_by_field_name("function").id == n.id)
    )


def _pattern_name(b: _Builder, pattern: tree_sitter.Node | None) -> str | None:
    if pattern is None:
        return None
    if pattern.type == "identifier":
        return b.text(pattern)
    if pattern.type == "mut_pattern":
        inner = pattern.named_children[-1] if pattern.named_children else None
        return _pattern_name(b, inner)
    if pattern.type == "ref_pattern":
        inner = pattern.named_children[-1] if pattern.named_children else None
        return _pattern_name(b, inner)
    return None


def _fields(b: _Builder, body: tree_sitter.Node | None) -> Iterator[tuple[str, str | None]]:
    if body is None:
        return
    if body.type == "field_declaration_list":
        for f in body.named_children:
            if f.type == "field_declaration":
                yield b.text(f.child_by_field_name("name")) or "", b.text(f.child_by_field_name("type"))
    elif body.type == "ordered_field_declaration_list":
        idx = 0
        for f in body.named_children:
            if f.type in ("attribute_item", "visibility_modifier") or f.type.endswith("comment"):
                continue
            yield str(idx), b.text(f)
            idx += 1


def _collect_use(
    b: _Builder,
    n: tree_sitter.Node | None,
    prefix: str,
    globs: list[tuple[str, int, int]],
    renames: list[str],
) -> None:
    if n is None:
        return
    t = n.type

    def join(a: str, c: str) -> str:
        return f"{a}::{c}" if a and c else (a or c)

    if t == "use_wildcard":
        inner = n.named_children[0] if n.named_children else None
        star = n.children[-1] if n.children else n
        globs.append((join(prefix, b.text(inner) or ""), star.start_byte, star.end_byte))
    elif t == "scoped_use_list":
        path = n.child_by_field_name("path")
        lst = n.child_by_field_name("list")
        _collect_use(b, lst, join(prefix, b.text(path) or ""), globs, renames)
    elif t == "use_list":
        for c in n.named_children:
            _collect_use(b, c, prefix, globs, renames)
    elif t == "use_as_clause":
        alias = n.child_by_field_name("alias")
        if alias is not None:
            renames.append(b.text(alias) or "")


def _first_error(node: tree_sitter.Node) -> tree_sitter.Node | None:
    if node.type == "ERROR" or node.is_missing:
        return node
    if not node.has_error:
        return None
    for child in node.children:
        found = _first_error(child)
        if found is not None:
            return found
    return node


def parse(path: str, source: str | bytes) -> SourceUnit:
    """Parse Rust 2024-edition source into a :class:`SourceUnit`.

    Raises :class:`RustSyntaxError` (with a span) on malformed input.
    """
    data = source.encode("utf-8") if isinstance(source, str) else bytes(source)
    text = data.decode("utf-8")
    tree = _parser().parse(data)
    blanked: list[int] = []
    if tree.root_node.has_error and _SAFE_QUALIFIER.search(data):
        blanked = [m.start() for m in _SAFE_QUALIFIER.finditer(data)]
        patched = _SAFE_QUALIFIER.sub(b"    ", data)
        retry = _parser().parse(patched)
        if not retry.root_node.has_error:
            tree = retry
        else:
            blanked = []
    if tree.root_node.has_error:
        err = _first_error(tree.root_node)
        assert err is not None
        table = _line_table(data)
        span = _make_span(data, table, err.start_byte, max(err.end_byte, err.start_byte))
        if err.is_missing:
            msg = f"syntax error: expected {err.type!r}"
        else:
            snippet = data[err.start_byte : err.end_byte].decode("utf-8", "replace").split("\n")[0][:40]
            msg = f"syntax error near {snippet!r}" if snippet else "syntax error"
        raise RustSyntaxError(path, msg, span)

    builder = _Builder(path, data, blanked)
    builder.build(tree.root_node, None, {})
    nodes = [n for n in builder.nodes if n is not None]
    return SourceUnit(path, text, data, nodes)


def parse_file(path: str) -> SourceUnit:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse(path, data)


def comment_before(unit: SourceUnit, node: SyntaxNode, *, line: int | None = None) -> SyntaxNode | None:
    """The line comment on the line directly above ``node``, if any.

    Only comments that stand on their own line count; a trailing comment
    after code on the previous line does not.  ``line`` overrides the
    anchor line (used to look above an item's attributes).
    """
    target = (line if line is not None else node.span.line_start) - 1
    if target < 1:
        return None
    for c in unit.comments:
        if not c.props["is_line"] or c.span.line_end != target:
            continue
        line_start = unit.line_table[c.span.line_start - 1]
        if unit.data[line_start : c.span.byte_start].strip():
            continue
        return c
    return None
