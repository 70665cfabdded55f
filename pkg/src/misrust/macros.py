"""Expression views of macro arguments.

The grammar keeps macro arguments as flat token trees, so comparisons, casts,
calls and unsafe blocks written inside ``println!(..)`` or ``assert!(..)``
are invisible to node-based analysis.  For macros whose arguments are
ordinary expressions, the argument text is re-parsed on its own and exposed
as an :class:`ExprView` whose spans map back onto the host file and whose
name lookups fall back to the scope around the macro.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .resolve import Binding, Resolver, resolver_for
from .source import RustSyntaxError, SourceUnit, Span, SyntaxNode, parse

# macros whose arguments are ordinary expressions evaluated in place
EXPRESSION_MACROS = frozenset(
    {
        "println", "print", "eprintln", "eprint", "format", "write", "writeln", "panic",
        "assert", "assert_eq", "assert_ne", "debug_assert", "debug_assert_eq",
        "debug_assert_ne", "dbg", "vec", "format_args",
    }
)  # fmt: skip

_PREFIX = b"fn __m() { ["
_SUFFIX = b"]; }"


@dataclass(eq=False)
class ExprView:
    """A parsed piece of expression syntax plus the mapping back to its file.

    The file itself is the root view (``parent is None``).  Every other view
    holds the arguments of ``macro``, a node of ``parent.unit``.
    """

    file: SourceUnit
    unit: SourceUnit
    parent: ExprView | None = None
    macro: SyntaxNode | None = None
    delta: int = 0
    # macro node ids of this view's unit that have a child view
    expanded: set[int] = field(default_factory=set)
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def is_file(self) -> bool:
        return self.parent is None

    @property
    def host(self) -> SyntaxNode | None:
        """The file-level macro invocation this view ultimately lives in."""
        v = self
        while v.parent is not None and not v.parent.is_file:
            v = v.parent
        return v.macro

    def span(self, node: SyntaxNode) -> Span:
        if self.is_file:
            return node.span
        return self.file.span(node.span.byte_start + self.delta, node.span.byte_end + self.delta)

    def anchor(self, node: SyntaxNode) -> SyntaxNode:
        """The file node standing for ``node`` (itself, or the host macro)."""
        return node if self.is_file else self.host  # type: ignore[return-value]

    def lookup(self, node: SyntaxNode, name: str | None = None) -> Binding | None:
        return resolver_for(self.unit).lookup(node, name)


def _argument_unit(unit: SourceUnit, node: SyntaxNode) -> tuple[SourceUnit, int] | None:
    start = node.props.get("args_start")
    if start is None:
        return None
    body = unit.data[start : start + len(node.props["args_text"].encode("utf-8"))]
    if not body.strip():
        return None
    try:
        sub = parse("<macro>", _PREFIX + body + _SUFFIX)
    except RustSyntaxError:
        return None  # not expression syntax (patterns, custom DSLs)
    return sub, start - len(_PREFIX)


def _views(view: ExprView) -> Iterator[ExprView]:
    yield view
    outer = resolver_for(view.unit)
    for m in view.unit.walk("MacroInvocation"):
        if m.props.get("macro_name") not in EXPRESSION_MACROS:
            continue
        got = _argument_unit(view.unit, m)
        if got is None:
            continue
        sub, off = got
        sub._resolver = Resolver(  # type: ignore[attr-defined]
            sub, fallback=lambda name, r=outer, at=m: r.lookup(at, name)
        )
        view.expanded.add(m.node_id)
        yield from _views(ExprView(view.file, sub, view, m, view.delta + off))


def expression_views(file: SourceUnit) -> list[ExprView]:
    """The file view followed by every (nested) expression-macro argument view."""
    cached = getattr(file, "_expr_views", None)
    if cached is None:
        cached = list(_views(ExprView(file, file)))
        file._expr_views = cached  # type: ignore[attr-defined]
    return cached
