from __future__ import annotations

from ..diagnostic import Diagnostic
from ..macros import expression_views
from ..source import SourceUnit, SyntaxNode, comment_before
from . import CheckRun, register

SAFETY_PREFIX = " SAFETY:"


def has_safety_comment(unit: SourceUnit, node: SyntaxNode, *, line: int | None = None) -> bool:
    """True if the run of line comments directly above ``node`` contains a SAFETY line.

    ``line`` overrides the construct's first line (for nodes of macro views).
    """
    anchor = line if line is not None else unit.item_start_line(node)
    c = comment_before(unit, node, line=anchor)
    while c is not None:
        if c.props["text"].startswith(SAFETY_PREFIX):
            return True
        c = comment_before(unit, c)
    return False


def _label(node: SyntaxNode) -> str:
    if node.kind == "UnsafeBlock":
        return "unsafe block"
    if node.kind == "ImplBlock":
        return f"unsafe impl `{node.props.get('trait_path')}` for `{node.props.get('self_type_text')}`"
    return f"unsafe fn `{node.props.get('name')}`"


@register("CHK-SAFETY-COMMENT", "SAFETY-COMMENT", gated=True, tool=True)
def check_safety_comment(run: CheckRun) -> list[Diagnostic]:
    unit = run.unit
    out = []
    for view in expression_views(unit):
        for n in view.unit.walk("UnsafeBlock", "FunctionItem", "ImplBlock"):
            if n.kind != "UnsafeBlock" and not n.props.get("is_unsafe"):
                continue
            first = view.unit.attributes(n)[:1] or [n]
            if has_safety_comment(unit, n, line=view.span(first[0]).line_start):
                continue
            out.append(run.view_diag(view, n, f"{_label(n)} without a preceding `// SAFETY:` comment"))
    return out
