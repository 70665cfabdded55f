"""Call graph over the analysed set and recursion detection."""
from __future__ import annotations

from ..diagnostic import Diagnostic
from ..index import FnDecl, SetIndex, receiver_type_name, self_type_of, split_path
from ..resolve import enclosing_function, resolver_for
from ..source import SourceUnit, SyntaxNode
from . import CheckRun, register
from .expressions import child

FnKey = tuple[str, int]


def _callees(index: SetIndex, unit: SourceUnit, call: SyntaxNode, caller: FnDecl) -> list[FnDecl]:
    res = resolver_for(unit)
    self_type = self_type_of(unit, call)
    if call.kind == "CallExpr":
        path = call.props.get("callee_path_text")
        segs = split_path(path)
        if len(segs) == 1:
            fn_node = child(unit, call, "function")
            if fn_node is not None and fn_node.kind == "Identifier" and res.lookup(fn_node) is not None:
                return []  # a local closure or fn pointer, not an item
        cands = index.resolve_call(path, self_type=self_type)
        if len(segs) == 1:
            local = [d for d in cands if d.file == caller.file and d.module == caller.module]
            cands = local or cands
    else:
        name = call.props.get("method_name")
        fn_node = child(unit, call, "function")
        if fn_node is not None and fn_node.ts == "generic_function":
            fn_node = child(unit, fn_node, "function")
        recv = child(unit, fn_node, "value") if fn_node is not None else None
        if recv is None:
            return []
        owner = self_type if recv.ts == "self" else receiver_type_name(res.expr_type(recv))
        if owner is None:
            return []
        cands = [d for d in index.functions.get(name or "", []) if d.is_method and d.owner == owner]
    return [d for d in cands if d.has_body]


def call_graph(index: SetIndex) -> dict[FnKey, set[FnKey]]:
    cached = index.cache.get("call_graph")
    if cached is not None:
        return cached  # type: ignore[return-value]
    graph: dict[FnKey, set[FnKey]] = {k: set() for k, d in index.by_key.items() if d.has_body}
    for unit in index.units:
        for call in unit.walk("CallExpr", "MethodCallExpr"):
            fn = enclosing_function(unit, call)
            if fn is None:
                continue
            caller = index.by_key.get((unit.path, fn.node_id))
            if caller is None or caller.key not in graph:
                continue
            for callee in _callees(index, unit, call, caller):
                graph[caller.key].add(callee.key)
    index.cache["call_graph"] = graph
    return graph


def strongly_connected_components(graph: dict[FnKey, set[FnKey]]) -> list[list[FnKey]]:
    """Tarjan's algorithm, iterative so deep call chains cannot overflow the stack."""
    index_of: dict[FnKey, int] = {}
    low: dict[FnKey, int] = {}
    on_stack: set[FnKey] = set()
    stack: list[FnKey] = []
    sccs: list[list[FnKey]] = []
    counter = 0

    for root in sorted(graph):
        if root in index_of:
            continue
        work = [(root, iter(sorted(graph[root])))]
        index_of[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index_of:
                    index_of[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(graph.get(w, ())))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index_of[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index_of[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
    return sccs


def cyclic_functions(graph: dict[FnKey, set[FnKey]]) -> set[FnKey]:
    out: set[FnKey] = set()
    for comp in strongly_connected_components(graph):
        if len(comp) > 1 or comp[0] in graph.get(comp[0], ()):
            out.update(comp)
    return out


@register("CHK-8.2.10", "8.2.10")
def check_recursion(run: CheckRun) -> list[Diagnostic]:
    index = run.index
    cyclic = index.cache.get("cyclic")
    if cyclic is None:
        cyclic = cyclic_functions(call_graph(index))
        index.cache["cyclic"] = cyclic
    unit = run.unit
    out = []
    for fn in unit.walk("FunctionItem"):
        if (unit.path, fn.node_id) in cyclic:  # type: ignore[operator]
            out.append(run.diag(fn, f"function `{fn.props.get('name')}` is part of a recursive call cycle"))
    return out
