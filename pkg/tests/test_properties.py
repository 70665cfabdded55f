import json

from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import REGISTRY, analyze
from misrust.checks import CHECKS
from misrust.checks.callgraph import cyclic_functions, strongly_connected_components
from misrust.report import render
from misrust.source import parse
from misrust.unsafety import classify_contexts, inventory, unit_has_unsafe

SAFE_ITEMS = [
    "fn add(a: u32, b: u32) -> u32 { a + b }",
    "union Bits { i: u32, f: f32 }",
    "fn close(x: f64, y: f64) -> bool { x == y }",
    "fn first(v: Option<u8>) -> u8 { v.unwrap() }",
    "static mut COUNTER: u32 = 0;",
    "use std::collections::*;",
    "fn fact(n: u64) -> u64 { if n == 0 { 1 } else { n * fact(n - 1) } }",
    "struct Holder { p: *const u8 }",
    "fn grow() -> Vec<u8> { let v = vec![1, 2]; v }",
    "fn show(x: f32) { println!(\"{}\", x == 0.5); }",
    "const LIMIT: u32 = 10;\nfn check() { assert!(LIMIT > 3); }",
    "// misrust-deviation(12.3.1): hardware overlay\nunion Reg { raw: u32 }",
    "fn spin() { let mut i = 0; while i < 3 { i += 1; } }",
]
UNSAFE_ITEMS = [
    "fn deref(p: *const u8) -> u8 { unsafe { *p } }",
    "fn addr(p: *const u8) -> usize {\n    // SAFETY: only the address is read\n    unsafe { p as usize }\n}",
    "unsafe fn raw(p: *mut u8) { *p = 0; }",
    "fn bump() { unsafe { COUNTER += 1; } }",
    "fn log(p: *const u8) { println!(\"{}\", unsafe { *p }); }",
    "unsafe impl Send for Holder {}",
    "extern \"C\" { fn abs(x: i32) -> i32; }\nfn call() -> i32 { unsafe { abs(-1) } }",
]
GATED = {cid for cid, d in CHECKS.items() if d.gated_on_unsafe}

safe_programs = st.lists(st.sampled_from(SAFE_ITEMS), max_size=8)
programs = st.lists(st.sampled_from(SAFE_ITEMS + UNSAFE_ITEMS), max_size=8)


def ops(src):
    unit = parse("p.rs", src)
    return inventory(unit, classify_contexts(unit))


def source(items):
    return "\n".join(items) + "\n"


def keys(result):
    return sorted((d.rule_id, d.check_id, d.line, d.col, d.message) for d in result.unsuppressed)


@settings(max_examples=60, deadline=None)
@given(programs)
def test_analysis_is_deterministic(items):
    src = source(items)
    a, b = analyze(src), analyze(src)
    assert [d.to_json() for d in a.diagnostics] == [d.to_json() for d in b.diagnostics]
    assert render(REGISTRY, a, "json") == render(REGISTRY, b, "json")


@settings(max_examples=60, deadline=None)
@given(safe_programs)
def test_gated_checks_silent_without_unsafe(items):
    src = source(items)
    assert not unit_has_unsafe(parse("p.rs", src))
    assert ops(src) == []
    res = analyze(src)
    assert not any(d.check_id in GATED for d in res.diagnostics)
    status = json.loads(render(REGISTRY, res, "json"))["compliance"]
    assert all(status[g.id]["status"] == "GuaranteedByLanguage" for g in REGISTRY if g.unsafe_gated)


@settings(max_examples=60, deadline=None)
@given(programs)
def test_safe_profile_is_subset_of_all(items):
    src = source(items)
    assert set(keys(analyze(src, profile="safe"))) <= set(keys(analyze(src, profile="all")))


@settings(max_examples=60, deadline=None)
@given(programs, st.data())
def test_deleting_unsafe_item_never_grows_inventory(items, data):
    unsafe_idx = [i for i, it in enumerate(items) if it in UNSAFE_ITEMS]
    before = ops(source(items))
    if not unsafe_idx:
        assert before == []
        return
    drop = data.draw(st.sampled_from(unsafe_idx))
    after = ops(source(items[:drop] + items[drop + 1 :]))
    assert len(after) <= len(before)


@settings(max_examples=60, deadline=None)
@given(programs)
def test_spans_lie_within_the_file(items):
    src = source(items)
    size = len(src.encode())
    n_lines = src.count("\n") + 1
    for d in analyze(src).diagnostics:
        s = d.span
        assert 0 <= s.byte_start <= s.byte_end <= size
        assert 1 <= s.line_start <= s.line_end <= n_lines
        assert (s.line_start, s.col_start) <= (s.line_end, s.col_end)


@settings(max_examples=40, deadline=None)
@given(programs)
def test_reparsing_rendered_source_is_idempotent(items):
    src = source(items)
    unit = parse("p.rs", src)
    again = parse("p.rs", unit.source)
    assert unit.source == again.source
    assert keys(analyze(unit.source)) == keys(analyze(src))


graphs = st.integers(min_value=1, max_value=12).flatmap(
    lambda n: st.dictionaries(
        st.integers(0, n - 1).map(lambda i: ("f.rs", i)),
        st.sets(st.integers(0, n - 1).map(lambda i: ("f.rs", i)), max_size=4),
        min_size=1,
    )
)


def reachable(graph, start):
    seen, todo = set(), list(graph.get(start, ()))
    while todo:
        v = todo.pop()
        if v not in seen:
            seen.add(v)
            todo.extend(graph.get(v, ()))
    return seen


@settings(max_examples=200, deadline=None)
@given(graphs)
def test_tarjan_matches_reachability_oracle(graph):
    graph = {k: {v for v in vs if v in graph} for k, vs in graph.items()}
    expected = {v for v in graph if v in reachable(graph, v)}
    assert cyclic_functions(graph) == expected
    comps = strongly_connected_components(graph)
    assert sorted(v for c in comps for v in c) == sorted(graph)
    for comp in comps:
        for a in comp:
            assert all(b in reachable(graph, a) or a == b for b in comp)


def test_tarjan_handles_deep_chains():
    n = 5000
    graph = {("f.rs", i): {("f.rs", i + 1)} for i in range(n)}
    graph[("f.rs", n)] = {("f.rs", 0)}
    assert len(cyclic_functions(graph)) == n + 1
