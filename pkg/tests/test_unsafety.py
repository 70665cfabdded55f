import subprocess

import pytest

from helpers import RUSTC
from misrust.index import SetIndex
from misrust.source import parse
from misrust.unsafety import UnsafeOperationKind as K
from misrust.unsafety import classify_contexts, inventory, unit_has_unsafe


def ops(src: str, **kw):
    u = parse("t.rs", src)
    return [(o.kind, u.text(o.span)) for o in inventory(u, classify_contexts(u), SetIndex.build([u]), **kw)]


def ctx_of(src: str, kind: str):
    u = parse("t.rs", src)
    ctx = classify_contexts(u)
    return [ctx.is_unsafe(n) for n in u.walk(kind)]


def test_safe_file_all_false():
    u = parse("t.rs", "fn main() { let x = 1; let _ = x + 1; }")
    assert not any(classify_contexts(u).in_unsafe)


def test_call_in_unsafe_fn_is_unsafe_context():
    assert ctx_of("unsafe fn h() {}\nunsafe fn g() { h(); }", "CallExpr") == [True]


def test_nested_unsafe_blocks():
    u = parse("t.rs", "fn f() { unsafe { let a = 1; unsafe { let b = a; } } }")
    ctx = classify_contexts(u)
    assert all(ctx.is_unsafe(n) for n in u.walk("LetBinding"))


def test_unsafe_impl_methods_are_unsafe_context():
    assert ctx_of("struct T;\nunsafe trait Tr { fn m(&self); }\nunsafe impl Tr for T { fn m(&self) { f(); } }\nfn f() {}", "CallExpr") == [True]


def test_nested_item_resets_context():
    assert ctx_of("fn o() { unsafe { fn inner() { g(); } } }\nfn g() {}", "CallExpr") == [False]


def test_static_mut_access_counted_once():
    assert ops("static mut C: u32 = 0;\nfn f() { unsafe { C += 1; } }") == [(K.StaticMutAccess, "C")]


def test_unsafe_trait_impl():
    assert ops("struct T;\nunsafe impl Send for T {}") == [(K.UnsafeTraitImpl, "unsafe impl Send for T {}")]


def test_safe_only_file_empty():
    assert ops("fn main() { let v = vec![1]; println!(\"{}\", v[0]); }") == []


def test_raw_pointer_deref_by_declared_type():
    src = "fn f(p: *const u8, r: &u8) -> u8 { unsafe { *p + *r } }"
    assert ops(src) == [(K.RawPointerDeref, "*p")]


def test_union_field_read_but_not_write():
    src = "union U { a: u32, b: f32 }\nfn f(mut u: U) -> u32 { u.b = 1.0; unsafe { u.a } }"
    assert ops(src) == [(K.UnionFieldAccess, "u.a")]


def test_unknown_callee_only_with_option():
    src = "fn f() { unsafe { ext(); } }"
    assert ops(src) == []
    assert ops(src, assume_unknown_calls_unsafe=True) == [(K.UnsafeFunctionCall, "ext()")]


def test_method_call_resolved_by_receiver_type():
    src = (
        "struct A;\nimpl A { unsafe fn go(&self) {} }\nstruct B;\nimpl B { fn go(&self) {} }\n"
        "fn f(a: &A, b: &B) { unsafe { a.go(); b.go(); } }"
    )
    assert ops(src) == [(K.UnsafeFunctionCall, "a.go()")]


def test_operations_inside_macro_arguments():
    src = "static mut C: u32 = 0;\nfn f(p: *const u8) { println!(\"{} {}\", unsafe { *p }, unsafe { C }); }"
    assert ops(src) == [(K.RawPointerDeref, "*p"), (K.StaticMutAccess, "C")]


@pytest.mark.parametrize(
    "src,expected",
    [("fn main(){}", False), ("fn main(){ unsafe {} }", True), ("unsafe fn f() {}", True),
     ("struct T;\nunsafe impl Send for T {}", True), ("fn f(p: *const u8) { println!(\"{}\", unsafe { *p }); }", True)],
)  # fmt: skip
def test_unit_has_unsafe(src, expected):
    assert unit_has_unsafe(parse("t.rs", src)) is expected


def test_operations_lie_in_unsafe_context():
    src = (
        "static mut C: u32 = 0;\nunion U { a: u32 }\nunsafe fn h() {}\n"
        "fn f(p: *mut u32, u: U) { unsafe { *p = C; h(); let _ = u.a; } }\nstruct T;\nunsafe impl Sync for T {}"
    )
    u = parse("t.rs", src)
    ctx = classify_contexts(u)
    found = inventory(u, ctx, SetIndex.build([u]))
    assert {o.kind for o in found} == set(K)
    for o in found:
        node = u.nodes[o.node_id]
        if o.kind is K.UnsafeTraitImpl:
            assert node.kind == "ImplBlock" and node.props["is_unsafe"]
        else:
            assert ctx.is_unsafe(node) and o.enclosing_unsafe_span is not None


# Reference-toolchain oracle: the snippet with `unsafe` compiles, and stripping
# the unsafe wrapper makes rustc reject it with E0133, so the inventoried
# operation really needs unsafe.
ORACLE_CASES = [
    ("unsafe fn h() {}\nunsafe fn g() { h(); }", "unsafe fn h() {}\nfn g() { h(); }", K.UnsafeFunctionCall),
    ("static mut C: u32 = 0;\nfn f() { unsafe { C += 1; } }", "static mut C: u32 = 0;\nfn f() { { C += 1; } }", K.StaticMutAccess),
    ("fn f(p: *const u8) -> u8 { unsafe { *p } }", "fn f(p: *const u8) -> u8 { { *p } }", K.RawPointerDeref),
    ("union U { a: u32 }\nfn f(u: U) -> u32 { unsafe { u.a } }", "union U { a: u32 }\nfn f(u: U) -> u32 { { u.a } }", K.UnionFieldAccess),
    ("fn f(p: *const u8) { println!(\"{}\", unsafe { *p }); }", "fn f(p: *const u8) { println!(\"{}\", { *p }); }", K.RawPointerDeref),
]  # fmt: skip


def _rustc(src: str, tmp_path) -> subprocess.CompletedProcess:
    f = tmp_path / "snippet.rs"
    f.write_text(src)
    return subprocess.run(
        [RUSTC, "--edition", "2024", "--crate-type", "lib", "--emit=metadata", "-A", "warnings",
         "--out-dir", str(tmp_path), str(f)],
        capture_output=True, text=True,
    )  # fmt: skip


@pytest.mark.skipif(RUSTC is None, reason="rustc not installed")
@pytest.mark.parametrize("with_unsafe,without,kind", ORACLE_CASES)
def test_rustc_oracle_agrees_with_inventory(with_unsafe, without, kind, tmp_path):
    assert [k for k, _ in ops(with_unsafe)] == [kind]
    assert _rustc(with_unsafe, tmp_path).returncode == 0
    rejected = _rustc(without, tmp_path)
    assert rejected.returncode != 0 and "E0133" in rejected.stderr
