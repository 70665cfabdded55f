import pytest

from helpers import REGISTRY, analyze, findings, lines
from misrust.checks import CHECKS, descriptor_problems
from misrust.checks.constexpr import is_constant_expression, split_top_level


def test_descriptor_invariant_gated_iff_unsafe_only_c4():
    assert descriptor_problems(REGISTRY) == []
    for d in CHECKS.values():
        if d.rule_id in REGISTRY:
            assert d.gated_on_unsafe == REGISTRY[d.rule_id].unsafe_gated, d.check_id


def test_at_least_13_checks():
    assert len(CHECKS) >= 13


# 12.3.1
def test_union_one_diagnostic_at_item():
    res = analyze("union U { a: u32, b: f32 }")
    (d,) = [d for d in res.unsuppressed if d.check_id == "CHK-12.3.1"]
    assert (d.line, d.col) == (1, 1) and "enum" in d.message


def test_enum_is_fine():
    assert lines("enum E { A(u32), B(f32) }", "CHK-12.3.1") == []


def test_two_unions_in_source_order():
    assert lines("union A { a: u8 }\nunion B { b: u8 }", "CHK-12.3.1") == [1, 2]


# 19.0.1
@pytest.mark.parametrize(
    "src,n",
    [("#[derive(Clone)]\nstruct S;", 0), ("#[dervie(Clone)]\nstruct S;", 1), ("#[mytool::trace]\nfn f() {}", 1),
     ("#[unsafe(no_mangle)]\nextern \"C\" fn f() {}", 0), ("#[unsafe(inline)]\nfn f() {}", 1),
     ("#[rustfmt::skip]\nfn f() {}", 0), ("#![allow(dead_code)]\nfn f() {}", 0)],
)  # fmt: skip
def test_attribute_validity(src, n):
    assert len(lines(src, "CHK-19.0.1")) == n


def test_configured_tool_namespace():
    assert lines("#[mytool::trace]\nfn f() {}", "CHK-19.0.1", options={"tool_attribute_namespaces": ["mytool"]}) == []


# 19.2.2
def test_glob_import_span_is_star():
    res = analyze("use std::collections::*;")
    (d,) = [d for d in res.unsuppressed if d.check_id == "CHK-19.2.2"]
    assert d.col == len("use std::collections::") + 1 and d.span.byte_end - d.span.byte_start == 1


@pytest.mark.parametrize("src,n", [("use mylib::prelude::*;", 0), ("use std::fmt;", 0), ("use std::{fmt::*, io};", 1)])
def test_import_syntax(src, n):
    assert len(lines(src, "CHK-19.2.2")) == n


# 6.0.3
def test_root_items_only_on_roots():
    assert lines("struct S;\nfn main() {}", "CHK-6.0.3", crate_root=True) == [1]
    assert lines("mod a {}\nfn main() {}", "CHK-6.0.3", crate_root=True) == []
    assert lines("struct S;", "CHK-6.0.3") == []


def test_root_allowlist_configurable():
    opts = {"root_item_allowlist": ["ModuleItem", "UseDecl", "Attribute", "FunctionItem:main", "ConstItem", "StructItem"]}
    assert lines("struct S;\nfn main() {}", "CHK-6.0.3", crate_root=True, options=opts) == []


def test_main_rs_is_a_root_by_default():
    from misrust import engine
    from misrust.registry import Profile
    from misrust.source import parse

    res = engine.run(REGISTRY, Profile("all"), [parse("src/main.rs", "struct S;\nfn main() {}")])
    assert [d.line for d in res.unsuppressed if d.check_id == "CHK-6.0.3"] == [1]


# 6.4.2
SHADOW = "trait T { fn go(&self); }\nstruct S;\nimpl T for S { fn go(&self) {} }\nimpl S { fn go(&self) {} }"


def test_shadowing_on_inherent_method():
    assert lines(SHADOW, "CHK-6.4.2") == [4]


def test_no_shadowing_cases():
    assert lines("trait T { fn go(&self); }\nstruct S;\nimpl T for S { fn go(&self) {} }", "CHK-6.4.2") == []
    assert lines("struct S;\nimpl S { fn go(&self) {} }", "CHK-6.4.2") == []


def test_shadowing_across_files():
    from misrust import engine
    from misrust.registry import Profile
    from misrust.source import parse

    a = parse("a.rs", "pub trait T { fn go(&self); }\npub struct S;\nimpl T for S { fn go(&self) {} }")
    b = parse("b.rs", "impl S { pub fn go(&self) {} }")
    res = engine.run(REGISTRY, Profile("all"), [a, b])
    assert [(d.file, d.line) for d in res.unsuppressed if d.check_id == "CHK-6.4.2"] == [("b.rs", 1)]


# 18.5.1
def test_panic_paths():
    assert lines("fn f(x: Option<u8>) -> u8 { x.unwrap() }", "CHK-18.5.1") == [1]
    assert lines("#[test]\nfn f() { Some(1).unwrap(); }", "CHK-18.5.1") == []
    assert lines('fn f() { panic!("boom") }', "CHK-18.5.1") == [1]


def test_panic_severity_is_advisory():
    (d,) = [d for d in analyze('fn f() { panic!("boom") }').unsuppressed if d.check_id == "CHK-18.5.1"]
    assert d.severity == "advisory"


def test_unwrap_span_is_method_name():
    res = analyze("fn f(x: Option<u8>) -> u8 { x.unwrap() }")
    (d,) = [d for d in res.unsuppressed if d.check_id == "CHK-18.5.1"]
    src = "fn f(x: Option<u8>) -> u8 { x.unwrap() }"
    assert src.encode()[d.span.byte_start : d.span.byte_end] == b"unwrap"


def test_unwrap_inside_format_arguments():
    assert lines('fn f(x: Option<u8>) { println!("{}", x.unwrap()); }', "CHK-18.5.1") == [1]


def test_panic_lists_configurable():
    assert lines("fn f(x: Option<u8>) -> u8 { x.unwrap() }", "CHK-18.5.1", options={"panic_methods": []}) == []


# 21.6.2
def test_drop_for_raw_holders():
    assert lines("struct S { p: *mut u8 }", "CHK-21.6.2") == [1]
    assert lines("struct S { p: *mut u8 }\nimpl Drop for S { fn drop(&mut self) {} }", "CHK-21.6.2") == []
    assert lines("struct S { v: Vec<u8> }", "CHK-21.6.2") == []


# 22.3.1
def test_const_assert():
    assert lines("fn f() { assert!(1 + 1 == 2); }", "CHK-22.3.1") == [1]
    assert lines("const SIZE: usize = 1;\nfn f() { const { assert!(SIZE > 0) }; }", "CHK-22.3.1") == []
    assert lines("fn f(x: i32) { assert!(x > 0); }", "CHK-22.3.1") == []


def test_assert_message_arguments_are_not_judged():
    assert lines('fn f(x: i32) { assert_eq!(x, 1, "{}", 2 + 2); }', "CHK-22.3.1") == []
    assert lines('fn f() { assert_eq!(2, 2, "{}", x); }', "CHK-22.3.1") == [1]


@pytest.mark.parametrize(
    "text,ok",
    [("1 + 1 == 2", True), ("!(3 > 2)", True), ("-1.5e3 < 0.0", True), ("'a' != 'b'", True), ("true && false", True),
     ("0x1F & 0b11 == 3u8", True), ("SIZE > 0", False), ("f(1)", False), ("1 +", False), ("(1", False), ("", False)],
)  # fmt: skip
def test_is_constant_expression(text, ok):
    assert is_constant_expression(text) is ok


def test_split_top_level_respects_nesting_and_strings():
    assert split_top_level('a, f(b, c), "x, y", \',\'') == ["a", "f(b, c)", '"x, y"', "','"]


# 8.2.7
UNSAFE_TAIL = "\nfn z(p: *const u8) -> u8 { unsafe { *p } }"


def test_ptr_int_cast_examples():
    assert lines("fn f(x: u8) { let p: *const u8 = &x; let a = p as usize; }" + UNSAFE_TAIL, "CHK-8.2.7") == [1]
    assert lines("fn f(x: i32) { let a = (&x as *const i32) as usize; }" + UNSAFE_TAIL, "CHK-8.2.7") == [1]
    assert lines("fn f(b: u32) { let a = b as usize; }" + UNSAFE_TAIL, "CHK-8.2.7") == []


def test_ptr_int_cast_is_gated():
    assert lines("fn f(x: u8) { let p: *const u8 = &x; let a = p as usize; }", "CHK-8.2.7") == []


def test_ptr_int_cast_inside_macro_argument():
    src = 'fn f(p: *const u8) { println!("{}", p as usize); }' + UNSAFE_TAIL
    res = analyze(src)
    (d,) = [d for d in res.unsuppressed if d.check_id == "CHK-8.2.7"]
    assert src.encode()[d.span.byte_start : d.span.byte_end] == b"p as usize"


# static mut
def test_static_mut():
    assert lines("static mut G: i32 = 0;", "CHK-STATIC-MUT") == [1]
    assert lines("static mut G: i32 = 0;\nfn f() {\n    unsafe { G = 1; }\n}", "CHK-STATIC-MUT") == [1, 3]
    assert lines("static G: i32 = 0;", "CHK-STATIC-MUT") == []


def test_static_mut_raw_borrow_is_not_an_access():
    assert lines("static mut G: i32 = 0;\nfn f() -> *mut i32 { &raw mut G }", "CHK-STATIC-MUT") == [1]


# safety comments
def test_safety_comment():
    assert lines("fn f(p: *const u8) -> u8 {\n    // SAFETY: index < len checked\n    unsafe { *p }\n}", "CHK-SAFETY-COMMENT") == []
    assert lines("fn f(p: *const u8) -> u8 {\n    unsafe { *p }\n}", "CHK-SAFETY-COMMENT") == [2]
    assert lines("fn f() {}", "CHK-SAFETY-COMMENT") == []


def test_safety_comment_inactive_under_safe_profile():
    assert lines("fn f(p: *const u8) -> u8 {\n    unsafe { *p }\n}", "CHK-SAFETY-COMMENT", profile="safe") == []


# recursion
def test_recursion_examples():
    assert lines("fn f() { f(); }", "CHK-8.2.10") == [1]
    assert lines("fn f() { g(); }\nfn g() { f(); }", "CHK-8.2.10") == [1, 2]
    assert lines("fn f() { g(); }\nfn g() { h(); }\nfn h() {}", "CHK-8.2.10") == []


def test_recursion_through_self_method_and_qualified_path():
    src = "struct S;\nimpl S {\n    fn a(&self) { self.b() }\n    fn b(&self) { S::a(self) }\n    fn c(&self) {}\n}"
    assert lines(src, "CHK-8.2.10") == [3, 4]


def test_recursion_ignores_shadowing_local_closure():
    assert lines("fn f() { let f = || 1; f(); }", "CHK-8.2.10") == []


def test_recursion_in_other_module_is_not_confused():
    src = "mod a { pub fn run() { super::b::run() } }\nmod b { pub fn run() {} }"
    assert lines(src, "CHK-8.2.10") == []


# heap allocation
def test_heap_alloc():
    assert lines("fn f() { let v = vec![1, 2]; }", "CHK-21.6.1", options={"no_alloc": True}) == [1]
    assert lines("fn f() { let v = vec![1, 2]; }", "CHK-21.6.1") == []
    assert lines("fn f() { let x = [0u8; 4]; }", "CHK-21.6.1", options={"no_alloc": True}) == []


def test_heap_alloc_nested_in_format_arguments_counted_once_each():
    src = 'fn f() { println!("{}", format!("{:?}", vec![1])); }'
    assert lines(src, "CHK-21.6.1", options={"no_alloc": True}) == [1, 1]


# float equality
def test_float_equality():
    assert lines("fn f(a: f64) { if a == 0.1 {} }", "CHK-0.3.1") == [1]
    assert lines("fn f(y: f64) { let x: f64 = g(); if x != y {} }\nfn g() -> f64 { 0.0 }", "CHK-0.3.1") == [1]
    assert lines("fn f(a: i32) { if a == 1 {} }", "CHK-0.3.1") == []


def test_float_equality_inferred_from_literal_initializer():
    assert lines("fn f() { let a = 0.5; let b = a; if a == b {} }", "CHK-0.3.1") == [1]


# toolchain
def test_toolchain_pinned():
    pinned = "rustc 1.92.0 (ded5c06cf 2025-12-08)"
    assert lines("fn main() {}", "CHK-4.1.1", toolchain=pinned) == []
    assert len(findings("fn main() {}", "CHK-4.1.1", toolchain=None)) == 1
    (d,) = [d for d in analyze("fn main() {}", toolchain="").unsuppressed if d.check_id == "CHK-4.1.1"]
    assert d.file == "<config>" and (d.line, d.col) == (1, 1)


def test_evidence_rule_spans_cover_witness_tokens():
    src = "use a::*;\nunion U { x: u8 }\nfn f(o: Option<u8>) -> u8 { o.unwrap() }"
    text = src.encode()
    witness = {"CHK-19.2.2": b"*", "CHK-12.3.1": b"union", "CHK-18.5.1": b"unwrap"}
    for d in analyze(src).unsuppressed:
        if d.check_id in witness:
            assert witness[d.check_id] in text[d.span.byte_start : d.span.byte_end]
