//! Crate root with stray items.
#![allow(dead_code)]

use std::fmt;

const LIMIT: u32 = 10;

static NAME: &str = "demo";

fn helper() -> u32 {
    LIMIT
}

enum Mode {
    On,
    Off,
}

fn main() {
    let _ = (helper(), NAME, Mode::On, Mode::Off);
    let _: Option<fmt::Error> = None;
}
