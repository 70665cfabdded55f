#![allow(dead_code)]

#[derive(Clone, Copy, Debug, PartialEq)]
#[repr(C)]
struct Pixel {
    r: u8,
    g: u8,
    b: u8,
}

/// Documented helper.
#[inline]
#[must_use]
fn brightness(p: Pixel) -> u16 {
    u16::from(p.r) + u16::from(p.g) + u16::from(p.b)
}

#[rustfmt::skip]
#[unsafe(no_mangle)]
pub extern "C" fn exported() {}


fn main() {
    let p = Pixel { r: 1, g: 2, b: 3 };
    println!("{}", brightness(p));
}
