#[repr(C)]
union Word {
    bits: u32,
    bytes: [u8; 4],
}

union Pair {
    i: i64,
    f: f64,
}

fn main() {
    let _w = Word { bits: 0 };
    let _p = Pair { i: 0 };
}
