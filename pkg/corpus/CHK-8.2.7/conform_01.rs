// Safe twin of violate_01: no unsafe anywhere, so the gated check stays silent.
fn addr(p: *const u8) -> usize {
    p as usize
}

fn main() {
    let p = &5u8 as *const u8;
    let a = p as usize;
    println!("{} {}", addr(p), a);
}
