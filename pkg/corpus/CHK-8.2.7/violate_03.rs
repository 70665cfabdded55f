fn main() {
    let x = 9u8;
    let p = &x as *const u8;
    // SAFETY: `p` points at `x`
    println!("{} {}", p as usize, unsafe { *p });
}
