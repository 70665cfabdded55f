fn main() {
    let x = 9u8;
    let p = &x as *const u8;
    println!("{}", unsafe { *p });
    // SAFETY: `p` points at `x`, which is live
    println!("{}", unsafe { *p });
}
