fn main() {
    let a: u32 = 7;
    let b = a as u64;
    let c = b as usize;
    let p = &a as *const u32;
    let d = unsafe { *p } as i64;
    println!("{b} {c} {d}");
}
