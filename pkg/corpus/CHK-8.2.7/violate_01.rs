fn addr(p: *const u8) -> usize {
    p as usize
}

fn main() {
    let p = &5u8 as *const u8;
    let a = p as usize;
    let v = unsafe { *p };
    println!("{} {} {}", addr(p), a, v);
}
