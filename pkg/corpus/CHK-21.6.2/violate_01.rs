struct Buf {
    p: *mut u8,
    len: usize,
}

fn main() {
    let b = Buf { p: std::ptr::null_mut(), len: 0 };
    println!("{}", b.len + b.p.is_null() as usize);
}
