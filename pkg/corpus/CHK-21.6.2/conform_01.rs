struct Buf {
    p: *mut u8,
    len: usize,
}

impl Drop for Buf {
    fn drop(&mut self) {
        self.len = 0;
        self.p = std::ptr::null_mut();
    }
}

fn main() {
    let b = Buf { p: std::ptr::null_mut(), len: 0 };
    println!("{}", b.len);
}
