/// Reads one byte.
unsafe fn read(p: *const u8) -> u8 {
    // SAFETY: caller guarantees `p` is valid
    unsafe { *p }
}

struct Token(u8);

unsafe impl Send for Token {}

fn main() {
    let x = 3u8;
    // read the byte back
    let v = unsafe { read(&x) };
    let _ = Token(v);
}
