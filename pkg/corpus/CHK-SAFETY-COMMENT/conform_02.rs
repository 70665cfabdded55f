/// Reads one byte.
///
/// # Safety
/// `p` must be valid for reads.
// SAFETY: callers uphold the pointer contract documented above
#[inline]
unsafe fn read(p: *const u8) -> u8 {
    // SAFETY: caller guarantees `p` is valid
    unsafe { *p }
}

struct Token(u8);

// SAFETY: Token owns only plain data
unsafe impl Send for Token {}

fn main() {
    let x = 3u8;
    // SAFETY: `&x` is a live reference
    let v = unsafe { read(&x) };
    let _ = Token(v);
}
