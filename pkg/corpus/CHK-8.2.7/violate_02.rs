fn main() {
    let x = 7i32;
    let n = (&x as *const i32) as usize;
    let m: *mut u8 = std::ptr::null_mut();
    let k = m as u64;
    let y = unsafe { *(&x as *const i32) };
    println!("{n} {k} {y}");
}
