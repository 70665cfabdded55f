static mut COUNTER: u32 = 0;

fn bump() -> u32 {
    // SAFETY: single-threaded program
    unsafe {
        COUNTER += 1;
        COUNTER
    }
}

fn main() {
    println!("{}", bump());
}
